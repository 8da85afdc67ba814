#include "cwi/data.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "cwi/annotate.hpp"
#include "cwi/error.hpp"
#include "cwi/text.hpp"

namespace cwi {

std::string to_string(Language v) {
  switch (v) {
    case Language::EN: return "EN";
    case Language::ES: return "ES";
    case Language::DE: return "DE";
    case Language::FR: return "FR";
  }
  return "?";
}

std::string to_string(Genre v) {
  switch (v) {
    case Genre::News: return "News";
    case Genre::WikiNews: return "WikiNews";
    case Genre::Wikipedia: return "Wikipedia";
    case Genre::None: return "None";
  }
  return "?";
}

std::string to_string(Split v) {
  switch (v) {
    case Split::Train: return "train";
    case Split::Dev: return "dev";
    case Split::Test: return "test";
  }
  return "?";
}

Language language_from_string(const std::string& s) {
  if (s == "EN" || s == "en") return Language::EN;
  if (s == "ES" || s == "es") return Language::ES;
  if (s == "DE" || s == "de") return Language::DE;
  if (s == "FR" || s == "fr") return Language::FR;
  throw ConfigError("unknown language: '" + s + "' (expected EN, ES, DE or FR)");
}

Genre genre_from_string(const std::string& s) {
  if (s == "News" || s == "news") return Genre::News;
  if (s == "WikiNews" || s == "wikinews") return Genre::WikiNews;
  if (s == "Wikipedia" || s == "wikipedia") return Genre::Wikipedia;
  if (s == "None" || s == "none" || s.empty()) return Genre::None;
  throw ConfigError("unknown genre: '" + s +
                    "' (expected News, WikiNews, Wikipedia or None)");
}

Split split_from_string(const std::string& s) {
  if (s == "train" || s == "Train") return Split::Train;
  if (s == "dev" || s == "Dev") return Split::Dev;
  if (s == "test" || s == "Test") return Split::Test;
  throw ConfigError("unknown split: '" + s + "' (expected train, dev or test)");
}

bool ColumnMap::valid() const {
  const std::size_t idx[] = {id, sentence, start, end, target, binary_label};
  for (std::size_t i = 0; i < 6; ++i) {
    if (idx[i] >= expected_columns) return false;
    for (std::size_t j = i + 1; j < 6; ++j) {
      if (idx[i] == idx[j]) return false;
    }
  }
  return true;
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  while (true) {
    const std::size_t tab = line.find('\t', pos);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(pos));
      break;
    }
    fields.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
  return fields;
}

std::size_t parse_offset(const std::string& field, std::size_t line_no,
                         const char* what) {
  if (field.empty()) {
    std::ostringstream os;
    os << "line " << line_no << ": empty " << what << " offset";
    throw ParseError(os.str());
  }
  std::size_t value = 0;
  for (char c : field) {
    if (c < '0' || c > '9') {
      std::ostringstream os;
      os << "line " << line_no << ": non-integer " << what << " offset '"
         << field << "'";
      throw ParseError(os.str());
    }
    value = value * 10 + static_cast<std::size_t>(c - '0');
  }
  return value;
}

// Reads a line handling LF and CRLF; strips a UTF-8 BOM on the first line.
bool read_line(std::istream& in, std::string& line, bool first) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (first && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
    line.erase(0, 3);
  }
  return true;
}

}  // namespace

Dataset parse_dataset(std::istream& in, const ColumnMap& columns,
                      Language language, Genre genre, Split split,
                      bool skip_header) {
  if (!columns.valid()) {
    throw ConfigError("invalid column map: indices must be distinct and below "
                      "the expected column count");
  }
  Dataset dataset;
  dataset.language = language;
  dataset.genre = genre;
  dataset.split = split;

  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (read_line(in, line, first)) {
    first = false;
    ++line_no;
    if (line.empty()) continue;
    if (skip_header && line_no == 1) continue;

    const std::vector<std::string> fields = split_tabs(line);
    if (fields.size() < columns.expected_columns) {
      std::ostringstream os;
      os << "line " << line_no << ": expected at least "
         << columns.expected_columns << " tab-separated columns, got "
         << fields.size();
      throw ParseError(os.str());
    }

    Instance inst;
    inst.id = fields[columns.id];
    inst.sentence = fields[columns.sentence];
    inst.start = parse_offset(fields[columns.start], line_no, "start");
    inst.end = parse_offset(fields[columns.end], line_no, "end");
    inst.target = fields[columns.target];
    inst.language = language;
    inst.genre = genre;

    const std::string& label_field = fields[columns.binary_label];
    if (label_field == "0") {
      inst.label = Label::NonComplex;
    } else if (label_field == "1") {
      inst.label = Label::Complex;
    } else {
      std::ostringstream os;
      os << "line " << line_no << " (id " << inst.id
         << "): binary label must be 0 or 1, got '" << label_field << "'";
      throw ParseError(os.str());
    }

    const std::size_t sent_len = text::utf8_length(inst.sentence);
    if (!(inst.start < inst.end) || inst.end > sent_len) {
      std::ostringstream os;
      os << "line " << line_no << " (id " << inst.id << "): span ["
         << inst.start << ", " << inst.end << ") out of range for sentence of "
         << sent_len << " characters";
      throw ParseError(os.str());
    }
    if (text::trim(inst.target).empty()) {
      std::ostringstream os;
      os << "line " << line_no << " (id " << inst.id << "): empty target";
      throw ParseError(os.str());
    }
    const std::string span_text =
        text::utf8_substr(inst.sentence, inst.start, inst.end);
    if (span_text != inst.target) {
      std::ostringstream os;
      os << "line " << line_no << " (id " << inst.id << "): span text '"
         << span_text << "' does not match target '" << inst.target << "'";
      throw ParseError(os.str());
    }

    dataset.instances.push_back(std::move(inst));
  }
  return dataset;
}

Dataset load_dataset(const std::string& path, const ColumnMap& columns,
                     Language language, Genre genre, Split split,
                     bool skip_header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ResourceError("cannot open dataset file: " + path);
  try {
    return parse_dataset(in, columns, language, genre, split, skip_header);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_dataset(std::ostream& out, const Dataset& dataset,
                   const ColumnMap& columns) {
  for (const Instance& inst : dataset.instances) {
    std::vector<std::string> fields(columns.expected_columns, "-");
    fields[columns.id] = inst.id;
    fields[columns.sentence] = inst.sentence;
    fields[columns.start] = std::to_string(inst.start);
    fields[columns.end] = std::to_string(inst.end);
    fields[columns.target] = inst.target;
    fields[columns.binary_label] = inst.label == Label::Complex ? "1" : "0";
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out << '\t';
      out << fields[i];
    }
    out << '\n';
  }
}

bool is_mwe(const Instance& instance) {
  return tokenize(instance.target).size() >= 2;
}

namespace {

bool proper_subspan(const Instance& sub, const Instance& sup) {
  return sub.start >= sup.start && sub.end <= sup.end &&
         (sub.end - sub.start) < (sup.end - sup.start);
}

}  // namespace

std::vector<Instance> subwords_of(const Dataset& dataset,
                                  const Instance& instance) {
  std::vector<Instance> result;
  for (const Instance& other : dataset.instances) {
    if (other.sentence != instance.sentence) continue;
    if (proper_subspan(other, instance)) result.push_back(other);
  }
  return result;
}

SubwordIndex::SubwordIndex(const Dataset& dataset) : dataset_(&dataset) {
  std::unordered_map<std::string, std::size_t> group_ids;
  group_of_.resize(dataset.instances.size());
  for (std::size_t i = 0; i < dataset.instances.size(); ++i) {
    const std::string& sent = dataset.instances[i].sentence;
    auto [it, inserted] = group_ids.emplace(sent, groups_.size());
    if (inserted) groups_.emplace_back();
    groups_[it->second].push_back(i);
    group_of_[i] = it->second;
  }
}

std::vector<std::size_t> SubwordIndex::subwords_of(
    std::size_t instance_idx) const {
  const Instance& inst = dataset_->instances[instance_idx];
  std::vector<std::size_t> result;
  for (std::size_t j : groups_[group_of_[instance_idx]]) {
    if (j == instance_idx) continue;
    if (proper_subspan(dataset_->instances[j], inst)) result.push_back(j);
  }
  return result;
}

}  // namespace cwi
