#include "cwi/resources.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>

#include "cwi/error.hpp"
#include "cwi/text.hpp"

namespace cwi {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

UnigramModel build_unigram_model(std::istream& corpus) {
  UnigramModel model;
  std::string line;
  while (std::getline(corpus, line)) {
    line = strip_cr(line);
    for (const std::string& raw : split_ws(line)) {
      std::string tok = text::lower_copy(raw);
      model.total_tokens += 1;
      model.total_chars += text::utf8_length(tok);
      ++model.counts[tok];
    }
  }
  if (model.total_tokens == 0) {
    throw ResourceError("unigram corpus is empty");
  }
  return model;
}

double unigram_logprob(const UnigramModel& model, std::string_view token) {
  const std::string key = text::lower_copy(token);
  std::uint64_t count = 0;
  auto it = model.counts.find(key);
  if (it != model.counts.end()) count = it->second;
  const double denom =
      static_cast<double>(model.total_tokens + model.vocab_size() + 1);
  return std::log(static_cast<double>(count + 1) / denom);
}

TrigramTable build_trigram_table(std::istream& corpus) {
  TrigramTable table;
  std::string line;
  while (std::getline(corpus, line)) {
    line = strip_cr(line);
    const std::u32string cps = text::decode_utf8(text::lower_copy(line));
    if (cps.size() < 3) continue;
    for (std::size_t i = 0; i + 3 <= cps.size(); ++i) {
      ++table.counts[text::encode_utf8(std::u32string_view(cps).substr(i, 3))];
      ++table.total;
    }
  }
  return table;
}

void HyphenationDict::add_pattern(const std::u32string& raw) {
  std::u32string letters;
  std::vector<std::uint8_t> digits;
  digits.push_back(0);  // slot before the first letter
  for (char32_t c : raw) {
    if (c >= U'0' && c <= U'9') {
      digits.back() = static_cast<std::uint8_t>(c - U'0');
    } else {
      letters.push_back(text::to_lower(c));
      digits.push_back(0);
    }
  }
  if (letters.empty()) return;
  patterns_[letters] = std::move(digits);
  max_pattern_len_ = std::max(max_pattern_len_, letters.size());
}

HyphenationDict HyphenationDict::from_stream(std::istream& in,
                                             std::string language_tag) {
  HyphenationDict dict;
  dict.language_tag_ = std::move(language_tag);

  std::string content;
  {
    std::ostringstream buf;
    buf << in.rdbuf();
    content = buf.str();
  }

  // TeX files keep the patterns inside \patterns{...}; use only that group
  // when present. Exception lists (\hyphenation{...}) are not supported.
  std::size_t begin = 0, end = content.size();
  const std::size_t group = content.find("\\patterns{");
  if (group != std::string::npos) {
    begin = group + 10;
    const std::size_t close = content.find('}', begin);
    if (close != std::string::npos) end = close;
  }

  std::istringstream body(content.substr(begin, end - begin));
  std::string line;
  bool first_line = group == std::string::npos;
  while (std::getline(body, line)) {
    line = strip_cr(line);
    const std::size_t comment = line.find('%');
    if (comment != std::string::npos) line.resize(comment);
    std::string trimmed = text::trim(line);
    if (trimmed.empty()) continue;
    if (first_line) {
      first_line = false;
      // Hunspell .dic files start with an encoding name.
      if (trimmed == "UTF-8" || trimmed.rfind("ISO8859", 0) == 0 ||
          trimmed.rfind("ISO-8859", 0) == 0 || trimmed == "microsoft-cp1251") {
        continue;
      }
    }
    for (const std::string& word : split_ws(trimmed)) {
      if (word.rfind("\\", 0) == 0) continue;  // stray TeX macro
      // Hunspell extended patterns carry /-suffixed replacement rules;
      // keep only the pattern part.
      std::string pat = word.substr(0, word.find('/'));
      if (pat.empty() || pat == "NEXTLEVEL") continue;
      dict.add_pattern(text::decode_utf8(pat));
    }
  }
  if (dict.patterns_.empty()) {
    throw ResourceError("hyphenation pattern file contains no patterns");
  }
  return dict;
}

HyphenationDict HyphenationDict::from_file(const std::string& path,
                                           std::string language_tag) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ResourceError("cannot open hyphenation patterns: " + path);
  return from_stream(in, std::move(language_tag));
}

std::vector<std::size_t> HyphenationDict::hyphenation_points(
    std::u32string_view word) const {
  if (word.size() < 2) return {};

  std::u32string padded;
  padded.reserve(word.size() + 2);
  padded.push_back(U'.');
  for (char32_t c : word) padded.push_back(text::to_lower(c));
  padded.push_back(U'.');

  // values[k]: digit between padded[k-1] and padded[k]
  std::vector<std::uint8_t> values(padded.size() + 1, 0);
  for (std::size_t i = 0; i < padded.size(); ++i) {
    const std::size_t maxlen =
        std::min(max_pattern_len_, padded.size() - i);
    for (std::size_t len = 1; len <= maxlen; ++len) {
      auto it = patterns_.find(std::u32string(padded.substr(i, len)));
      if (it == patterns_.end()) continue;
      const std::vector<std::uint8_t>& digits = it->second;
      for (std::size_t k = 0; k < digits.size(); ++k) {
        values[i + k] = std::max(values[i + k], digits[k]);
      }
    }
  }

  std::vector<std::size_t> points;
  // values index k corresponds to a break after (k-1) word characters.
  for (std::size_t k = 2; k < values.size() - 2; ++k) {
    const std::size_t chars_before = k - 1;
    if (values[k] % 2 == 0) continue;
    if (chars_before < left_min) continue;
    if (word.size() - chars_before < right_min) continue;
    points.push_back(chars_before);
  }
  return points;
}

int HyphenationDict::syllable_count(const std::string& word) const {
  const std::u32string cps = text::decode_utf8(word);
  int syllables = 0;
  std::size_t i = 0;
  while (i < cps.size()) {
    if (!text::is_alpha(cps[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < cps.size() && text::is_alpha(cps[j])) ++j;
    const std::u32string_view run(cps.data() + i, j - i);
    syllables += 1 + static_cast<int>(hyphenation_points(run).size());
    i = j;
  }
  return syllables > 0 ? syllables : 1;
}

namespace {

std::unordered_set<std::string> load_word_set(const std::string& path,
                                              const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ResourceError(std::string("cannot open ") + what + ": " + path);
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    // "token<TAB>count" or one token per line.
    const std::size_t tab = line.find('\t');
    std::string tok = text::trim(tab == std::string::npos ? line : line.substr(0, tab));
    if (tok.empty() || tok[0] == '#') continue;
    words.insert(text::lower_copy(tok));
  }
  return words;
}

std::unordered_map<std::string, std::uint64_t> load_count_table(
    const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ResourceError(std::string("cannot open ") + what + ": " + path);
  std::unordered_map<std::string, std::uint64_t> table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty() || line[0] == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      std::ostringstream os;
      os << what << " " << path << " line " << line_no
         << ": expected 'key<TAB>count'";
      throw ParseError(os.str());
    }
    const std::string key = text::lower_copy(text::trim(line.substr(0, tab)));
    const std::string count_str = text::trim(line.substr(tab + 1));
    std::uint64_t count = 0;
    for (char c : count_str) {
      if (c < '0' || c > '9') {
        std::ostringstream os;
        os << what << " " << path << " line " << line_no
           << ": non-integer count '" << count_str << "'";
        throw ParseError(os.str());
      }
      count = count * 10 + static_cast<std::uint64_t>(c - '0');
    }
    table[key] += count;
  }
  return table;
}

}  // namespace

ResourceBundle load_bundle(const std::string& manifest_path) {
  std::ifstream in(manifest_path, std::ios::binary);
  if (!in) throw ResourceError("cannot open resource manifest: " + manifest_path);

  const std::filesystem::path base =
      std::filesystem::path(manifest_path).parent_path();

  std::unordered_map<std::string, std::string> kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    const std::string t = text::trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      std::ostringstream os;
      os << manifest_path << " line " << line_no << ": expected 'key = value'";
      throw ParseError(os.str());
    }
    kv[text::trim(t.substr(0, eq))] = text::trim(t.substr(eq + 1));
  }

  auto resolve = [&](const std::string& p) {
    const std::filesystem::path fp(p);
    return fp.is_absolute() ? fp.string() : (base / fp).string();
  };

  ResourceBundle bundle;
  if (auto it = kv.find("language"); it != kv.end()) {
    bundle.language = language_from_string(it->second);
  } else {
    throw ResourceError(manifest_path + ": missing mandatory key 'language'");
  }

  auto it = kv.find("unigram");
  if (it == kv.end()) {
    throw ResourceError(manifest_path + ": missing mandatory key 'unigram'");
  }
  const std::string unigram_path = resolve(it->second);
  {
    std::ifstream uin(unigram_path, std::ios::binary);
    if (!uin) throw ResourceError("cannot open unigram corpus: " + unigram_path);
    bundle.unigram = build_unigram_model(uin);
  }

  it = kv.find("hyphenation");
  if (it == kv.end()) {
    throw ResourceError(manifest_path + ": missing mandatory key 'hyphenation'");
  }
  bundle.hyphenation = HyphenationDict::from_file(resolve(it->second),
                                                  to_string(bundle.language));

  if (auto t = kv.find("trigrams"); t != kv.end()) {
    const auto counts = load_count_table(resolve(t->second), "trigram table");
    for (const auto& [k, v] : counts) {
      bundle.trigrams.counts[k] = v;
      bundle.trigrams.total += v;
    }
  } else {
    // Default: trigram statistics from the same corpus as the unigram model.
    std::ifstream uin(unigram_path, std::ios::binary);
    bundle.trigrams = build_trigram_table(uin);
  }

  if (auto t = kv.find("stopwords"); t != kv.end()) {
    bundle.stopwords = load_word_set(resolve(t->second), "stopword list");
    bundle.has_stopwords = true;
  } else {
    bundle.degraded.push_back("stopwords");
  }

  if (auto t = kv.find("rare_words"); t != kv.end()) {
    bundle.rare_words = load_word_set(resolve(t->second), "frequency list");
    bundle.has_rare_words = true;
  } else {
    bundle.degraded.push_back("rare_words");
  }

  if (auto t = kv.find("affixes"); t != kv.end()) {
    for (const std::string& w :
         load_word_set(resolve(t->second), "affix list")) {
      bundle.affixes.push_back(w);
    }
    std::sort(bundle.affixes.begin(), bundle.affixes.end());
    bundle.has_affixes = true;
  } else {
    bundle.degraded.push_back("affixes");
  }

  if (auto t = kv.find("hypernyms"); t != kv.end()) {
    bundle.hypernym_counts = load_count_table(resolve(t->second),
                                              "hypernym table");
    bundle.has_hypernyms = true;
  } else {
    bundle.degraded.push_back("hypernyms");
  }

  if (auto t = kv.find("mean_word_chars"); t != kv.end()) {
    try {
      bundle.mean_word_chars = std::stod(t->second);
    } catch (const std::exception&) {
      throw ParseError(manifest_path + ": mean_word_chars is not a number: '" +
                       t->second + "'");
    }
  } else {
    bundle.mean_word_chars = static_cast<double>(bundle.unigram.total_chars) /
                             static_cast<double>(bundle.unigram.total_tokens);
  }
  if (!(bundle.mean_word_chars > 0)) {
    throw ResourceError(manifest_path + ": mean_word_chars must be positive");
  }
  return bundle;
}

}  // namespace cwi
