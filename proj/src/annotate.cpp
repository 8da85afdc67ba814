#include "cwi/annotate.hpp"

#include <fstream>
#include <istream>
#include <sstream>

#include "cwi/data.hpp"
#include "cwi/error.hpp"
#include "cwi/text.hpp"

namespace cwi {

namespace {

bool is_word_char(char32_t c) { return text::is_alpha(c) || text::is_digit(c); }

}  // namespace

std::vector<Token> tokenize(const std::string& sentence) {
  const std::u32string cps = text::decode_utf8(sentence);
  std::vector<Token> tokens;

  auto emit = [&](std::size_t from, std::size_t to) {
    if (from >= to) return;
    Token t;
    t.start = from;
    t.end = to;
    t.text = text::encode_utf8(std::u32string_view(cps).substr(from, to - from));
    tokens.push_back(std::move(t));
  };

  std::size_t i = 0;
  const std::size_t n = cps.size();
  while (i < n) {
    if (text::is_space(cps[i])) {
      ++i;
      continue;
    }
    if (!is_word_char(cps[i])) {
      // Punctuation not glued inside a word: one token per character.
      emit(i, i + 1);
      ++i;
      continue;
    }
    // Word run: letters/digits, plus hyphens/apostrophes with a word
    // character on both sides.
    std::size_t j = i + 1;
    while (j < n) {
      if (is_word_char(cps[j])) {
        ++j;
      } else if (text::is_word_internal_punct(cps[j]) && j + 1 < n &&
                 is_word_char(cps[j + 1])) {
        j += 2;
      } else {
        break;
      }
    }
    emit(i, j);
    i = j;
  }
  return tokens;
}

std::string word_shape(const std::string& token_text) {
  const std::u32string cps = text::decode_utf8(token_text);
  std::u32string shape;
  shape.reserve(cps.size());
  char32_t run_char = 0;
  int run_len = 0;
  for (char32_t c : cps) {
    char32_t s;
    if (text::is_upper(c)) s = U'X';
    else if (text::is_lower(c)) s = U'x';
    else if (text::is_digit(c)) s = U'd';
    else s = c;
    if (s == run_char) {
      if (++run_len > 4) continue;
    } else {
      run_char = s;
      run_len = 1;
    }
    shape.push_back(s);
  }
  return text::encode_utf8(shape);
}

namespace {

std::optional<std::string> tag_field(const std::string& s) {
  if (s.empty() || s == "_") return std::nullopt;
  return s;
}

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

void finish_block(SidecarTable& table, const std::string& sentence,
                  std::vector<TokenAnnotation>&& anns) {
  if (sentence.empty()) return;
  const std::size_t expected = tokenize(sentence).size();
  if (anns.size() != expected) {
    std::ostringstream os;
    os << "sidecar block for sentence '" << sentence << "' has " << anns.size()
       << " token lines, tokenizer yields " << expected;
    throw ParseError(os.str());
  }
  table.by_sentence[sentence] = std::move(anns);
}

void check_tag(SidecarTable& table, const std::optional<std::string>& tag,
               const char* kind, const std::string& sentence) {
  if (!tag || table.tagset.empty()) return;
  if (table.tagset.count(*tag)) return;
  table.warnings.push_back(std::string("unknown ") + kind + " tag '" + *tag +
                           "' in sentence '" + sentence + "' (kept)");
}

}  // namespace

SidecarTable load_annotation_sidecar(std::istream& in,
                                     std::unordered_set<std::string> tagset) {
  SidecarTable table;
  table.tagset = std::move(tagset);
  std::string line;
  std::string sentence;
  std::vector<TokenAnnotation> anns;
  bool in_block = false;

  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (in_block) {
        finish_block(table, sentence, std::move(anns));
        anns.clear();
        in_block = false;
      }
      continue;
    }
    if (!in_block) {
      sentence = line;
      in_block = true;
      continue;
    }
    const std::vector<std::string> fields = split_tabs(line);
    if (fields.size() != 5) {
      std::ostringstream os;
      os << "sidecar token line needs 5 tab-separated fields "
            "(token lemma pos ner np_flag), got "
         << fields.size() << ": '" << line << "'";
      throw ParseError(os.str());
    }
    TokenAnnotation a;
    a.lemma = tag_field(fields[1]);
    a.pos = tag_field(fields[2]);
    a.ner_iob = tag_field(fields[3]);
    if (fields[4] == "1") a.in_noun_phrase = true;
    else if (fields[4] == "0") a.in_noun_phrase = false;
    else if (fields[4] == "_" || fields[4].empty()) a.in_noun_phrase = std::nullopt;
    else throw ParseError("sidecar np_flag must be 1, 0 or _: '" + line + "'");
    check_tag(table, a.pos, "pos", sentence);
    check_tag(table, a.ner_iob, "ner", sentence);
    anns.push_back(std::move(a));
  }
  if (in_block) finish_block(table, sentence, std::move(anns));
  return table;
}

SidecarTable load_annotation_sidecar(const std::string& path,
                                     const std::string& tagset_path) {
  std::unordered_set<std::string> tagset;
  if (!tagset_path.empty()) {
    std::ifstream tin(tagset_path, std::ios::binary);
    if (!tin) throw ResourceError("cannot open tagset manifest: " + tagset_path);
    std::string line;
    while (std::getline(tin, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const std::string tag = text::trim(line);
      if (!tag.empty()) tagset.insert(tag);
    }
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ResourceError("cannot open annotation sidecar: " + path);
  try {
    return load_annotation_sidecar(in, std::move(tagset));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

AnnotatedSentence annotate(const std::string& sentence,
                           const SidecarTable* sidecar) {
  AnnotatedSentence out;
  out.sentence = sentence;
  out.tokens = tokenize(sentence);
  if (sidecar != nullptr) {
    auto it = sidecar->by_sentence.find(sentence);
    if (it != sidecar->by_sentence.end()) {
      out.annotations = it->second;
      return out;
    }
  }
  out.annotations.assign(out.tokens.size(), TokenAnnotation{});
  return out;
}

AnnotationCache::AnnotationCache(const Dataset& dataset,
                                 const SidecarTable* sidecar) {
  for (const Instance& inst : dataset.instances) {
    if (cache_.count(inst.sentence)) continue;
    AnnotatedSentence as = annotate(inst.sentence, sidecar);
    const bool annotated = sidecar != nullptr && sidecar->has(inst.sentence);
    if (!annotated) ++unannotated_;
    cache_.emplace(inst.sentence, std::move(as));
  }
}

const AnnotatedSentence& AnnotationCache::get(
    const std::string& sentence) const {
  auto it = cache_.find(sentence);
  if (it == cache_.end()) {
    throw Error("sentence not in annotation cache: '" + sentence + "'");
  }
  return it->second;
}

}  // namespace cwi
