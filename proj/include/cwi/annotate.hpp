#ifndef CWI_ANNOTATE_HPP
#define CWI_ANNOTATE_HPP

// Deterministic tokenization, word shapes, and ingestion of pre-computed
// token annotations (lemma/POS/NER/noun-phrase) from a sidecar file. There is
// no tagging here: sentences without sidecar entries get all-absent
// annotations and downstream features degrade to empty bags.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace cwi {

struct Dataset;

struct Token {
  std::string text;
  std::size_t start = 0;  // character offsets into the sentence
  std::size_t end = 0;

  bool operator==(const Token&) const = default;
};

struct TokenAnnotation {
  std::optional<std::string> pos;
  std::optional<std::string> ner_iob;  // CoNLL style: O, B-TYPE, I-TYPE
  std::optional<std::string> lemma;
  std::optional<bool> in_noun_phrase;

  bool operator==(const TokenAnnotation&) const = default;
};

struct AnnotatedSentence {
  std::string sentence;
  std::vector<Token> tokens;
  std::vector<TokenAnnotation> annotations;  // parallel to tokens
};

// Splits on Unicode whitespace, then splits leading/trailing punctuation and
// internal punctuation into separate single-character tokens. Hyphens and
// apostrophes with a letter or digit on both sides stay word-internal, so
// "laser-activated" and "don't" are single tokens.
std::vector<Token> tokenize(const std::string& sentence);

// Uppercase -> "X", lowercase -> "x", digit -> "d", anything else verbatim;
// runs longer than 4 of the same output symbol are compressed to 4.
std::string word_shape(const std::string& token_text);

// Sidecar file: one block per sentence, first line the raw sentence text,
// then one "token<TAB>lemma<TAB>pos<TAB>ner_iob<TAB>np_flag" line per token
// ("_" marks an absent field, np_flag is 1/0/_), blocks separated by blank
// lines. Token counts must match tokenize(sentence).
struct SidecarTable {
  std::unordered_map<std::string, std::vector<TokenAnnotation>> by_sentence;
  std::unordered_set<std::string> tagset;     // empty -> no tag checking
  std::vector<std::string> warnings;          // unknown tags, kept as-is

  bool has(const std::string& sentence) const {
    return by_sentence.count(sentence) > 0;
  }
};

SidecarTable load_annotation_sidecar(std::istream& in,
                                     std::unordered_set<std::string> tagset = {});
SidecarTable load_annotation_sidecar(const std::string& path,
                                     const std::string& tagset_path = "");

// Attaches sidecar annotations when present, otherwise all-absent ones.
AnnotatedSentence annotate(const std::string& sentence,
                           const SidecarTable* sidecar = nullptr);

// Per-sentence annotation cache for a dataset (sentences repeat per target).
class AnnotationCache {
public:
  AnnotationCache(const Dataset& dataset, const SidecarTable* sidecar);

  const AnnotatedSentence& get(const std::string& sentence) const;
  std::size_t sentence_count() const { return cache_.size(); }
  std::size_t unannotated_count() const { return unannotated_; }

private:
  std::unordered_map<std::string, AnnotatedSentence> cache_;
  std::size_t unannotated_ = 0;
};

}  // namespace cwi

#endif  // CWI_ANNOTATE_HPP
