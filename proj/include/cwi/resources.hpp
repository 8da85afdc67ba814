#ifndef CWI_RESOURCES_HPP
#define CWI_RESOURCES_HPP

// Per-language lookup assets: unigram language model, character-trigram
// table, hyphenation patterns, stopword / frequency / affix lists, hypernym
// counts and normalization constants. Bundles are immutable after load and
// safe to share across feature-extraction workers.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cwi/data.hpp"

namespace cwi {

struct UnigramModel {
  std::unordered_map<std::string, std::uint64_t> counts;
  std::uint64_t total_tokens = 0;
  std::uint64_t total_chars = 0;  // characters over all token occurrences

  std::uint64_t vocab_size() const { return counts.size(); }
};

// Corpus format: one tokenized sentence per line, space-separated; the
// builder lowercases. Throws ResourceError on an empty corpus.
UnigramModel build_unigram_model(std::istream& corpus);

// Add-one smoothed natural-log probability; case-folded lookup. Out-of-
// vocabulary tokens get log(1 / (total_tokens + vocab_size + 1)).
double unigram_logprob(const UnigramModel& model, std::string_view token);

struct TrigramTable {
  std::unordered_map<std::string, std::uint64_t> counts;  // UTF-8 of 3 chars
  std::uint64_t total = 0;

  bool empty() const { return counts.empty(); }
};

// Character trigrams over each lowercased corpus line (spaces included).
TrigramTable build_trigram_table(std::istream& corpus);

// Liang-style pattern hyphenation. Accepts plain pattern lines, TeX files
// with a \patterns{...} group, and hunspell-style .dic files (leading
// encoding line skipped).
class HyphenationDict {
public:
  HyphenationDict() = default;

  static HyphenationDict from_stream(std::istream& in,
                                     std::string language_tag = "");
  static HyphenationDict from_file(const std::string& path,
                                   std::string language_tag = "");

  // Break positions (number of characters before the break) in a lowercased
  // all-alphabetic word, respecting left/right minima.
  std::vector<std::size_t> hyphenation_points(std::u32string_view word) const;

  // 1 + hyphenation points per maximal alphabetic run, summed over runs;
  // tokens without alphabetic characters count as one syllable.
  int syllable_count(const std::string& word) const;

  bool empty() const { return patterns_.empty(); }
  const std::string& language_tag() const { return language_tag_; }
  std::size_t pattern_count() const { return patterns_.size(); }

  std::size_t left_min = 2;
  std::size_t right_min = 2;

private:
  // pattern letters (with '.' boundary markers) -> inter-letter digit values
  std::unordered_map<std::u32string, std::vector<std::uint8_t>> patterns_;
  std::size_t max_pattern_len_ = 0;
  std::string language_tag_;

  void add_pattern(const std::u32string& raw);
};

struct ResourceBundle {
  Language language = Language::EN;
  UnigramModel unigram;
  TrigramTable trigrams;
  HyphenationDict hyphenation;
  std::unordered_set<std::string> stopwords;
  // Frequency-list membership: a token is rare iff NOT in this set.
  std::unordered_set<std::string> rare_words;
  std::vector<std::string> affixes;  // Greek/Latin roots, lowercased
  std::unordered_map<std::string, std::uint64_t> hypernym_counts;
  double mean_word_chars = 1.0;

  // Names of optional assets that were missing at load time.
  std::vector<std::string> degraded;

  bool has_stopwords = false;
  bool has_rare_words = false;
  bool has_affixes = false;
  bool has_hypernyms = false;
};

// Manifest: "key = path" lines (# comments allowed). Keys: language,
// unigram, hyphenation (mandatory); stopwords, rare_words, affixes,
// hypernyms, trigrams (optional); mean_word_chars (optional numeric
// override). Relative paths resolve against the manifest's directory.
ResourceBundle load_bundle(const std::string& manifest_path);

}  // namespace cwi

#endif  // CWI_RESOURCES_HPP
