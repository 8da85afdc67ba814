#include "cwi/features.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "cwi/error.hpp"
#include "cwi/text.hpp"

namespace cwi {

namespace {

const char* kFamilies[] = {
    // target word/MWE level
    "NER_tag_counts", "pos_tag_counts", "hypernym_count", "len_tokens",
    "len_tokens_norm", "len_chars_norm", "unigram_prob", "bag_of_shapes",
    "rare_word_count", "rare_trigram_count", "is_stop", "is_nounphrase",
    "avg_chars_per_word", "iob_tags",
    // sub-word level
    "lemma_feats", "len_sylls", "num_complex_punct", "char_n_gram_feats",
    "char_tri_sum", "char_tri_avg", "consonant_freq", "gr_or_lat",
    "is_capitalised",
    // sentence level
    "sent_length", "sent_n_gram_feats",
};

const std::set<std::string>& bag_families() {
  static const std::set<std::string> bags = {
      "NER_tag_counts", "pos_tag_counts", "bag_of_shapes", "iob_tags",
      "lemma_feats",    "char_n_gram_feats", "sent_n_gram_feats",
  };
  return bags;
}

}  // namespace

const std::vector<std::string>& all_feature_families() {
  static const std::vector<std::string> families(std::begin(kFamilies),
                                                 std::end(kFamilies));
  return families;
}

bool is_bag_family(std::string_view family) {
  return bag_families().count(std::string(family)) > 0;
}

std::string family_of(std::string_view feature_name) {
  const std::size_t colon = feature_name.find(':');
  return std::string(feature_name.substr(0, colon));
}

bool is_valid_feature_name(std::string_view feature_name) {
  const std::string family = family_of(feature_name);
  const auto& families = all_feature_families();
  if (std::find(families.begin(), families.end(), family) == families.end()) {
    return false;
  }
  const bool has_key = feature_name.find(':') != std::string_view::npos;
  return has_key == is_bag_family(family);
}

FeatureSet monolingual_feature_set() {
  FeatureSet set;
  set.name = "monolingual25";
  set.families.insert(all_feature_families().begin(),
                      all_feature_families().end());
  return set;
}

FeatureSet crosslingual_feature_set() {
  return FeatureSet{"crosslingual5",
                    {"len_sylls", "len_tokens", "num_complex_punct",
                     "sent_length", "unigram_prob"}};
}

FeatureSet baseline_feature_set() {
  return FeatureSet{"baseline", {"len_tokens", "len_chars_norm"}};
}

FeatureSet custom_feature_set(const std::vector<std::string>& families,
                              const std::string& name) {
  const auto& declared = all_feature_families();
  FeatureSet set;
  set.name = name;
  for (const std::string& f : families) {
    if (std::find(declared.begin(), declared.end(), f) == declared.end()) {
      throw ConfigError("unknown feature family: '" + f + "'");
    }
    set.families.insert(f);
  }
  if (set.families.empty()) throw ConfigError("empty feature set");
  return set;
}

namespace {

// Tokens overlapping [start, end).
std::vector<std::size_t> target_token_indices(const Instance& inst,
                                              const AnnotatedSentence& as) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < as.tokens.size(); ++i) {
    const Token& t = as.tokens[i];
    if (t.start < inst.end && t.end > inst.start) idx.push_back(i);
  }
  return idx;
}

std::string lemma_or_fallback(const Token& tok, const TokenAnnotation& ann) {
  if (ann.lemma) return text::lower_copy(*ann.lemma);
  return text::lower_copy(tok.text);
}

// "B-ORG" -> ("B", "ORG"); "O" -> ("O", "")
std::pair<std::string, std::string> split_iob(const std::string& ner_iob) {
  const std::size_t dash = ner_iob.find('-');
  if (dash == std::string::npos) return {ner_iob, ""};
  return {ner_iob.substr(0, dash), ner_iob.substr(dash + 1)};
}

std::vector<std::string> char_trigrams(const std::u32string& cps) {
  std::vector<std::string> grams;
  if (cps.size() < 3) return grams;
  grams.reserve(cps.size() - 2);
  for (std::size_t i = 0; i + 3 <= cps.size(); ++i) {
    grams.push_back(text::encode_utf8(std::u32string_view(cps).substr(i, 3)));
  }
  return grams;
}

}  // namespace

FeatureVector extract_features(const Instance& inst,
                               const AnnotatedSentence& as,
                               const ResourceBundle& bundle,
                               const FeatureSet& set,
                               const Normalizers& normalizers,
                               const ExtractionOptions& options) {
  if (as.sentence != inst.sentence) {
    throw Error("annotated sentence does not match instance sentence (id " +
                inst.id + ")");
  }
  if (bundle.language != inst.language) {
    throw Error("resource bundle language " + to_string(bundle.language) +
                " does not match instance language " +
                to_string(inst.language) + " (id " + inst.id + ")");
  }

  FeatureVector out;
  const std::vector<std::size_t> target_idx = target_token_indices(inst, as);
  const double n_target_tokens = static_cast<double>(target_idx.size());
  const std::u32string target_cps = text::decode_utf8(inst.target);
  const double target_chars = static_cast<double>(target_cps.size());

  auto want = [&](const char* family) { return set.contains(family); };

  if (want("len_tokens")) out.set("len_tokens", n_target_tokens);
  if (want("len_tokens_norm")) {
    out.set("len_tokens_norm",
            n_target_tokens / normalizers.mean_target_tokens);
  }
  if (want("len_chars_norm")) {
    out.set("len_chars_norm", target_chars / bundle.mean_word_chars);
  }
  if (want("avg_chars_per_word") && n_target_tokens > 0) {
    out.set("avg_chars_per_word", target_chars / n_target_tokens);
  }

  if (want("unigram_prob")) {
    double logprob = 0.0;
    for (std::size_t i : target_idx) {
      logprob += unigram_logprob(bundle.unigram, as.tokens[i].text);
    }
    out.set("unigram_prob", logprob);
  }

  if (want("hypernym_count") && bundle.has_hypernyms) {
    double total = 0.0;
    for (std::size_t i : target_idx) {
      const std::string lemma = lemma_or_fallback(as.tokens[i], as.annotations[i]);
      auto it = bundle.hypernym_counts.find(lemma);
      if (it != bundle.hypernym_counts.end()) {
        total += static_cast<double>(it->second);
      }
    }
    out.set("hypernym_count", total);
  }

  if (want("NER_tag_counts") || want("iob_tags")) {
    for (std::size_t i : target_idx) {
      const TokenAnnotation& ann = as.annotations[i];
      if (!ann.ner_iob) continue;
      const auto [iob, type] = split_iob(*ann.ner_iob);
      if (want("iob_tags") && !iob.empty()) {
        out.add("iob_tags:" + iob, 1.0);
      }
      if (want("NER_tag_counts") && !type.empty()) {
        out.add("NER_tag_counts:" + type, 1.0);
      }
    }
  }

  if (want("pos_tag_counts")) {
    for (std::size_t i : target_idx) {
      if (as.annotations[i].pos) {
        out.add("pos_tag_counts:" + *as.annotations[i].pos, 1.0);
      }
    }
  }

  if (want("bag_of_shapes")) {
    for (std::size_t i : target_idx) {
      out.add("bag_of_shapes:" + word_shape(as.tokens[i].text), 1.0);
    }
  }

  if (want("rare_word_count") && bundle.has_rare_words) {
    double rare = 0.0;
    for (std::size_t i : target_idx) {
      if (!bundle.rare_words.count(text::lower_copy(as.tokens[i].text))) {
        rare += 1.0;
      }
    }
    out.set("rare_word_count", rare);
  }

  const std::u32string target_lower = [&] {
    std::u32string t = target_cps;
    for (char32_t& c : t) c = text::to_lower(c);
    return t;
  }();

  if (want("rare_trigram_count") || want("char_tri_sum") ||
      want("char_tri_avg")) {
    const std::vector<std::string> grams = char_trigrams(target_lower);
    if (!bundle.trigrams.empty()) {
      if (want("rare_trigram_count")) {
        std::set<std::string> unseen;
        for (const std::string& g : grams) {
          if (!bundle.trigrams.counts.count(g)) unseen.insert(g);
        }
        out.set("rare_trigram_count", static_cast<double>(unseen.size()));
      }
      if (want("char_tri_sum") || want("char_tri_avg")) {
        double sum = 0.0;
        for (const std::string& g : grams) {
          auto it = bundle.trigrams.counts.find(g);
          if (it != bundle.trigrams.counts.end()) {
            sum += static_cast<double>(it->second);
          }
        }
        if (want("char_tri_sum")) out.set("char_tri_sum", sum);
        if (want("char_tri_avg") && !grams.empty()) {
          out.set("char_tri_avg", sum / static_cast<double>(grams.size()));
        }
      }
    }
  }

  if (want("is_stop") && bundle.has_stopwords && n_target_tokens > 0) {
    double stops = 0.0;
    for (std::size_t i : target_idx) {
      if (bundle.stopwords.count(text::lower_copy(as.tokens[i].text))) {
        stops += 1.0;
      }
    }
    if (options.binarize_is_stop) {
      out.set("is_stop", stops > 0 ? 1.0 : 0.0);
    } else {
      out.set("is_stop", stops / n_target_tokens);
    }
  }

  if (want("is_nounphrase") && !target_idx.empty()) {
    bool all_np = true;
    for (std::size_t i : target_idx) {
      const auto& np = as.annotations[i].in_noun_phrase;
      if (!np.has_value() || !*np) {
        all_np = false;
        break;
      }
    }
    out.set("is_nounphrase", all_np ? 1.0 : 0.0);
  }

  if (want("lemma_feats")) {
    for (std::size_t i = 0; i < as.tokens.size(); ++i) {
      out.add("lemma_feats:" + lemma_or_fallback(as.tokens[i], as.annotations[i]),
              1.0);
    }
  }

  if (want("len_sylls")) {
    double sylls = 0.0;
    for (std::size_t i : target_idx) {
      sylls += bundle.hyphenation.syllable_count(as.tokens[i].text);
    }
    out.set("len_sylls", sylls);
  }

  if (want("num_complex_punct")) {
    double punct = 0.0;
    for (char32_t c : target_cps) {
      if (text::is_complex_punct(c)) punct += 1.0;
    }
    out.set("num_complex_punct", punct);
  }

  if (want("char_n_gram_feats")) {
    std::u32string padded;
    padded.reserve(target_lower.size() + 2);
    padded.push_back(U'^');
    padded += target_lower;
    padded.push_back(U'$');
    for (std::size_t n = 2; n <= 3; ++n) {
      if (padded.size() < n) continue;
      for (std::size_t i = 0; i + n <= padded.size(); ++i) {
        out.add("char_n_gram_feats:" +
                    text::encode_utf8(std::u32string_view(padded).substr(i, n)),
                1.0);
      }
    }
  }

  if (want("consonant_freq")) {
    double consonants = 0.0;
    for (char32_t c : target_cps) {
      if (text::is_alpha(c) && !text::is_vowel(text::to_lower(c))) {
        consonants += 1.0;
      }
    }
    out.set("consonant_freq", consonants);
  }

  if (want("gr_or_lat") && bundle.has_affixes) {
    bool found = false;
    for (std::size_t i : target_idx) {
      const std::string tok = text::lower_copy(as.tokens[i].text);
      for (const std::string& affix : bundle.affixes) {
        if (affix.size() > tok.size()) continue;
        if (tok.compare(0, affix.size(), affix) == 0 ||
            tok.compare(tok.size() - affix.size(), affix.size(), affix) == 0) {
          found = true;
          break;
        }
      }
      if (found) break;
    }
    out.set("gr_or_lat", found ? 1.0 : 0.0);
  }

  if (want("is_capitalised") && !target_cps.empty()) {
    out.set("is_capitalised", text::is_upper(target_cps[0]) ? 1.0 : 0.0);
  }

  if (want("sent_length")) {
    out.set("sent_length", static_cast<double>(as.tokens.size()));
  }

  if (want("sent_n_gram_feats")) {
    std::vector<std::string> lowered;
    lowered.reserve(as.tokens.size());
    for (const Token& t : as.tokens) lowered.push_back(text::lower_copy(t.text));
    for (std::size_t n = 1; n <= 3; ++n) {
      if (lowered.size() < n) break;
      for (std::size_t i = 0; i + n <= lowered.size(); ++i) {
        std::string key = "sent_n_gram_feats:";
        for (std::size_t k = 0; k < n; ++k) {
          if (k) key += '_';
          key += lowered[i + k];
        }
        out.add(key, 1.0);
      }
    }
  }

  return out;
}

FeatureVector project_features(const FeatureVector& full, const FeatureSet& set,
                               double extracted_mean_target_tokens,
                               double mean_target_tokens) {
  FeatureVector out;
  for (const auto& [name, value] : full.entries) {
    const std::string family = family_of(name);
    if (!set.contains(family)) continue;
    double v = value;
    if (family == "len_tokens_norm") {
      v = value * extracted_mean_target_tokens / mean_target_tokens;
    }
    out.set(name, v);
  }
  return out;
}

double mean_target_token_count(const Dataset& dataset,
                               const AnnotationCache& annotations) {
  if (dataset.instances.empty()) {
    throw Error("cannot fit normalizers on an empty dataset");
  }
  double total = 0.0;
  for (const Instance& inst : dataset.instances) {
    const AnnotatedSentence& as = annotations.get(inst.sentence);
    total += static_cast<double>(target_token_indices(inst, as).size());
  }
  return total / static_cast<double>(dataset.instances.size());
}

void write_feature_vector(std::ostream& out, const FeatureVector& v) {
  std::ostringstream os;
  os.precision(17);
  for (const auto& [name, value] : v.entries) {
    os << name << '\t' << value << '\n';
  }
  out << os.str();
}

}  // namespace cwi
