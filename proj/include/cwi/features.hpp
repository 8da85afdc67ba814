#ifndef CWI_FEATURES_HPP
#define CWI_FEATURES_HPP

// Sparse named feature vectors over annotated target spans. 25 feature
// families: 14 at the target level, 9 sub-word, 2 sentence-level. Scalar
// entries use the family name; bag entries use "family:key".

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cwi/annotate.hpp"
#include "cwi/data.hpp"
#include "cwi/resources.hpp"

namespace cwi {

struct FeatureVector {
  // Ordered map keeps iteration and serialization deterministic; absent = 0.
  std::map<std::string, double> entries;

  void add(const std::string& name, double value) {
    if (value != 0.0) entries[name] += value;
  }
  void set(const std::string& name, double value) {
    if (value != 0.0) entries[name] = value;
  }
  double get(const std::string& name) const {
    auto it = entries.find(name);
    return it == entries.end() ? 0.0 : it->second;
  }
  bool operator==(const FeatureVector&) const = default;
};

struct FeatureSet {
  std::string name;
  std::set<std::string> families;

  bool contains(const std::string& family) const {
    return families.count(family) > 0;
  }
};

// Declared feature families, Appendix-order: target level, sub-word,
// sentence level.
const std::vector<std::string>& all_feature_families();
bool is_bag_family(std::string_view family);

// Family of a feature name: everything before the first ':'.
std::string family_of(std::string_view feature_name);
bool is_valid_feature_name(std::string_view feature_name);

FeatureSet monolingual_feature_set();   // all 25 families
FeatureSet crosslingual_feature_set();  // len_sylls, len_tokens,
                                        // num_complex_punct, sent_length,
                                        // unigram_prob
FeatureSet baseline_feature_set();      // len_tokens, len_chars_norm

// Validates family names against the declared 25; throws ConfigError.
FeatureSet custom_feature_set(const std::vector<std::string>& families,
                              const std::string& name = "custom");

// Fitted normalization constants stored in the model artifact.
struct Normalizers {
  double mean_target_tokens = 1.0;
};

struct ExtractionOptions {
  bool binarize_is_stop = false;  // 1 if any target token is a stopword
};

// Computes exactly the families in `set` for one instance. `annotated` must
// be the instance's sentence; bundle language must match the instance's.
FeatureVector extract_features(const Instance& instance,
                               const AnnotatedSentence& annotated,
                               const ResourceBundle& bundle,
                               const FeatureSet& set,
                               const Normalizers& normalizers = {},
                               const ExtractionOptions& options = {});

// Restriction of a full vector to the families in `set`, rescaling
// len_tokens_norm from the normalizer it was extracted with.
FeatureVector project_features(const FeatureVector& full, const FeatureSet& set,
                               double extracted_mean_target_tokens,
                               double mean_target_tokens);

// Mean number of target tokens (tokens overlapping the target span) over a
// dataset; the len_tokens_norm normalizer is fitted with this on train data.
double mean_target_token_count(const Dataset& dataset,
                               const AnnotationCache& annotations);

// Serialization for --dump-features: "name<TAB>value" lines.
void write_feature_vector(std::ostream& out, const FeatureVector& v);

}  // namespace cwi

#endif  // CWI_FEATURES_HPP
