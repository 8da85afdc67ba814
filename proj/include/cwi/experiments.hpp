#ifndef CWI_EXPERIMENTS_HPP
#define CWI_EXPERIMENTS_HPP

// Experiment orchestration: monolingual runs per dataset group, cross-lingual
// language permutations, greedy forward feature selection, and the MWE
// annotation-consistency analysis.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cwi/annotate.hpp"
#include "cwi/data.hpp"
#include "cwi/eval.hpp"
#include "cwi/features.hpp"
#include "cwi/model.hpp"
#include "cwi/resources.hpp"

namespace cwi {

struct GroupKey {
  Language language = Language::EN;
  Genre genre = Genre::None;

  auto operator<=>(const GroupKey&) const = default;
};

std::string to_string(const GroupKey& key);  // e.g. "EN-News", "ES"

// Key-value experiment configuration file. Schema:
//   data.<LANG>.<GENRE>.<split> = corpus.tsv   (GENRE omitted -> None)
//   resources.<LANG>            = manifest path
//   sidecar.<LANG>.<GENRE>      = sidecar path (or sidecar.<LANG>)
//   tagset.<LANG>               = tagset manifest (optional)
// Relative paths resolve against the config file's directory.
struct ExperimentPaths {
  std::map<std::string, std::string> kv;
  std::string source_path;

  static ExperimentPaths load_file(const std::string& path);

  std::optional<std::string> get(const std::string& key) const;
  std::optional<std::string> dataset_path(const GroupKey& g, Split split) const;
  std::optional<std::string> resources_path(Language lang) const;
  std::optional<std::string> sidecar_path(const GroupKey& g) const;
  std::optional<std::string> tagset_path(Language lang) const;
};

// Loaded corpora, bundles and sidecars plus a full-feature extraction cache
// (vectors extracted with mean_target_tokens = 1 and projected per run).
class Repository {
public:
  static Repository load(const ExperimentPaths& paths);

  const Dataset* dataset(const GroupKey& g, Split split) const;
  const ResourceBundle* bundle(Language lang) const;
  const SidecarTable* sidecar(const GroupKey& g) const;

  // Groups with at least one split present, declaration order:
  // EN-News, EN-WikiNews, EN-Wikipedia, ES, DE, FR.
  std::vector<GroupKey> groups() const;
  // Groups with a train split (monolingual table rows).
  std::vector<GroupKey> train_groups() const;

  struct CachedSplit {
    std::vector<FeatureVector> full_vectors;  // all 25 families, norm = 1
    std::vector<Label> labels;
    std::vector<double> target_token_counts;
    std::vector<std::string> degraded;
  };
  const CachedSplit& cached(const GroupKey& g, Split split);

  std::vector<std::string> degraded_notes() const;

private:
  std::map<std::pair<GroupKey, Split>, Dataset> datasets_;
  std::map<Language, ResourceBundle> bundles_;
  std::map<GroupKey, SidecarTable> sidecars_;
  std::map<std::pair<GroupKey, Split>, CachedSplit> cache_;
};

// --- monolingual runs -------------------------------------------------------

struct MonoCell {
  GroupKey group;
  double dev_macro_f1 = 0.0;
  double test_macro_f1 = 0.0;
  bool has_dev = false;
  bool has_test = false;
};

struct MonoTable {
  std::string feature_set;
  std::vector<MonoCell> cells;
  double mean_dev = 0.0;
  double mean_test = 0.0;
};

// Train on each group's train split, evaluate dev and test.
MonoTable run_monolingual(Repository& repo, const FeatureSet& set,
                          const TrainConfig& config, int jobs = 1);

// --- cross-lingual permutations ---------------------------------------------

struct CrossCell {
  std::vector<Language> train_languages;  // sorted EN < ES < DE
  GroupKey eval_group;
  double test_macro_f1 = 0.0;
  std::optional<double> dev_macro_f1;
};

struct CrossTable {
  std::vector<CrossCell> cells;

  const CrossCell* find(const std::vector<Language>& train,
                        const GroupKey& eval_group) const;
};

// For each eval group, train the cross-lingual feature set on every
// non-empty subset of the other training languages (concatenated train
// splits) and evaluate on the group's test (and dev when present).
CrossTable run_crosslingual_permutations(
    Repository& repo, const TrainConfig& config, int jobs = 1,
    const FeatureSet& set = crosslingual_feature_set());

// Trains one cross-lingual model on the given languages' train splits.
LinearModel train_crosslingual(Repository& repo,
                               const std::vector<Language>& train_languages,
                               const TrainConfig& config,
                               const FeatureSet& set = crosslingual_feature_set());

// --- greedy forward feature selection ----------------------------------------

struct AblationCandidate {
  std::string family;
  double score = 0.0;  // score of current set + candidate
  double delta = 0.0;
  bool accepted = false;
};

struct AblationIteration {
  std::vector<std::string> current_features;
  double current_score = 0.0;
  std::vector<AblationCandidate> candidates;
};

struct AblationReport {
  std::vector<AblationIteration> iterations;
  std::vector<std::string> final_features;
  double final_score = 0.0;
};

// Batch-per-iteration forward selection: every candidate whose addition
// strictly increases the score is accepted together; stops when none does.
AblationReport greedy_ablation(
    const std::vector<std::string>& candidate_families,
    const std::vector<std::string>& seed_families,
    const std::function<double(const FeatureSet&)>& score, int jobs = 1);

// Default ablation score: mean cross-lingual dev Macro-F1 over all
// train-subset/eval pairs that have dev data.
std::function<double(const FeatureSet&)> crosslingual_dev_score(
    Repository& repo, const TrainConfig& config, int jobs = 1);

// --- MWE annotation consistency ----------------------------------------------

struct ConsistencyRow {
  long mwe_complex = 0;
  long mwe_noncomplex = 0;
  long at_least_one_irregular = 0;
  long all_irregular = 0;

  long total_mwes() const { return mwe_complex + mwe_noncomplex; }
  bool operator==(const ConsistencyRow&) const = default;
};

struct ConsistencyReport {
  std::vector<std::pair<Language, ConsistencyRow>> rows;  // EN, ES, DE, FR
  ConsistencyRow total;

  double ratio_at_least_one() const;
  double ratio_all_irregular() const;
};

// For every MWE (target tokenizing to >= min_tokens tokens): counts whether
// any / all of its sub-word instances carry the opposite label.
ConsistencyReport analyze_consistency(
    const std::vector<const Dataset*>& datasets, int min_tokens = 2);

}  // namespace cwi

#endif  // CWI_EXPERIMENTS_HPP
