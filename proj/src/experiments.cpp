#include "cwi/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "cwi/error.hpp"
#include "cwi/text.hpp"

namespace cwi {

namespace {

// Deterministic parallel map: fn(i) writes only to slot i of its own output.
void parallel_for(std::size_t n, int jobs,
                  const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    threads.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

const GroupKey kAllGroups[] = {
    {Language::EN, Genre::News},      {Language::EN, Genre::WikiNews},
    {Language::EN, Genre::Wikipedia}, {Language::ES, Genre::None},
    {Language::DE, Genre::None},      {Language::FR, Genre::None},
};

const Language kTrainLanguages[] = {Language::EN, Language::ES, Language::DE};

}  // namespace

std::string to_string(const GroupKey& key) {
  if (key.genre == Genre::None) return to_string(key.language);
  return to_string(key.language) + "-" + to_string(key.genre);
}

// --- ExperimentPaths ---------------------------------------------------------

ExperimentPaths ExperimentPaths::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open experiment config: " + path);
  ExperimentPaths paths;
  paths.source_path = path;
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string t = text::trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      std::ostringstream os;
      os << path << " line " << line_no << ": expected 'key = value'";
      throw ConfigError(os.str());
    }
    const std::string key = text::trim(t.substr(0, eq));
    std::string value = text::trim(t.substr(eq + 1));
    if (key.rfind("data.", 0) == 0 || key.rfind("resources.", 0) == 0 ||
        key.rfind("sidecar.", 0) == 0 || key.rfind("tagset.", 0) == 0) {
      const std::filesystem::path vp(value);
      if (!vp.is_absolute()) value = (base / vp).string();
    }
    paths.kv[key] = value;
  }
  return paths;
}

std::optional<std::string> ExperimentPaths::get(const std::string& key) const {
  auto it = kv.find(key);
  if (it == kv.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> ExperimentPaths::dataset_path(const GroupKey& g,
                                                         Split split) const {
  const std::string lang = to_string(g.language);
  const std::string sp = to_string(split);
  if (g.genre != Genre::None) {
    return get("data." + lang + "." + to_string(g.genre) + "." + sp);
  }
  if (auto p = get("data." + lang + "." + sp)) return p;
  return get("data." + lang + ".None." + sp);
}

std::optional<std::string> ExperimentPaths::resources_path(
    Language lang) const {
  return get("resources." + to_string(lang));
}

std::optional<std::string> ExperimentPaths::sidecar_path(
    const GroupKey& g) const {
  if (g.genre != Genre::None) {
    if (auto p = get("sidecar." + to_string(g.language) + "." +
                     to_string(g.genre))) {
      return p;
    }
  }
  return get("sidecar." + to_string(g.language));
}

std::optional<std::string> ExperimentPaths::tagset_path(Language lang) const {
  return get("tagset." + to_string(lang));
}

// --- Repository --------------------------------------------------------------

Repository Repository::load(const ExperimentPaths& paths) {
  Repository repo;
  const ColumnMap columns;
  for (const GroupKey& g : kAllGroups) {
    for (Split split : {Split::Train, Split::Dev, Split::Test}) {
      const auto p = paths.dataset_path(g, split);
      if (!p) continue;
      repo.datasets_.emplace(
          std::make_pair(g, split),
          load_dataset(*p, columns, g.language, g.genre, split));
    }
  }
  for (Language lang :
       {Language::EN, Language::ES, Language::DE, Language::FR}) {
    if (const auto p = paths.resources_path(lang)) {
      ResourceBundle bundle = load_bundle(*p);
      if (bundle.language != lang) {
        throw ConfigError("resource manifest " + *p + " declares language " +
                          to_string(bundle.language) + ", expected " +
                          to_string(lang));
      }
      repo.bundles_.emplace(lang, std::move(bundle));
    }
  }
  for (const GroupKey& g : kAllGroups) {
    const auto p = paths.sidecar_path(g);
    if (!p) continue;
    const auto tagset = paths.tagset_path(g.language);
    repo.sidecars_.emplace(
        g, load_annotation_sidecar(*p, tagset ? *tagset : ""));
  }
  return repo;
}

const Dataset* Repository::dataset(const GroupKey& g, Split split) const {
  auto it = datasets_.find(std::make_pair(g, split));
  return it == datasets_.end() ? nullptr : &it->second;
}

const ResourceBundle* Repository::bundle(Language lang) const {
  auto it = bundles_.find(lang);
  return it == bundles_.end() ? nullptr : &it->second;
}

const SidecarTable* Repository::sidecar(const GroupKey& g) const {
  auto it = sidecars_.find(g);
  return it == sidecars_.end() ? nullptr : &it->second;
}

std::vector<GroupKey> Repository::groups() const {
  std::vector<GroupKey> out;
  for (const GroupKey& g : kAllGroups) {
    for (Split split : {Split::Train, Split::Dev, Split::Test}) {
      if (dataset(g, split) != nullptr) {
        out.push_back(g);
        break;
      }
    }
  }
  return out;
}

std::vector<GroupKey> Repository::train_groups() const {
  std::vector<GroupKey> out;
  for (const GroupKey& g : kAllGroups) {
    if (dataset(g, Split::Train) != nullptr) out.push_back(g);
  }
  return out;
}

const Repository::CachedSplit& Repository::cached(const GroupKey& g,
                                                  Split split) {
  const auto key = std::make_pair(g, split);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;

  const Dataset* ds = dataset(g, split);
  if (!ds) {
    throw ConfigError("no dataset configured for " + to_string(g) + " " +
                      to_string(split));
  }
  const ResourceBundle* b = bundle(g.language);
  if (!b) {
    throw ConfigError("no resource manifest configured for language " +
                      to_string(g.language));
  }
  const SidecarTable* sc = sidecar(g);
  AnnotationCache anns(*ds, sc);

  CachedSplit cs;
  const FeatureSet full = monolingual_feature_set();
  const Normalizers unit;  // mean_target_tokens = 1
  cs.full_vectors.reserve(ds->instances.size());
  cs.labels.reserve(ds->instances.size());
  for (const Instance& inst : ds->instances) {
    FeatureVector v =
        extract_features(inst, anns.get(inst.sentence), *b, full, unit);
    cs.target_token_counts.push_back(v.get("len_tokens"));
    cs.labels.push_back(inst.label);
    cs.full_vectors.push_back(std::move(v));
  }
  for (const std::string& asset : b->degraded) {
    cs.degraded.push_back("resources(" + to_string(g.language) +
                          "): missing " + asset);
  }
  if (anns.unannotated_count() > 0) {
    std::ostringstream os;
    os << to_string(g) << " " << to_string(split) << ": "
       << anns.unannotated_count() << "/" << anns.sentence_count()
       << " sentences without sidecar annotations";
    cs.degraded.push_back(os.str());
  }
  return cache_.emplace(key, std::move(cs)).first->second;
}

std::vector<std::string> Repository::degraded_notes() const {
  std::vector<std::string> notes;
  for (const auto& [key, cs] : cache_) {
    for (const std::string& d : cs.degraded) {
      if (std::find(notes.begin(), notes.end(), d) == notes.end()) {
        notes.push_back(d);
      }
    }
  }
  return notes;
}

// --- shared helpers ----------------------------------------------------------

namespace {

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) /
         static_cast<double>(xs.size());
}

struct ProjectedData {
  std::vector<FeatureVector> vectors;
  std::vector<Label> labels;
};

ProjectedData project_split(const Repository::CachedSplit& cs,
                            const FeatureSet& set, double mean_target_tokens) {
  ProjectedData out;
  out.vectors.reserve(cs.full_vectors.size());
  for (const FeatureVector& v : cs.full_vectors) {
    out.vectors.push_back(project_features(v, set, 1.0, mean_target_tokens));
  }
  out.labels = cs.labels;
  return out;
}

double eval_split(const LinearModel& model, const Repository::CachedSplit& cs,
                  const FeatureSet& set) {
  std::vector<Label> pred;
  pred.reserve(cs.full_vectors.size());
  for (const FeatureVector& v : cs.full_vectors) {
    pred.push_back(model.predict(project_features(
        v, set, 1.0, model.normalizers.mean_target_tokens)));
  }
  return macro_f1(cs.labels, pred);
}

}  // namespace

// --- monolingual -------------------------------------------------------------

MonoTable run_monolingual(Repository& repo, const FeatureSet& set,
                          const TrainConfig& config, int jobs) {
  const std::vector<GroupKey> groups = repo.train_groups();
  if (groups.empty()) {
    throw ConfigError("monolingual run: no groups with train data");
  }
  // Warm the extraction cache serially; the parallel section only reads.
  for (const GroupKey& g : groups) {
    repo.cached(g, Split::Train);
    if (repo.dataset(g, Split::Dev)) repo.cached(g, Split::Dev);
    if (repo.dataset(g, Split::Test)) repo.cached(g, Split::Test);
  }

  MonoTable table;
  table.feature_set = set.name;
  table.cells.resize(groups.size());
  parallel_for(groups.size(), jobs, [&](std::size_t i) {
    const GroupKey& g = groups[i];
    const Repository::CachedSplit& train_cs = repo.cached(g, Split::Train);
    Normalizers norms;
    norms.mean_target_tokens = mean_of(train_cs.target_token_counts);
    if (norms.mean_target_tokens <= 0) norms.mean_target_tokens = 1.0;

    ProjectedData train = project_split(train_cs, set, norms.mean_target_tokens);
    LinearModel model;
    try {
      model = cwi::train(train.vectors, train.labels, config, norms);
    } catch (const ModelError& e) {
      throw ModelError(to_string(g) + ": " + e.what());
    }

    MonoCell& cell = table.cells[i];
    cell.group = g;
    if (repo.dataset(g, Split::Dev)) {
      cell.dev_macro_f1 = eval_split(model, repo.cached(g, Split::Dev), set);
      cell.has_dev = true;
    }
    if (repo.dataset(g, Split::Test)) {
      cell.test_macro_f1 = eval_split(model, repo.cached(g, Split::Test), set);
      cell.has_test = true;
    }
  });

  std::vector<double> devs, tests;
  for (const MonoCell& c : table.cells) {
    if (c.has_dev) devs.push_back(c.dev_macro_f1);
    if (c.has_test) tests.push_back(c.test_macro_f1);
  }
  table.mean_dev = mean_of(devs);
  table.mean_test = mean_of(tests);
  return table;
}

// --- cross-lingual -----------------------------------------------------------

namespace {

std::vector<std::vector<Language>> language_subsets() {
  std::vector<std::vector<Language>> subsets;
  for (unsigned mask = 1; mask < 8; ++mask) {
    std::vector<Language> subset;
    for (unsigned b = 0; b < 3; ++b) {
      if (mask & (1u << b)) subset.push_back(kTrainLanguages[b]);
    }
    subsets.push_back(std::move(subset));
  }
  return subsets;
}

bool contains_language(const std::vector<Language>& langs, Language lang) {
  return std::find(langs.begin(), langs.end(), lang) != langs.end();
}

std::string join_languages(const std::vector<Language>& langs) {
  std::string out;
  for (Language l : langs) {
    if (!out.empty()) out += "+";
    out += to_string(l);
  }
  return out;
}

}  // namespace

LinearModel train_crosslingual(Repository& repo,
                               const std::vector<Language>& train_languages,
                               const TrainConfig& config,
                               const FeatureSet& set) {
  std::vector<const Repository::CachedSplit*> parts;
  for (const GroupKey& g : kAllGroups) {
    if (!contains_language(train_languages, g.language)) continue;
    if (repo.dataset(g, Split::Train) == nullptr) continue;
    parts.push_back(&repo.cached(g, Split::Train));
  }
  if (parts.empty()) {
    throw ConfigError("cross-lingual training: no train data for languages " +
                      join_languages(train_languages));
  }

  double token_sum = 0.0;
  std::size_t rows = 0;
  for (const auto* cs : parts) {
    token_sum += std::accumulate(cs->target_token_counts.begin(),
                                 cs->target_token_counts.end(), 0.0);
    rows += cs->target_token_counts.size();
  }
  Normalizers norms;
  norms.mean_target_tokens =
      rows > 0 ? token_sum / static_cast<double>(rows) : 1.0;
  if (norms.mean_target_tokens <= 0) norms.mean_target_tokens = 1.0;

  std::vector<FeatureVector> vectors;
  std::vector<Label> labels;
  vectors.reserve(rows);
  labels.reserve(rows);
  for (const auto* cs : parts) {
    for (const FeatureVector& v : cs->full_vectors) {
      vectors.push_back(
          project_features(v, set, 1.0, norms.mean_target_tokens));
    }
    labels.insert(labels.end(), cs->labels.begin(), cs->labels.end());
  }
  return train(vectors, labels, config, norms);
}

CrossTable run_crosslingual_permutations(Repository& repo,
                                         const TrainConfig& config, int jobs,
                                         const FeatureSet& set) {
  const auto subsets = language_subsets();

  // Which subsets have complete train data?
  std::vector<bool> subset_available(subsets.size(), true);
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    for (Language l : subsets[s]) {
      bool any = false;
      for (const GroupKey& g : kAllGroups) {
        if (g.language == l && repo.dataset(g, Split::Train)) any = true;
      }
      if (!any) subset_available[s] = false;
    }
  }

  // Warm extraction caches serially.
  for (const GroupKey& g : kAllGroups) {
    for (Split split : {Split::Train, Split::Dev, Split::Test}) {
      if (repo.dataset(g, split)) repo.cached(g, split);
    }
  }

  // Train one model per available subset.
  std::vector<std::unique_ptr<LinearModel>> models(subsets.size());
  parallel_for(subsets.size(), jobs, [&](std::size_t s) {
    if (!subset_available[s]) return;
    models[s] = std::make_unique<LinearModel>(
        train_crosslingual(repo, subsets[s], config, set));
  });

  // Evaluate every (subset, eval group) pair where the eval language was not
  // part of training and test data exists.
  struct CellPlan {
    std::size_t subset;
    GroupKey group;
  };
  std::vector<CellPlan> plan;
  for (const GroupKey& g : kAllGroups) {
    if (repo.dataset(g, Split::Test) == nullptr) continue;
    for (std::size_t s = 0; s < subsets.size(); ++s) {
      if (!subset_available[s]) continue;
      if (contains_language(subsets[s], g.language)) continue;
      plan.push_back({s, g});
    }
  }

  CrossTable table;
  table.cells.resize(plan.size());
  parallel_for(plan.size(), jobs, [&](std::size_t i) {
    const CellPlan& p = plan[i];
    CrossCell& cell = table.cells[i];
    cell.train_languages = subsets[p.subset];
    cell.eval_group = p.group;
    const LinearModel& model = *models[p.subset];
    cell.test_macro_f1 =
        eval_split(model, repo.cached(p.group, Split::Test), set);
    if (repo.dataset(p.group, Split::Dev)) {
      cell.dev_macro_f1 =
          eval_split(model, repo.cached(p.group, Split::Dev), set);
    }
  });
  return table;
}

const CrossCell* CrossTable::find(const std::vector<Language>& train,
                                  const GroupKey& eval_group) const {
  for (const CrossCell& cell : cells) {
    if (cell.eval_group == eval_group && cell.train_languages == train) {
      return &cell;
    }
  }
  return nullptr;
}

// --- greedy ablation ---------------------------------------------------------

AblationReport greedy_ablation(
    const std::vector<std::string>& candidate_families,
    const std::vector<std::string>& seed_families,
    const std::function<double(const FeatureSet&)>& score, int jobs) {
  std::vector<std::string> current = seed_families;
  std::vector<std::string> remaining;
  for (const std::string& c : candidate_families) {
    if (std::find(current.begin(), current.end(), c) == current.end()) {
      remaining.push_back(c);
    }
  }

  auto make_set = [](const std::vector<std::string>& families) {
    return custom_feature_set(families, "ablation");
  };

  AblationReport report;
  double current_score = score(make_set(current));

  while (!remaining.empty()) {
    AblationIteration iteration;
    iteration.current_features = current;
    iteration.current_score = current_score;
    iteration.candidates.resize(remaining.size());

    parallel_for(remaining.size(), jobs, [&](std::size_t i) {
      std::vector<std::string> trial = current;
      trial.push_back(remaining[i]);
      AblationCandidate& cand = iteration.candidates[i];
      cand.family = remaining[i];
      cand.score = score(make_set(trial));
      cand.delta = cand.score - current_score;
      cand.accepted = cand.delta > 0.0;  // strict increase only
    });

    std::vector<std::string> accepted;
    for (const AblationCandidate& c : iteration.candidates) {
      if (c.accepted) accepted.push_back(c.family);
    }
    report.iterations.push_back(iteration);
    if (accepted.empty()) break;

    for (const std::string& a : accepted) {
      current.push_back(a);
      remaining.erase(std::find(remaining.begin(), remaining.end(), a));
    }
    current_score = score(make_set(current));
  }

  report.final_features = current;
  report.final_score = current_score;
  return report;
}

std::function<double(const FeatureSet&)> crosslingual_dev_score(
    Repository& repo, const TrainConfig& config, int jobs) {
  // Materialize the (train subset, eval group) pairs with dev data up front;
  // the returned closure only reads the warmed cache.
  const auto subsets = language_subsets();
  struct Pair {
    std::vector<Language> train;
    GroupKey eval_group;
  };
  auto pairs = std::make_shared<std::vector<Pair>>();
  for (const GroupKey& g : kAllGroups) {
    if (repo.dataset(g, Split::Dev) == nullptr) continue;
    for (const auto& subset : subsets) {
      if (contains_language(subset, g.language)) continue;
      bool available = true;
      for (Language l : subset) {
        bool any = false;
        for (const GroupKey& tg : kAllGroups) {
          if (tg.language == l && repo.dataset(tg, Split::Train)) any = true;
        }
        if (!any) available = false;
      }
      if (available) pairs->push_back({subset, g});
    }
  }
  if (pairs->empty()) {
    throw ConfigError(
        "ablation score: no cross-lingual train/dev pairs available");
  }
  for (const GroupKey& g : kAllGroups) {
    for (Split split : {Split::Train, Split::Dev}) {
      if (repo.dataset(g, split)) repo.cached(g, split);
    }
  }

  Repository* repo_ptr = &repo;
  return [repo_ptr, pairs, config, jobs](const FeatureSet& set) {
    // One model per distinct train subset in the pair list.
    std::vector<std::vector<Language>> distinct;
    for (const Pair& p : *pairs) {
      if (std::find(distinct.begin(), distinct.end(), p.train) ==
          distinct.end()) {
        distinct.push_back(p.train);
      }
    }
    std::vector<std::unique_ptr<LinearModel>> models(distinct.size());
    parallel_for(distinct.size(), jobs, [&](std::size_t i) {
      models[i] = std::make_unique<LinearModel>(
          train_crosslingual(*repo_ptr, distinct[i], config, set));
    });
    double sum = 0.0;
    for (const Pair& p : *pairs) {
      const std::size_t mi = static_cast<std::size_t>(
          std::find(distinct.begin(), distinct.end(), p.train) -
          distinct.begin());
      sum += eval_split(*models[mi],
                        repo_ptr->cached(p.eval_group, Split::Dev), set);
    }
    return sum / static_cast<double>(pairs->size());
  };
}

// --- consistency analysis ----------------------------------------------------

double ConsistencyReport::ratio_at_least_one() const {
  const long mwes = total.total_mwes();
  return mwes == 0 ? 0.0
                   : static_cast<double>(total.at_least_one_irregular) /
                         static_cast<double>(mwes);
}

double ConsistencyReport::ratio_all_irregular() const {
  const long mwes = total.total_mwes();
  return mwes == 0 ? 0.0
                   : static_cast<double>(total.all_irregular) /
                         static_cast<double>(mwes);
}

ConsistencyReport analyze_consistency(
    const std::vector<const Dataset*>& datasets, int min_tokens) {
  if (min_tokens < 2) throw ConfigError("consistency: min_tokens must be >= 2");
  std::map<Language, ConsistencyRow> rows;
  std::vector<Language> seen_order;

  for (const Dataset* ds : datasets) {
    if (ds == nullptr) continue;
    if (rows.find(ds->language) == rows.end()) {
      rows[ds->language] = ConsistencyRow{};
      seen_order.push_back(ds->language);
    }
    SubwordIndex index(*ds);
    for (std::size_t i = 0; i < ds->instances.size(); ++i) {
      const Instance& inst = ds->instances[i];
      if (static_cast<int>(tokenize(inst.target).size()) < min_tokens) {
        continue;
      }
      ConsistencyRow& row = rows[ds->language];
      if (inst.label == Label::Complex) ++row.mwe_complex;
      else ++row.mwe_noncomplex;

      const std::vector<std::size_t> subs = index.subwords_of(i);
      if (subs.empty()) continue;
      bool any_opposite = false;
      bool all_opposite = true;
      for (std::size_t j : subs) {
        if (ds->instances[j].label != inst.label) any_opposite = true;
        else all_opposite = false;
      }
      if (any_opposite) ++row.at_least_one_irregular;
      if (all_opposite) ++row.all_irregular;
    }
  }

  ConsistencyReport report;
  // Table row order: EN, ES, DE, FR, restricted to languages seen.
  for (Language lang :
       {Language::EN, Language::ES, Language::DE, Language::FR}) {
    auto it = rows.find(lang);
    if (it == rows.end()) continue;
    report.rows.emplace_back(lang, it->second);
    report.total.mwe_complex += it->second.mwe_complex;
    report.total.mwe_noncomplex += it->second.mwe_noncomplex;
    report.total.at_least_one_irregular += it->second.at_least_one_irregular;
    report.total.all_irregular += it->second.all_irregular;
  }
  return report;
}

}  // namespace cwi
