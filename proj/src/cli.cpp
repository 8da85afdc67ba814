#include "cwi/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cwi/annotate.hpp"
#include "cwi/data.hpp"
#include "cwi/error.hpp"
#include "cwi/eval.hpp"
#include "cwi/experiments.hpp"
#include "cwi/features.hpp"
#include "cwi/model.hpp"
#include "cwi/resources.hpp"
#include "cwi/text.hpp"

namespace cwi {

namespace {

struct CommonDataArgs {
  std::vector<std::string> data_paths;
  std::string language = "EN";
  std::string genre = "None";
  std::string manifest;
  std::string sidecar;
  std::string tagset;
  bool skip_header = false;
};

void add_data_options(CLI::App* cmd, CommonDataArgs& args, bool multi) {
  if (multi) {
    cmd->add_option("--data", args.data_paths, "dataset TSV path(s)")
        ->required();
  } else {
    args.data_paths.resize(1);
    cmd->add_option("--data", args.data_paths[0], "dataset TSV path")
        ->required();
  }
  cmd->add_option("--lang", args.language, "language: EN, ES, DE or FR")
      ->required();
  cmd->add_option("--genre", args.genre,
                  "genre: News, WikiNews, Wikipedia or None (default)");
  cmd->add_option("--manifest", args.manifest,
                  "resource manifest (default: $CWI_RESOURCE_DIR/<lang>.manifest)");
  cmd->add_option("--sidecar", args.sidecar, "annotation sidecar file");
  cmd->add_option("--tagset", args.tagset, "tagset manifest for the sidecar");
  cmd->add_flag("--skip-header", args.skip_header,
                "skip the first line of each dataset file");
}

struct TrainArgs {
  double l2 = 1.0;
  int max_iter = 1000;
  double tol = 1e-6;
  std::string class_weights = "none";
};

void add_train_options(CLI::App* cmd, TrainArgs& args) {
  cmd->add_option("--l2", args.l2, "L2 regularization strength (default 1.0)");
  cmd->add_option("--max-iter", args.max_iter,
                  "maximum optimizer iterations (default 1000)");
  cmd->add_option("--tol", args.tol,
                  "gradient max-norm convergence tolerance (default 1e-6)");
  cmd->add_option("--class-weights", args.class_weights,
                  "none (default) or inverse")
      ->check(CLI::IsMember({"none", "inverse"}));
}

TrainConfig to_train_config(const TrainArgs& args) {
  TrainConfig config;
  config.l2_strength = args.l2;
  config.max_iterations = args.max_iter;
  config.tolerance = args.tol;
  config.inverse_frequency_class_weights = args.class_weights == "inverse";
  return config;
}

std::string resolve_manifest(const CommonDataArgs& args) {
  if (!args.manifest.empty()) return args.manifest;
  const char* dir = std::getenv("CWI_RESOURCE_DIR");
  if (dir == nullptr || *dir == '\0') {
    throw ConfigError("no --manifest given and CWI_RESOURCE_DIR is not set");
  }
  std::string lang = args.language;
  for (char& c : lang) c = static_cast<char>(std::tolower(c));
  return (std::filesystem::path(dir) / (lang + ".manifest")).string();
}

FeatureSet feature_set_by_name(const std::string& name,
                               const std::string& custom_csv) {
  if (name == "baseline") return baseline_feature_set();
  if (name == "monolingual25") return monolingual_feature_set();
  if (name == "crosslingual5") return crosslingual_feature_set();
  if (name == "custom") {
    std::vector<std::string> families;
    std::stringstream ss(custom_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const std::string f = text::trim(item);
      if (!f.empty()) families.push_back(f);
    }
    return custom_feature_set(families);
  }
  throw ConfigError("unknown feature set '" + name +
                    "' (expected baseline, monolingual25, crosslingual5 or "
                    "custom)");
}

std::ofstream open_output(const std::string& path, bool force) {
  if (!force && std::filesystem::exists(path)) {
    throw ConfigError("output file exists (use --force to overwrite): " + path);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ResourceError("cannot write output file: " + path);
  return out;
}

void warn_degraded(const std::vector<std::string>& notes) {
  for (const std::string& n : notes) {
    std::cerr << "warning: degraded mode: " << n << "\n";
  }
}

struct LoadedData {
  Dataset dataset;
  ResourceBundle bundle;
  SidecarTable sidecar;
  bool has_sidecar = false;
};

LoadedData load_common(const CommonDataArgs& args) {
  LoadedData out;
  const Language lang = language_from_string(args.language);
  const Genre genre = genre_from_string(args.genre);
  const ColumnMap columns;
  bool first = true;
  for (const std::string& path : args.data_paths) {
    Dataset ds = load_dataset(path, columns, lang, genre, Split::Train,
                              args.skip_header);
    if (first) {
      out.dataset = std::move(ds);
      first = false;
    } else {
      out.dataset.instances.insert(out.dataset.instances.end(),
                                   ds.instances.begin(), ds.instances.end());
    }
  }
  out.bundle = load_bundle(resolve_manifest(args));
  if (out.bundle.language != lang) {
    throw ConfigError("manifest language " + to_string(out.bundle.language) +
                      " does not match --lang " + to_string(lang));
  }
  if (!args.sidecar.empty()) {
    out.sidecar = load_annotation_sidecar(args.sidecar, args.tagset);
    out.has_sidecar = true;
    for (const std::string& w : out.sidecar.warnings) {
      std::cerr << "warning: " << w << "\n";
    }
  }
  std::vector<std::string> notes;
  for (const std::string& asset : out.bundle.degraded) {
    notes.push_back("resources(" + to_string(lang) + "): missing " + asset);
  }
  if (!out.has_sidecar) {
    notes.push_back("no annotation sidecar: POS/NER/lemma/noun-phrase "
                    "features fall back to empty bags");
  }
  warn_degraded(notes);
  return out;
}

double pct(double fraction) { return 100.0 * fraction; }

// --- train -------------------------------------------------------------------

int cmd_train(const CommonDataArgs& data_args, const TrainArgs& train_args,
              const std::string& features_name, const std::string& custom_csv,
              const std::string& out_path, bool force, bool binarize_is_stop,
              bool print_coefficients) {
  const LoadedData loaded = load_common(data_args);
  if (loaded.dataset.instances.empty()) {
    throw ParseError("training data is empty");
  }
  const FeatureSet set = feature_set_by_name(features_name, custom_csv);
  const TrainConfig config = to_train_config(train_args);

  AnnotationCache cache(loaded.dataset,
                        loaded.has_sidecar ? &loaded.sidecar : nullptr);
  Normalizers norms;
  norms.mean_target_tokens = mean_target_token_count(loaded.dataset, cache);

  ExtractionOptions options;
  options.binarize_is_stop = binarize_is_stop;
  std::vector<FeatureVector> vectors;
  std::vector<Label> labels;
  vectors.reserve(loaded.dataset.instances.size());
  for (const Instance& inst : loaded.dataset.instances) {
    vectors.push_back(extract_features(inst, cache.get(inst.sentence),
                                       loaded.bundle, set, norms, options));
    labels.push_back(inst.label);
  }

  const LinearModel model = train(vectors, labels, config, norms);
  {
    std::ofstream out = open_output(out_path, force);
    model.save(out);
  }
  std::cerr << "trained on " << vectors.size() << " instances, "
            << model.index.dimension() << " features, "
            << model.iterations << " iterations, final loss "
            << model.final_loss << (model.converged ? " (converged)" : "")
            << "\n";
  if (print_coefficients) {
    std::cout << std::setprecision(6);
    std::cout << "bias\t" << model.bias << "\n";
    for (const auto& [name, weight] : model.coefficients()) {
      std::cout << name << '\t' << weight << "\n";
    }
  }
  return 0;
}

// --- predict / evaluate ------------------------------------------------------

int cmd_predict(const CommonDataArgs& data_args, const std::string& model_path,
                const std::string& features_name, const std::string& custom_csv,
                const std::string& out_path, bool force,
                const std::string& format) {
  const LoadedData loaded = load_common(data_args);
  const LinearModel model = LinearModel::load_file(model_path);
  const FeatureSet set = feature_set_by_name(features_name, custom_csv);

  AnnotationCache cache(loaded.dataset,
                        loaded.has_sidecar ? &loaded.sidecar : nullptr);
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file = open_output(out_path, force);
    out = &file;
  }
  nlohmann::json rows = nlohmann::json::array();
  for (const Instance& inst : loaded.dataset.instances) {
    const FeatureVector v =
        extract_features(inst, cache.get(inst.sentence), loaded.bundle, set,
                         model.normalizers);
    const double proba = model.predict_proba(v);
    const int pred = proba >= 0.5 ? 1 : 0;
    const int gold = inst.label == Label::Complex ? 1 : 0;
    if (format == "json") {
      rows.push_back({{"id", inst.id},
                      {"gold", gold},
                      {"pred", pred},
                      {"proba", proba}});
    } else {
      (*out) << inst.id << '\t' << gold << '\t' << pred << '\t'
             << std::setprecision(6) << proba << '\n';
    }
  }
  if (format == "json") (*out) << rows.dump(2) << "\n";
  return 0;
}

int cmd_evaluate(const CommonDataArgs& data_args, const std::string& model_path,
                 const std::string& features_name,
                 const std::string& custom_csv, const std::string& format) {
  const LoadedData loaded = load_common(data_args);
  const LinearModel model = LinearModel::load_file(model_path);
  const FeatureSet set = feature_set_by_name(features_name, custom_csv);
  const EvalReport report =
      evaluate(model, loaded.dataset, loaded.bundle, set,
               loaded.has_sidecar ? &loaded.sidecar : nullptr);
  if (format == "json") {
    std::cout << report.to_json() << "\n";
  } else {
    report.write_text(std::cout);
  }
  return 0;
}

// --- dump-features -----------------------------------------------------------

int cmd_dump_features(const CommonDataArgs& data_args,
                      const std::string& features_name,
                      const std::string& custom_csv, const std::string& format,
                      const std::string& only_id) {
  const LoadedData loaded = load_common(data_args);
  const FeatureSet set = feature_set_by_name(features_name, custom_csv);
  AnnotationCache cache(loaded.dataset,
                        loaded.has_sidecar ? &loaded.sidecar : nullptr);

  Normalizers norms;
  norms.mean_target_tokens = mean_target_token_count(loaded.dataset, cache);

  nlohmann::json out = nlohmann::json::array();
  for (const Instance& inst : loaded.dataset.instances) {
    if (!only_id.empty() && inst.id != only_id) continue;
    const FeatureVector v = extract_features(
        inst, cache.get(inst.sentence), loaded.bundle, set, norms);
    if (format == "json") {
      nlohmann::json features = nlohmann::json::object();
      for (const auto& [name, value] : v.entries) features[name] = value;
      out.push_back({{"id", inst.id},
                     {"target", inst.target},
                     {"features", features}});
    } else {
      for (const auto& [name, value] : v.entries) {
        std::cout << inst.id << '\t' << name << '\t' << std::setprecision(17)
                  << value << '\n';
      }
    }
  }
  if (format == "json") std::cout << out.dump(2) << "\n";
  return 0;
}

// --- experiment tables -------------------------------------------------------

void write_config_echo(const std::string& dir, const ExperimentPaths& paths,
                       const TrainConfig& config,
                       const std::string& feature_sets, int jobs, bool force) {
  std::ofstream out = open_output(
      (std::filesystem::path(dir) / "resolved_config.txt").string(), force);
  out << "# fully-resolved configuration echo\n";
  out << "config_file = " << paths.source_path << "\n";
  for (const auto& [k, v] : paths.kv) out << k << " = " << v << "\n";
  out << "feature_sets = " << feature_sets << "\n";
  out << "l2_strength = " << config.l2_strength << "\n";
  out << "max_iterations = " << config.max_iterations << "\n";
  out << "tolerance = " << config.tolerance << "\n";
  out << "class_weights = "
      << (config.inverse_frequency_class_weights ? "inverse" : "none") << "\n";
  out << "jobs = " << jobs << "\n";
}

nlohmann::json mono_table_json(const MonoTable& table) {
  nlohmann::json cells = nlohmann::json::array();
  for (const MonoCell& c : table.cells) {
    nlohmann::json cell;
    cell["group"] = to_string(c.group);
    if (c.has_dev) cell["dev_macro_f1"] = c.dev_macro_f1;
    if (c.has_test) cell["test_macro_f1"] = c.test_macro_f1;
    cells.push_back(cell);
  }
  return {{"feature_set", table.feature_set},
          {"cells", cells},
          {"mean_dev_macro_f1", table.mean_dev},
          {"mean_test_macro_f1", table.mean_test}};
}

void print_mono_tables(std::ostream& out,
                       const std::vector<MonoTable>& tables) {
  out << std::fixed << std::setprecision(1);
  out << "Macro-F1 x 100\n";
  out << std::left << std::setw(16) << "dataset";
  for (const MonoTable& t : tables) {
    out << std::right << std::setw(8 + static_cast<int>(t.feature_set.size()))
        << ("dev:" + t.feature_set)
        << std::setw(9 + static_cast<int>(t.feature_set.size()))
        << ("test:" + t.feature_set);
  }
  out << "\n";
  if (tables.empty()) return;
  for (std::size_t i = 0; i < tables[0].cells.size(); ++i) {
    out << std::left << std::setw(16) << to_string(tables[0].cells[i].group);
    for (const MonoTable& t : tables) {
      out << std::right << std::setw(8 + static_cast<int>(t.feature_set.size()))
          << pct(t.cells[i].dev_macro_f1)
          << std::setw(9 + static_cast<int>(t.feature_set.size()))
          << pct(t.cells[i].test_macro_f1);
    }
    out << "\n";
  }
  out << std::left << std::setw(16) << "Mean";
  for (const MonoTable& t : tables) {
    out << std::right << std::setw(8 + static_cast<int>(t.feature_set.size()))
        << pct(t.mean_dev)
        << std::setw(9 + static_cast<int>(t.feature_set.size()))
        << pct(t.mean_test);
  }
  out << "\n";
  out.unsetf(std::ios::fixed);
}

int cmd_experiment_mono(const std::string& config_path,
                        const std::string& features_name,
                        const std::string& custom_csv,
                        const TrainArgs& train_args, const std::string& out_dir,
                        int jobs, bool force) {
  const ExperimentPaths paths = ExperimentPaths::load_file(config_path);
  Repository repo = Repository::load(paths);
  const TrainConfig config = to_train_config(train_args);

  std::vector<FeatureSet> sets;
  if (features_name.empty()) {
    sets.push_back(baseline_feature_set());
    sets.push_back(monolingual_feature_set());
  } else {
    sets.push_back(feature_set_by_name(features_name, custom_csv));
  }

  std::vector<MonoTable> tables;
  for (const FeatureSet& set : sets) {
    tables.push_back(run_monolingual(repo, set, config, jobs));
  }
  warn_degraded(repo.degraded_notes());

  print_mono_tables(std::cout, tables);
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::string names;
    for (const FeatureSet& s : sets) {
      if (!names.empty()) names += ",";
      names += s.name;
    }
    write_config_echo(out_dir, paths, config, names, jobs, force);
    nlohmann::json j = nlohmann::json::array();
    for (const MonoTable& t : tables) j.push_back(mono_table_json(t));
    open_output((std::filesystem::path(out_dir) / "mono.json").string(), force)
        << j.dump(2) << "\n";
    std::ofstream tsv = open_output(
        (std::filesystem::path(out_dir) / "mono.tsv").string(), force);
    tsv << "feature_set\tgroup\tdev_macro_f1\ttest_macro_f1\n";
    tsv << std::setprecision(17);
    for (const MonoTable& t : tables) {
      for (const MonoCell& c : t.cells) {
        tsv << t.feature_set << '\t' << to_string(c.group) << '\t'
            << c.dev_macro_f1 << '\t' << c.test_macro_f1 << '\n';
      }
      tsv << t.feature_set << "\tMean\t" << t.mean_dev << '\t' << t.mean_test
          << '\n';
    }
  }
  return 0;
}

std::string join_languages_str(const std::vector<Language>& langs) {
  std::string out;
  for (Language l : langs) {
    if (!out.empty()) out += "+";
    out += to_string(l);
  }
  return out;
}

int cmd_experiment_crosslingual(const std::string& config_path,
                                const TrainArgs& train_args,
                                const std::string& out_dir, int jobs,
                                bool force) {
  const ExperimentPaths paths = ExperimentPaths::load_file(config_path);
  Repository repo = Repository::load(paths);
  const TrainConfig config = to_train_config(train_args);
  const CrossTable table = run_crosslingual_permutations(repo, config, jobs);
  warn_degraded(repo.degraded_notes());

  std::cout << std::fixed << std::setprecision(1);
  std::cout << "Macro-F1 x 100 (cross-lingual feature set)\n";
  std::cout << std::left << std::setw(12) << "train" << std::setw(14) << "eval"
            << std::right << std::setw(8) << "test" << std::setw(8) << "dev"
            << "\n";
  for (const CrossCell& c : table.cells) {
    std::cout << std::left << std::setw(12)
              << join_languages_str(c.train_languages) << std::setw(14)
              << to_string(c.eval_group) << std::right << std::setw(8)
              << pct(c.test_macro_f1);
    if (c.dev_macro_f1) {
      std::cout << std::setw(8) << pct(*c.dev_macro_f1);
    } else {
      std::cout << std::setw(8) << "-";
    }
    std::cout << "\n";
  }
  std::cout.unsetf(std::ios::fixed);

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_config_echo(out_dir, paths, config, "crosslingual5", jobs, force);
    nlohmann::json cells = nlohmann::json::array();
    for (const CrossCell& c : table.cells) {
      nlohmann::json cell;
      cell["train"] = join_languages_str(c.train_languages);
      cell["eval"] = to_string(c.eval_group);
      cell["test_macro_f1"] = c.test_macro_f1;
      if (c.dev_macro_f1) cell["dev_macro_f1"] = *c.dev_macro_f1;
      cells.push_back(cell);
    }
    open_output((std::filesystem::path(out_dir) / "crosslingual.json").string(),
                force)
        << nlohmann::json{{"cells", cells}}.dump(2) << "\n";
    std::ofstream tsv = open_output(
        (std::filesystem::path(out_dir) / "crosslingual.tsv").string(), force);
    tsv << "train\teval\ttest_macro_f1\tdev_macro_f1\n";
    tsv << std::setprecision(17);
    for (const CrossCell& c : table.cells) {
      tsv << join_languages_str(c.train_languages) << '\t'
          << to_string(c.eval_group) << '\t' << c.test_macro_f1 << '\t';
      if (c.dev_macro_f1) tsv << *c.dev_macro_f1;
      else tsv << "-";
      tsv << '\n';
    }
  }
  return 0;
}

int cmd_ablate(const std::string& config_path, const TrainArgs& train_args,
               const std::string& seed_csv, const std::string& candidates_csv,
               const std::string& out_dir, int jobs, bool force) {
  const ExperimentPaths paths = ExperimentPaths::load_file(config_path);
  Repository repo = Repository::load(paths);
  const TrainConfig config = to_train_config(train_args);

  auto parse_csv = [](const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const std::string f = text::trim(item);
      if (!f.empty()) out.push_back(f);
    }
    return out;
  };

  std::vector<std::string> seed = parse_csv(seed_csv);
  if (seed.empty()) seed = {"len_tokens"};
  std::vector<std::string> candidates = parse_csv(candidates_csv);
  if (candidates.empty()) {
    for (const std::string& f : all_feature_families()) {
      if (std::find(seed.begin(), seed.end(), f) == seed.end()) {
        candidates.push_back(f);
      }
    }
  }
  custom_feature_set(seed);        // validate names early
  custom_feature_set(candidates);

  const auto score = crosslingual_dev_score(repo, config, jobs);
  const AblationReport report = greedy_ablation(candidates, seed, score, jobs);
  warn_degraded(repo.degraded_notes());

  std::cout << std::fixed << std::setprecision(2);
  for (std::size_t i = 0; i < report.iterations.size(); ++i) {
    const AblationIteration& it = report.iterations[i];
    std::cout << "iteration " << (i + 1) << " (current score "
              << pct(it.current_score) << "):";
    for (const std::string& f : it.current_features) std::cout << " " << f;
    std::cout << "\n";
    for (const AblationCandidate& c : it.candidates) {
      std::cout << "  " << (c.accepted ? "+" : "-") << " " << std::left
                << std::setw(20) << c.family << std::right << " delta "
                << std::showpos << pct(c.delta) << std::noshowpos << "\n";
    }
  }
  std::cout << "final (score " << pct(report.final_score) << "):";
  for (const std::string& f : report.final_features) std::cout << " " << f;
  std::cout << "\n";
  std::cout.unsetf(std::ios::fixed);

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::string seed_names;
    for (const std::string& s : seed) {
      if (!seed_names.empty()) seed_names += ",";
      seed_names += s;
    }
    write_config_echo(out_dir, paths, config, "ablation seed=" + seed_names,
                      jobs, force);
    nlohmann::json iterations = nlohmann::json::array();
    for (const AblationIteration& it : report.iterations) {
      nlohmann::json cands = nlohmann::json::array();
      for (const AblationCandidate& c : it.candidates) {
        cands.push_back({{"family", c.family},
                         {"score", c.score},
                         {"delta", c.delta},
                         {"accepted", c.accepted}});
      }
      iterations.push_back({{"current_features", it.current_features},
                            {"current_score", it.current_score},
                            {"candidates", cands}});
    }
    open_output((std::filesystem::path(out_dir) / "ablation.json").string(),
                force)
        << nlohmann::json{{"iterations", iterations},
                          {"final_features", report.final_features},
                          {"final_score", report.final_score}}
               .dump(2)
        << "\n";
  }
  return 0;
}

int cmd_analyze_consistency(const std::string& config_path,
                            const std::string& splits_csv, int min_tokens,
                            const std::string& format) {
  const ExperimentPaths paths = ExperimentPaths::load_file(config_path);
  Repository repo = Repository::load(paths);

  std::vector<Split> splits;
  {
    std::stringstream ss(splits_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const std::string s = text::trim(item);
      if (s.empty() || s == "all") continue;
      splits.push_back(split_from_string(s));
    }
  }
  if (splits.empty()) splits = {Split::Train, Split::Dev, Split::Test};

  std::vector<const Dataset*> datasets;
  for (const GroupKey& g : repo.groups()) {
    for (Split split : splits) {
      if (const Dataset* ds = repo.dataset(g, split)) datasets.push_back(ds);
    }
  }
  if (datasets.empty()) {
    throw ConfigError("analyze-consistency: no datasets selected");
  }
  const ConsistencyReport report = analyze_consistency(datasets, min_tokens);

  if (format == "json") {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [lang, row] : report.rows) {
      rows.push_back({{"language", to_string(lang)},
                      {"mwe_complex", row.mwe_complex},
                      {"mwe_noncomplex", row.mwe_noncomplex},
                      {"at_least_one_irregular", row.at_least_one_irregular},
                      {"all_irregular", row.all_irregular}});
    }
    nlohmann::json j = {
        {"rows", rows},
        {"total",
         {{"mwe_complex", report.total.mwe_complex},
          {"mwe_noncomplex", report.total.mwe_noncomplex},
          {"at_least_one_irregular", report.total.at_least_one_irregular},
          {"all_irregular", report.total.all_irregular}}},
        {"ratio_at_least_one_irregular", report.ratio_at_least_one()},
        {"ratio_all_irregular", report.ratio_all_irregular()}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << std::left << std::setw(10) << "language" << std::right
              << std::setw(10) << "C" << std::setw(10) << "NC" << std::setw(12)
              << ">=1 Irreg" << std::setw(12) << "All Irreg"
              << "\n";
    auto row_line = [&](const std::string& name, const ConsistencyRow& row) {
      std::cout << std::left << std::setw(10) << name << std::right
                << std::setw(10) << row.mwe_complex << std::setw(10)
                << row.mwe_noncomplex << std::setw(12)
                << row.at_least_one_irregular << std::setw(12)
                << row.all_irregular << "\n";
    };
    for (const auto& [lang, row] : report.rows) row_line(to_string(lang), row);
    row_line("Total", report.total);
    std::cout << std::fixed << std::setprecision(3);
    std::cout << "at-least-one-irregular / MWEs = "
              << report.ratio_at_least_one() << "\n";
    std::cout << "all-irregular / MWEs          = "
              << report.ratio_all_irregular() << "\n";
    std::cout.unsetf(std::ios::fixed);
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"cwi: complex word identification toolkit"};
  app.require_subcommand(1);

  // train
  auto* train_cmd = app.add_subcommand("train", "train a model");
  CommonDataArgs train_data;
  TrainArgs train_args;
  std::string train_features = "monolingual25", train_custom, train_out;
  bool train_force = false, binarize_is_stop = false, print_coef = false;
  add_data_options(train_cmd, train_data, /*multi=*/true);
  add_train_options(train_cmd, train_args);
  train_cmd->add_option("--features", train_features,
                        "baseline | monolingual25 | crosslingual5 | custom");
  train_cmd->add_option("--custom-features", train_custom,
                        "comma-separated family list for --features custom");
  train_cmd->add_option("--out", train_out, "model output path")->required();
  train_cmd->add_flag("--force", train_force, "overwrite existing outputs");
  train_cmd->add_flag("--binarize-is-stop", binarize_is_stop,
                      "is_stop as 0/1 instead of a fraction");
  train_cmd->add_flag("--print-coefficients", print_coef,
                      "print named coefficients sorted by |weight|");

  // predict
  auto* predict_cmd = app.add_subcommand("predict", "predict labels");
  CommonDataArgs predict_data;
  std::string predict_model, predict_features = "monolingual25",
                             predict_custom, predict_out,
                             predict_format = "tsv";
  bool predict_force = false;
  add_data_options(predict_cmd, predict_data, /*multi=*/false);
  predict_cmd->add_option("--model", predict_model, "model file")->required();
  predict_cmd->add_option("--features", predict_features,
                          "feature set used at training time");
  predict_cmd->add_option("--custom-features", predict_custom, "family list");
  predict_cmd->add_option("--out", predict_out, "output path (default stdout)");
  predict_cmd->add_option("--format", predict_format, "tsv | json")
      ->check(CLI::IsMember({"tsv", "json"}));
  predict_cmd->add_flag("--force", predict_force, "overwrite existing outputs");

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "evaluate a model");
  CommonDataArgs eval_data;
  std::string eval_model, eval_features = "monolingual25", eval_custom,
                          eval_format = "text";
  add_data_options(eval_cmd, eval_data, /*multi=*/false);
  eval_cmd->add_option("--model", eval_model, "model file")->required();
  eval_cmd->add_option("--features", eval_features,
                       "feature set used at training time");
  eval_cmd->add_option("--custom-features", eval_custom, "family list");
  eval_cmd->add_option("--format", eval_format, "text | json")
      ->check(CLI::IsMember({"text", "json"}));

  // dump-features
  auto* dump_cmd =
      app.add_subcommand("dump-features", "print extracted feature vectors");
  CommonDataArgs dump_data;
  std::string dump_features = "monolingual25", dump_custom,
              dump_format = "tsv", dump_id;
  add_data_options(dump_cmd, dump_data, /*multi=*/false);
  dump_cmd->add_option("--features", dump_features, "feature set");
  dump_cmd->add_option("--custom-features", dump_custom, "family list");
  dump_cmd->add_option("--format", dump_format, "tsv | json")
      ->check(CLI::IsMember({"tsv", "json"}));
  dump_cmd->add_option("--id", dump_id, "only this instance id");

  // experiment mono / crosslingual
  auto* exp_cmd = app.add_subcommand("experiment", "run experiment suites");
  exp_cmd->require_subcommand(1);
  auto* mono_cmd = exp_cmd->add_subcommand(
      "mono", "monolingual runs per dataset group (dev/test Macro-F1)");
  std::string mono_config, mono_features, mono_custom, mono_out;
  TrainArgs mono_train;
  int mono_jobs = 1;
  bool mono_force = false;
  mono_cmd->add_option("--config", mono_config, "experiment config file")
      ->required();
  mono_cmd->add_option("--features", mono_features,
                       "feature set (default: baseline and monolingual25)");
  mono_cmd->add_option("--custom-features", mono_custom, "family list");
  add_train_options(mono_cmd, mono_train);
  mono_cmd->add_option("--out", mono_out, "output directory");
  mono_cmd->add_option("--jobs", mono_jobs, "parallel experiment cells");
  mono_cmd->add_flag("--force", mono_force, "overwrite existing outputs");

  auto* cross_cmd = exp_cmd->add_subcommand(
      "crosslingual", "language-permutation runs (cross-lingual features)");
  std::string cross_config, cross_out;
  TrainArgs cross_train;
  int cross_jobs = 1;
  bool cross_force = false;
  cross_cmd->add_option("--config", cross_config, "experiment config file")
      ->required();
  add_train_options(cross_cmd, cross_train);
  cross_cmd->add_option("--out", cross_out, "output directory");
  cross_cmd->add_option("--jobs", cross_jobs, "parallel experiment cells");
  cross_cmd->add_flag("--force", cross_force, "overwrite existing outputs");

  // ablate
  auto* ablate_cmd =
      app.add_subcommand("ablate", "greedy forward feature selection");
  std::string ablate_config, ablate_seed, ablate_candidates, ablate_out;
  TrainArgs ablate_train;
  int ablate_jobs = 1;
  bool ablate_force = false;
  ablate_cmd->add_option("--config", ablate_config, "experiment config file")
      ->required();
  ablate_cmd->add_option("--seed", ablate_seed,
                         "comma-separated seed families (default len_tokens)");
  ablate_cmd->add_option("--candidates", ablate_candidates,
                         "comma-separated candidate families (default: all "
                         "remaining)");
  add_train_options(ablate_cmd, ablate_train);
  ablate_cmd->add_option("--out", ablate_out, "output directory");
  ablate_cmd->add_option("--jobs", ablate_jobs, "parallel candidates");
  ablate_cmd->add_flag("--force", ablate_force, "overwrite existing outputs");

  // analyze-consistency
  auto* cons_cmd = app.add_subcommand(
      "analyze-consistency", "MWE vs sub-word label consistency counts");
  std::string cons_config, cons_splits = "all", cons_format = "text";
  int cons_min_tokens = 2;
  cons_cmd->add_option("--config", cons_config, "experiment config file")
      ->required();
  cons_cmd->add_option("--splits", cons_splits,
                       "comma-separated splits (default all)");
  cons_cmd->add_option("--min-tokens", cons_min_tokens,
                       "tokens needed to count as an MWE (default 2)");
  cons_cmd->add_option("--format", cons_format, "text | json")
      ->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*train_cmd) {
      return cmd_train(train_data, train_args, train_features, train_custom,
                       train_out, train_force, binarize_is_stop, print_coef);
    }
    if (*predict_cmd) {
      return cmd_predict(predict_data, predict_model, predict_features,
                         predict_custom, predict_out, predict_force,
                         predict_format);
    }
    if (*eval_cmd) {
      return cmd_evaluate(eval_data, eval_model, eval_features, eval_custom,
                          eval_format);
    }
    if (*dump_cmd) {
      return cmd_dump_features(dump_data, dump_features, dump_custom,
                               dump_format, dump_id);
    }
    if (*exp_cmd) {
      if (*mono_cmd) {
        return cmd_experiment_mono(mono_config, mono_features, mono_custom,
                                   mono_train, mono_out, mono_jobs, mono_force);
      }
      if (*cross_cmd) {
        return cmd_experiment_crosslingual(cross_config, cross_train, cross_out,
                                           cross_jobs, cross_force);
      }
    }
    if (*ablate_cmd) {
      return cmd_ablate(ablate_config, ablate_train, ablate_seed,
                        ablate_candidates, ablate_out, ablate_jobs,
                        ablate_force);
    }
    if (*cons_cmd) {
      return cmd_analyze_consistency(cons_config, cons_splits, cons_min_tokens,
                                     cons_format);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace cwi
