#include "cwi/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "cwi/error.hpp"

namespace cwi {

FeatureIndex FeatureIndex::fit(const std::vector<FeatureVector>& vectors) {
  FeatureIndex index;
  for (const FeatureVector& v : vectors) {
    for (const auto& [name, value] : v.entries) {
      (void)value;
      index.add(name);
    }
  }
  return index;
}

void FeatureIndex::add(const std::string& name) {
  auto [it, inserted] = columns_.emplace(name, static_cast<int>(names_.size()));
  if (inserted) names_.push_back(name);
}

int FeatureIndex::column(const std::string& name) const {
  auto it = columns_.find(name);
  return it == columns_.end() ? -1 : it->second;
}

SparseRow vectorize(const FeatureIndex& index, const FeatureVector& v) {
  SparseRow row;
  row.entries.reserve(v.entries.size());
  for (const auto& [name, value] : v.entries) {
    const int col = index.column(name);
    if (col >= 0) row.entries.emplace_back(col, value);
  }
  return row;
}

double sigmoid(double x) {
  if (x >= 0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

namespace {

// log(1 + e^x) without overflow
double softplus(double x) {
  if (x > 0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double row_score(const std::vector<double>& weights, double bias,
                 const SparseRow& row) {
  double s = bias;
  for (const auto& [col, value] : row.entries) s += weights[col] * value;
  return s;
}

}  // namespace

double LossGrad::max_norm() const {
  double m = std::abs(bias_grad);
  for (double g : weight_grad) m = std::max(m, std::abs(g));
  return m;
}

LossGrad loss_and_gradient(const std::vector<double>& weights, double bias,
                           const std::vector<SparseRow>& rows,
                           const std::vector<int>& labels01, double l2,
                           const std::vector<double>* sample_weights) {
  LossGrad out;
  out.weight_grad.assign(weights.size(), 0.0);

  double total_weight = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double sw = sample_weights ? (*sample_weights)[i] : 1.0;
    const double s = row_score(weights, bias, rows[i]);
    const double y = static_cast<double>(labels01[i]);
    out.loss += sw * (softplus(s) - y * s);
    const double residual = sw * (sigmoid(s) - y);
    for (const auto& [col, value] : rows[i].entries) {
      out.weight_grad[col] += residual * value;
    }
    out.bias_grad += residual;
    total_weight += sw;
  }
  if (total_weight > 0) {
    out.loss /= total_weight;
    out.bias_grad /= total_weight;
    for (double& g : out.weight_grad) g /= total_weight;
  }
  for (std::size_t j = 0; j < weights.size(); ++j) {
    out.loss += 0.5 * l2 * weights[j] * weights[j];
    out.weight_grad[j] += l2 * weights[j];
  }
  return out;
}

namespace {

double loss_only(const std::vector<double>& weights, double bias,
                 const std::vector<SparseRow>& rows,
                 const std::vector<int>& labels01, double l2,
                 const std::vector<double>* sample_weights) {
  double loss = 0.0;
  double total_weight = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double sw = sample_weights ? (*sample_weights)[i] : 1.0;
    const double s = row_score(weights, bias, rows[i]);
    loss += sw * (softplus(s) - static_cast<double>(labels01[i]) * s);
    total_weight += sw;
  }
  if (total_weight > 0) loss /= total_weight;
  for (double w : weights) loss += 0.5 * l2 * w * w;
  return loss;
}

}  // namespace

LinearModel train(const std::vector<FeatureVector>& vectors,
                  const std::vector<Label>& labels,
                  const TrainConfig& config, const Normalizers& normalizers) {
  if (vectors.empty()) throw ModelError("no training vectors");
  if (vectors.size() != labels.size()) {
    throw ModelError("train: vector/label count mismatch");
  }
  if (config.l2_strength < 0 || config.max_iterations < 0 ||
      config.tolerance <= 0) {
    throw ModelError("train: invalid config");
  }

  std::size_t positives = 0;
  std::vector<int> y(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    y[i] = labels[i] == Label::Complex ? 1 : 0;
    positives += static_cast<std::size_t>(y[i]);
  }
  if (positives == 0 || positives == labels.size()) {
    throw ModelError("train: both classes must be present in the labels");
  }

  LinearModel model;
  model.index = FeatureIndex::fit(vectors);
  model.normalizers = normalizers;
  model.config = config;
  model.weights.assign(model.index.dimension(), 0.0);
  model.bias = 0.0;

  std::vector<SparseRow> rows;
  rows.reserve(vectors.size());
  for (const FeatureVector& v : vectors) rows.push_back(vectorize(model.index, v));

  std::vector<double> sample_weights;
  const std::vector<double>* sw = nullptr;
  if (config.inverse_frequency_class_weights) {
    const double n = static_cast<double>(labels.size());
    const double w_pos = n / (2.0 * static_cast<double>(positives));
    const double w_neg =
        n / (2.0 * static_cast<double>(labels.size() - positives));
    sample_weights.resize(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      sample_weights[i] = y[i] ? w_pos : w_neg;
    }
    sw = &sample_weights;
  }

  const double l2 = config.l2_strength;
  LossGrad lg = loss_and_gradient(model.weights, model.bias, rows, y, l2, sw);
  model.final_loss = lg.loss;

  std::vector<double> trial_w(model.weights.size());
  for (int iter = 0; iter < config.max_iterations; ++iter) {
    if (!std::isfinite(lg.loss)) {
      throw ModelError("train: loss diverged (not finite)");
    }
    if (lg.max_norm() <= config.tolerance) {
      model.converged = true;
      break;
    }

    double grad_sq = lg.bias_grad * lg.bias_grad;
    for (double g : lg.weight_grad) grad_sq += g * g;

    // Backtracking line search on the steepest-descent direction
    // (Armijo condition, c = 1e-4).
    double step = 1.0;
    double trial_loss = 0.0;
    double trial_b = 0.0;
    bool accepted = false;
    while (step >= 1e-20) {
      for (std::size_t j = 0; j < trial_w.size(); ++j) {
        trial_w[j] = model.weights[j] - step * lg.weight_grad[j];
      }
      trial_b = model.bias - step * lg.bias_grad;
      trial_loss = loss_only(trial_w, trial_b, rows, y, l2, sw);
      if (std::isfinite(trial_loss) &&
          trial_loss <= lg.loss - 1e-4 * step * grad_sq) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no descent step available at float precision

    model.weights.swap(trial_w);
    model.bias = trial_b;
    model.iterations = iter + 1;
    model.loss_history.push_back(trial_loss);

    lg = loss_and_gradient(model.weights, model.bias, rows, y, l2, sw);
    model.final_loss = lg.loss;
  }
  if (!model.converged && lg.max_norm() <= config.tolerance) {
    model.converged = true;
  }
  return model;
}

double LinearModel::score(const FeatureVector& v) const {
  double s = bias;
  for (const auto& [name, value] : v.entries) {
    const int col = index.column(name);
    if (col >= 0) s += weights[col] * value;
  }
  return s;
}

double LinearModel::predict_proba(const FeatureVector& v) const {
  return sigmoid(score(v));
}

Label LinearModel::predict(const FeatureVector& v) const {
  return predict_proba(v) >= 0.5 ? Label::Complex : Label::NonComplex;
}

std::vector<std::pair<std::string, double>> LinearModel::coefficients() const {
  std::vector<std::pair<std::string, double>> coef;
  coef.reserve(weights.size());
  for (std::size_t j = 0; j < weights.size(); ++j) {
    coef.emplace_back(index.name(j), weights[j]);
  }
  std::stable_sort(coef.begin(), coef.end(),
                   [](const auto& a, const auto& b) {
                     return std::abs(a.second) > std::abs(b.second);
                   });
  return coef;
}

namespace {

void write_double(std::ostream& out, double v) {
  out << std::setprecision(17) << v;
}

}  // namespace

void LinearModel::save(std::ostream& out) const {
  out << "cwi-model v1\n";
  out << "l2_strength ";
  write_double(out, config.l2_strength);
  out << "\nmax_iterations " << config.max_iterations;
  out << "\ntolerance ";
  write_double(out, config.tolerance);
  out << "\nclass_weighting "
      << (config.inverse_frequency_class_weights ? "inverse" : "none");
  out << "\nmean_target_tokens ";
  write_double(out, normalizers.mean_target_tokens);
  out << "\nbias ";
  write_double(out, bias);
  out << "\nfeatures " << weights.size() << "\n";
  for (std::size_t j = 0; j < weights.size(); ++j) {
    out << index.name(j) << '\t';
    write_double(out, weights[j]);
    out << '\n';
  }
}

void LinearModel::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ResourceError("cannot write model file: " + path);
  save(out);
}

LinearModel LinearModel::load(std::istream& in) {
  LinearModel model;
  std::string line;
  if (!std::getline(in, line) || line != "cwi-model v1") {
    throw ParseError("not a cwi model file (missing 'cwi-model v1' header)");
  }
  std::size_t n_features = 0;
  bool saw_features = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream is(line);
    std::string key;
    is >> key;
    if (key == "l2_strength") is >> model.config.l2_strength;
    else if (key == "max_iterations") is >> model.config.max_iterations;
    else if (key == "tolerance") is >> model.config.tolerance;
    else if (key == "class_weighting") {
      std::string v;
      is >> v;
      model.config.inverse_frequency_class_weights = v == "inverse";
    } else if (key == "mean_target_tokens") {
      is >> model.normalizers.mean_target_tokens;
    } else if (key == "bias") {
      is >> model.bias;
    } else if (key == "features") {
      is >> n_features;
      saw_features = true;
      break;
    } else {
      throw ParseError("unknown model file key: '" + key + "'");
    }
    if (is.fail()) throw ParseError("bad model file value on line: " + line);
  }
  if (!saw_features) throw ParseError("model file missing 'features' section");
  for (std::size_t j = 0; j < n_features; ++j) {
    if (!std::getline(in, line)) {
      throw ParseError("model file truncated in weight table");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t tab = line.rfind('\t');
    if (tab == std::string::npos) {
      throw ParseError("bad weight line in model file: " + line);
    }
    const std::string name = line.substr(0, tab);
    std::istringstream vs(line.substr(tab + 1));
    double w = 0.0;
    vs >> w;
    if (vs.fail()) throw ParseError("bad weight value in model file: " + line);
    model.index.add(name);
    model.weights.push_back(w);
  }
  return model;
}

LinearModel LinearModel::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ResourceError("cannot open model file: " + path);
  try {
    return load(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace cwi
