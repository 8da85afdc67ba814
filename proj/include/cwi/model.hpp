#ifndef CWI_MODEL_HPP
#define CWI_MODEL_HPP

// L2-regularized binary logistic regression over sparse named features,
// trained by deterministic full-batch gradient descent with backtracking
// line search. Reruns with identical inputs produce bitwise-identical
// weights.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "cwi/data.hpp"
#include "cwi/features.hpp"

namespace cwi {

class FeatureIndex {
public:
  FeatureIndex() = default;

  // Columns assigned in first-seen order over the vectors.
  static FeatureIndex fit(const std::vector<FeatureVector>& vectors);

  std::size_t dimension() const { return names_.size(); }
  bool empty() const { return names_.empty(); }

  // -1 when the name was not seen at fit time.
  int column(const std::string& name) const;
  const std::string& name(std::size_t column) const { return names_[column]; }
  const std::vector<std::string>& names() const { return names_; }

  void add(const std::string& name);

private:
  std::unordered_map<std::string, int> columns_;
  std::vector<std::string> names_;
};

struct TrainConfig {
  double l2_strength = 1.0;         // on (l2/2)*||w||^2, bias unregularized
  int max_iterations = 1000;
  double tolerance = 1e-6;          // gradient max-norm stopping criterion
  bool inverse_frequency_class_weights = false;

  bool operator==(const TrainConfig&) const = default;
};

struct SparseRow {
  std::vector<std::pair<int, double>> entries;  // (column, value)
};

// Unseen-at-fit features are dropped.
SparseRow vectorize(const FeatureIndex& index, const FeatureVector& v);

struct LossGrad {
  double loss = 0.0;
  std::vector<double> weight_grad;
  double bias_grad = 0.0;

  double max_norm() const;
};

// Mean logistic loss (optionally sample-weighted) plus (l2/2)*||w||^2.
LossGrad loss_and_gradient(const std::vector<double>& weights, double bias,
                           const std::vector<SparseRow>& rows,
                           const std::vector<int>& labels01, double l2,
                           const std::vector<double>* sample_weights = nullptr);

struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  FeatureIndex index;
  Normalizers normalizers;
  TrainConfig config;

  double final_loss = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> loss_history;  // loss after each accepted step

  double score(const FeatureVector& v) const;         // w.x + b
  double predict_proba(const FeatureVector& v) const; // sigmoid(score)
  // Complex iff predict_proba >= 0.5 (ties predict complex).
  Label predict(const FeatureVector& v) const;

  // (feature name, weight) sorted by decreasing |weight|; ties by column.
  std::vector<std::pair<std::string, double>> coefficients() const;

  void save(std::ostream& out) const;
  void save_file(const std::string& path) const;
  static LinearModel load(std::istream& in);
  static LinearModel load_file(const std::string& path);
};

// Throws ModelError on empty input, single-class labels, or divergence.
LinearModel train(const std::vector<FeatureVector>& vectors,
                  const std::vector<Label>& labels,
                  const TrainConfig& config = {},
                  const Normalizers& normalizers = {});

double sigmoid(double x);

}  // namespace cwi

#endif  // CWI_MODEL_HPP
