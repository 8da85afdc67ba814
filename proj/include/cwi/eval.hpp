#ifndef CWI_EVAL_HPP
#define CWI_EVAL_HPP

// Classification metrics. Macro-F1 (unweighted mean of the complex and
// non-complex F1 scores) is the headline number; any F1 with a zero
// denominator is defined as 0.

#include <iosfwd>
#include <string>
#include <vector>

#include "cwi/annotate.hpp"
#include "cwi/data.hpp"
#include "cwi/features.hpp"
#include "cwi/model.hpp"
#include "cwi/resources.hpp"

namespace cwi {

struct EvalReport {
  // Confusion counts w.r.t. the complex class.
  long tp = 0, fp = 0, fn = 0, tn = 0;
  long n = 0;

  double precision_complex = 0.0, recall_complex = 0.0, f1_complex = 0.0;
  double precision_noncomplex = 0.0, recall_noncomplex = 0.0,
         f1_noncomplex = 0.0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;

  std::vector<std::string> degraded;  // resource / annotation flags

  std::string to_json() const;
  void write_text(std::ostream& out) const;
};

// Throws Error on empty or length-mismatched inputs.
double macro_f1(const std::vector<Label>& gold, const std::vector<Label>& pred);

EvalReport evaluate_labels(const std::vector<Label>& gold,
                           const std::vector<Label>& pred);

// Extracts features per instance with the model's feature set semantics,
// predicts, and aggregates. Degraded-mode flags from the bundle and
// annotation coverage are carried on the report.
EvalReport evaluate(const LinearModel& model, const Dataset& dataset,
                    const ResourceBundle& bundle, const FeatureSet& set,
                    const SidecarTable* sidecar = nullptr);

}  // namespace cwi

#endif  // CWI_EVAL_HPP
