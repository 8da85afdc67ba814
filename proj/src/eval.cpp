#include "cwi/eval.hpp"

#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "cwi/error.hpp"

namespace cwi {

namespace {

double safe_div(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

double f1_from(double precision, double recall) {
  return safe_div(2.0 * precision * recall, precision + recall);
}

}  // namespace

EvalReport evaluate_labels(const std::vector<Label>& gold,
                           const std::vector<Label>& pred) {
  if (gold.size() != pred.size()) {
    throw Error("evaluate: gold and predicted label lists differ in length");
  }
  if (gold.empty()) throw Error("evaluate: empty label lists");

  EvalReport r;
  r.n = static_cast<long>(gold.size());
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool g = gold[i] == Label::Complex;
    const bool p = pred[i] == Label::Complex;
    if (g && p) ++r.tp;
    else if (!g && p) ++r.fp;
    else if (g && !p) ++r.fn;
    else ++r.tn;
  }
  r.precision_complex = safe_div(r.tp, r.tp + r.fp);
  r.recall_complex = safe_div(r.tp, r.tp + r.fn);
  r.f1_complex = f1_from(r.precision_complex, r.recall_complex);
  r.precision_noncomplex = safe_div(r.tn, r.tn + r.fn);
  r.recall_noncomplex = safe_div(r.tn, r.tn + r.fp);
  r.f1_noncomplex = f1_from(r.precision_noncomplex, r.recall_noncomplex);
  r.macro_f1 = 0.5 * (r.f1_complex + r.f1_noncomplex);
  r.accuracy = safe_div(r.tp + r.tn, r.n);
  return r;
}

double macro_f1(const std::vector<Label>& gold,
                const std::vector<Label>& pred) {
  return evaluate_labels(gold, pred).macro_f1;
}

EvalReport evaluate(const LinearModel& model, const Dataset& dataset,
                    const ResourceBundle& bundle, const FeatureSet& set,
                    const SidecarTable* sidecar) {
  if (dataset.instances.empty()) {
    throw Error("evaluate: dataset has no instances");
  }
  AnnotationCache cache(dataset, sidecar);
  std::vector<Label> gold, pred;
  gold.reserve(dataset.instances.size());
  pred.reserve(dataset.instances.size());
  for (const Instance& inst : dataset.instances) {
    const FeatureVector v = extract_features(
        inst, cache.get(inst.sentence), bundle, set, model.normalizers);
    gold.push_back(inst.label);
    pred.push_back(model.predict(v));
  }
  EvalReport report = evaluate_labels(gold, pred);
  for (const std::string& asset : bundle.degraded) {
    report.degraded.push_back("resources(" + to_string(bundle.language) +
                              "): missing " + asset);
  }
  if (cache.unannotated_count() > 0) {
    std::ostringstream os;
    os << "annotations: " << cache.unannotated_count() << "/"
       << cache.sentence_count() << " sentences without sidecar entries";
    report.degraded.push_back(os.str());
  }
  return report;
}

std::string EvalReport::to_json() const {
  nlohmann::json j;
  j["n"] = n;
  j["confusion"] = {{"tp", tp}, {"fp", fp}, {"fn", fn}, {"tn", tn}};
  j["complex"] = {{"precision", precision_complex},
                  {"recall", recall_complex},
                  {"f1", f1_complex}};
  j["non_complex"] = {{"precision", precision_noncomplex},
                      {"recall", recall_noncomplex},
                      {"f1", f1_noncomplex}};
  j["macro_f1"] = macro_f1;
  j["accuracy"] = accuracy;
  j["degraded"] = degraded;
  return j.dump(2);
}

void EvalReport::write_text(std::ostream& out) const {
  out << std::fixed << std::setprecision(4);
  out << "n              " << n << "\n";
  out << "macro_f1       " << macro_f1 << "\n";
  out << "accuracy       " << accuracy << "\n";
  out << "class          precision  recall     f1\n";
  out << "complex        " << std::setw(9) << precision_complex << "  "
      << std::setw(9) << recall_complex << "  " << std::setw(9) << f1_complex
      << "\n";
  out << "non-complex    " << std::setw(9) << precision_noncomplex << "  "
      << std::setw(9) << recall_noncomplex << "  " << std::setw(9)
      << f1_noncomplex << "\n";
  out << "confusion      tp=" << tp << " fp=" << fp << " fn=" << fn
      << " tn=" << tn << "\n";
  for (const std::string& d : degraded) {
    out << "degraded       " << d << "\n";
  }
  out.unsetf(std::ios::fixed);
}

}  // namespace cwi
