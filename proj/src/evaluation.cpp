#include "recent/evaluation.hpp"

#include <cstdio>

#include "recent/corpus.hpp"
#include "recent/errors.hpp"

namespace recent {

EvalReport micro_prf(std::span<const std::string> gold,
                     std::span<const std::string> pred) {
  if (gold.size() != pred.size())
    throw ValidationError("gold and pred lengths differ");
  EvalReport r;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool gold_semantic = gold[i] != kNoRelation;
    const bool pred_semantic = pred[i] != kNoRelation;
    if (gold_semantic) ++r.n_gold_semantic;
    if (pred_semantic) ++r.n_pred_semantic;
    if (gold_semantic && pred_semantic && gold[i] == pred[i])
      ++r.n_correct_semantic;
  }
  r.precision = r.n_pred_semantic == 0
                    ? 0.0
                    : static_cast<double>(r.n_correct_semantic) /
                          static_cast<double>(r.n_pred_semantic);
  r.recall = r.n_gold_semantic == 0
                 ? 0.0
                 : static_cast<double>(r.n_correct_semantic) /
                       static_cast<double>(r.n_gold_semantic);
  r.f1 = f1_from_pr(r.precision, r.recall);
  return r;
}

double f1_from_pr(double p, double r) {
  if (p < 0 || p > 1 || r < 0 || r > 1)
    throw ValidationError("precision and recall must lie in [0,1]");
  if (p + r == 0.0) return 0.0;
  return 2.0 * p * r / (p + r);
}

nlohmann::ordered_json to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["precision"] = report.precision;
  j["recall"] = report.recall;
  j["f1"] = report.f1;
  j["n_gold_semantic"] = report.n_gold_semantic;
  j["n_pred_semantic"] = report.n_pred_semantic;
  j["n_correct_semantic"] = report.n_correct_semantic;
  return j;
}

std::string summary_line(const EvalReport& report) {
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "P %.4f  R %.4f  F1 %.4f  (gold %zu, pred %zu, correct %zu)",
                report.precision, report.recall, report.f1,
                report.n_gold_semantic, report.n_pred_semantic,
                report.n_correct_semantic);
  return buf;
}

}  // namespace recent
