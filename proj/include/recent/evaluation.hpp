#pragma once

#include <span>
#include <string>

#include "json.hpp"

namespace recent {

// Micro-averaged precision/recall/F1 over semantic relations, with the
// usual scorer conventions: no_relation is the negative label, and a zero
// denominator yields 0.
struct EvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t n_gold_semantic = 0;
  std::size_t n_pred_semantic = 0;
  std::size_t n_correct_semantic = 0;

  bool operator==(const EvalReport&) const = default;
};

EvalReport micro_prf(std::span<const std::string> gold,
                     std::span<const std::string> pred);

// 2pr/(p+r); 0 when p+r is 0. Inputs must lie in [0,1].
double f1_from_pr(double p, double r);

nlohmann::ordered_json to_json(const EvalReport& report);
std::string summary_line(const EvalReport& report);

}  // namespace recent
