#include "recent/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "recent/errors.hpp"

namespace recent {

ErrorAudit audit(std::span<const std::string> gold,
                 std::span<const std::string> pred,
                 std::span<const TypePair> pairs, const RestrictionMap& map,
                 std::map<std::string, std::size_t> train_counts) {
  if (gold.size() != pred.size() || gold.size() != pairs.size())
    throw ValidationError("gold, pred and pairs lengths differ");

  ErrorAudit a;
  a.train_count_by_relation = std::move(train_counts);
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (pred[i] == kNoRelation || pred[i] == gold[i]) continue;
    ++a.fp_total;
    ++a.fp_by_relation[pred[i]];
    const auto& candidates = map.candidates(pairs[i]);
    if (std::find(candidates.begin(), candidates.end(), pred[i]) ==
        candidates.end())
      ++a.fp_et_total;
  }

  // Correlate over the training relation inventory; relations never
  // wrongly predicted contribute a zero false-positive count.
  std::vector<double> x, y;
  for (const auto& [relation, count] : a.train_count_by_relation) {
    auto it = a.fp_by_relation.find(relation);
    x.push_back(it == a.fp_by_relation.end()
                    ? 0.0
                    : static_cast<double>(it->second));
    y.push_back(static_cast<double>(count));
  }
  try {
    a.pearson_r = pearson(x, y);
  } catch (const ValidationError&) {
    a.pearson_r = std::nullopt;
  }
  return a;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("pearson lengths differ");
  if (x.size() < 2) throw ValidationError("pearson needs length >= 2");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw ValidationError("pearson undefined for zero variance");
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

std::map<std::string, std::size_t> train_counts(const Corpus& corpus) {
  std::map<std::string, std::size_t> counts;
  for (const Example& ex : corpus.examples())
    if (ex.is_semantic()) ++counts[ex.relation];
  return counts;
}

nlohmann::ordered_json to_json(const ErrorAudit& audit) {
  nlohmann::ordered_json j;
  j["fp_total"] = audit.fp_total;
  j["fp_et_total"] = audit.fp_et_total;
  j["fp_by_relation"] = audit.fp_by_relation;
  j["train_count_by_relation"] = audit.train_count_by_relation;
  if (audit.pearson_r)
    j["pearson_r"] = *audit.pearson_r;
  else
    j["pearson_r"] = nullptr;
  return j;
}

std::string fp_table(const ErrorAudit& audit) {
  std::size_t width = std::string("relation").size();
  for (const auto& [relation, count] : audit.fp_by_relation)
    width = std::max(width, relation.size());
  std::ostringstream out;
  out << "relation" << std::string(width - 8, ' ') << "  false positives\n";
  for (const auto& [relation, count] : audit.fp_by_relation)
    out << relation << std::string(width - relation.size(), ' ') << "  "
        << count << "\n";
  return out.str();
}

}  // namespace recent
