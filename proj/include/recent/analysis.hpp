#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>

#include "json.hpp"
#include "recent/schema.hpp"

namespace recent {

// False-positive audit of a prediction run. fp_et counts the false
// positives whose predicted relation is not a candidate for the example's
// type pair. fp_by_relation is keyed by the predicted relation. pearson_r
// correlates per-relation false positives with per-relation training
// counts; it is absent when fewer than two relations have defined entries
// or either side has zero variance.
struct ErrorAudit {
  std::size_t fp_total = 0;
  std::size_t fp_et_total = 0;
  std::map<std::string, std::size_t> fp_by_relation;
  std::map<std::string, std::size_t> train_count_by_relation;
  std::optional<double> pearson_r;
};

ErrorAudit audit(std::span<const std::string> gold,
                 std::span<const std::string> pred,
                 std::span<const TypePair> pairs, const RestrictionMap& map,
                 std::map<std::string, std::size_t> train_counts);

// Sample Pearson correlation. Throws ValidationError for length < 2 or
// zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

// Per-relation counts of semantic examples, for the correlation input.
std::map<std::string, std::size_t> train_counts(const Corpus& corpus);

nlohmann::ordered_json to_json(const ErrorAudit& audit);

// Two aligned columns: relation, false positives.
std::string fp_table(const ErrorAudit& audit);

}  // namespace recent
