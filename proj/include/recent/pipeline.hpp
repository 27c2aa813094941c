#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "recent/corpus.hpp"
#include "recent/learner.hpp"
#include "recent/schema.hpp"

namespace recent {

inline constexpr const char* kGateSemanticLabel = "semantic";

enum class GateScope { Global };
enum class FallbackPolicy { PredictNoRelation };

struct PipelineConfig {
  double gate_threshold = 0.5;  // open interval (0,1)
  TrainConfig train_config;
  GateScope gate_scope = GateScope::Global;

  bool operator==(const PipelineConfig&) const = default;
};

void validate(const PipelineConfig& config);

// Per-type-pair classifier: a real model when the pair admits two or more
// candidate relations, a constant when it admits exactly one, empty when it
// admits none.
struct GroupEmpty {
  bool operator==(const GroupEmpty&) const = default;
};
struct GroupConstant {
  std::string relation;
  bool operator==(const GroupConstant&) const = default;
};
using GroupModel = std::variant<GroupEmpty, GroupConstant, LinearModel>;

// Trained two-stage router: a global binary gate (semantic vs no_relation,
// type features included) in front of one classifier per observed type
// pair, each restricted to the pair's candidate relations (type features
// excluded; they are constant within a group). Unseen pairs fall back to
// no_relation.
class RecentPipeline {
 public:
  RecentPipeline(LinearModel gate, std::map<TypePair, GroupModel> group_models,
                 RestrictionMap restriction_map, PipelineConfig config);

  const LinearModel& gate() const { return gate_; }
  const std::map<TypePair, GroupModel>& group_models() const {
    return group_models_;
  }
  const RestrictionMap& restriction_map() const { return restriction_map_; }
  const PipelineConfig& config() const { return config_; }
  FallbackPolicy fallback() const { return FallbackPolicy::PredictNoRelation; }

  // P(semantic) for the example under the gate.
  double gate_proba(const Example& ex) const;

 private:
  LinearModel gate_;
  std::map<TypePair, GroupModel> group_models_;
  RestrictionMap restriction_map_;
  PipelineConfig config_;
};

// Partition of the corpus keyed by (subj_type, obj_type); group-internal
// order preserves corpus order.
std::map<TypePair, std::vector<Example>> group_by_types(const Corpus& corpus);

// Trains the gate on all examples, builds the restriction map, and fits one
// classifier per group with >= 2 candidate relations on the group's
// semantic examples (the gate owns the negatives). Groups are fitted
// concurrently; results are identical to sequential training.
RecentPipeline train_recent(const Corpus& corpus, const PipelineConfig& config,
                            int min_count = 2);

// Gate first, then route to the matched group. Total over valid examples;
// the gold relation is ignored.
std::string predict_recent(const RecentPipeline& pipeline, const Example& ex);

// The single-classifier baseline: all labels including no_relation, entity
// types fed in as ordinary features, no restriction consulted.
LinearModel train_flat(const Corpus& corpus, const TrainConfig& config,
                       int min_count = 2);
std::string predict_flat(const LinearModel& model, const Example& ex);

}  // namespace recent
