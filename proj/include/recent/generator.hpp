#pragma once

#include <cstdint>

#include "recent/corpus.hpp"
#include "recent/schema.hpp"

namespace recent {

// Synthetic corpus parameters. Each relation draws its admissible subject
// and object types with probability domain_density (resampled until both
// sets are non-empty). label_noise replaces a semantic example's gold label
// by a uniformly random other relation after the tokens are emitted, so
// noisy examples carry misleading surface cues and may violate the domain.
struct GenSpec {
  std::size_t n_subj_types = 2;
  std::size_t n_obj_types = 4;
  std::size_t n_relations = 6;
  double domain_density = 0.5;
  std::size_t n_examples = 1000;
  double no_relation_rate = 0.3;
  double label_noise = 0.0;
  std::size_t trigger_vocab_size = 12;
  std::uint32_t seed = 1;
};

void validate(const GenSpec& spec);

// Fraction of semantic examples whose trigger token is the one assigned to
// their relation; the rest draw a uniformly random trigger.
inline constexpr double kTriggerFidelity = 0.9;

struct Generated {
  Corpus corpus;
  RestrictionMap truth;  // the ground-truth schema, not the induced map
};

// Deterministic in spec.seed. Semantic examples read
//   [subject, fillers..., trigger, fillers..., object]
// with the type pair drawn from the relation's domain; negatives draw an
// arbitrary type pair and carry no trigger.
Generated generate(const GenSpec& spec);

}  // namespace recent
