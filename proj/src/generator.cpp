#include "recent/generator.hpp"

#include <cctype>
#include <map>
#include <random>

#include "recent/errors.hpp"
#include "recent/rng.hpp"

namespace recent {

void validate(const GenSpec& spec) {
  if (spec.n_subj_types == 0 || spec.n_obj_types == 0)
    throw ValidationError("need at least one subject and one object type");
  if (spec.n_relations == 0) throw ValidationError("need at least one relation");
  if (!(spec.domain_density > 0.0 && spec.domain_density <= 1.0))
    throw ValidationError("domain_density must lie in (0,1]");
  if (spec.no_relation_rate < 0.0 || spec.no_relation_rate >= 1.0)
    throw ValidationError("no_relation_rate must lie in [0,1)");
  if (spec.label_noise < 0.0 || spec.label_noise >= 1.0)
    throw ValidationError("label_noise must lie in [0,1)");
  if (spec.trigger_vocab_size == 0)
    throw ValidationError("trigger_vocab_size must be >= 1");
}

namespace {

// Small closed filler vocabulary: every filler recurs often enough that
// models estimate its (null) effect well.
constexpr std::size_t kFillerVocab = 6;
constexpr std::size_t kMaxSideFillers = 4;  // 0..3 fillers on each side

// Entity mentions carry a partial relation signal whose meaning depends on
// the type pair, the way a connective like "in" signals residence for a
// person/location pair but headquarters for an organization/location pair.
// Each relation prefers one surface variant per type PAIR; a semantic example
// uses the preferred variants with probability kSurfaceFidelity and uniformly
// random ones otherwise. Negatives always draw variants uniformly, so any
// relation their mentions hint at is spurious. Because the variant-to-relation
// assignment is shifted per type pair, the same variant points at different
// relations in different pairs: the cue is only decodable jointly with the
// types, never from the token alone. kSurfaceAmbiguity relations share each
// variant within a pair, so even in context a mention narrows the relation to
// a tie class rather than resolving it outright.
constexpr double kSurfaceFidelity = 0.85;
constexpr std::size_t kSurfaceAmbiguity = 2;

std::string padded(std::size_t value) {
  std::string s = std::to_string(value);
  return s.size() < 2 ? "0" + s : s;
}

std::string pick(std::mt19937& rng, const std::set<std::string>& types) {
  std::vector<const std::string*> flat;
  flat.reserve(types.size());
  for (const auto& t : types) flat.push_back(&t);
  return *flat[uniform_index(rng, static_cast<std::uint32_t>(flat.size()))];
}

}  // namespace

Generated generate(const GenSpec& spec) {
  validate(spec);
  std::mt19937 rng(spec.seed);
  // Label noise draws from its own stream so that two specs differing only
  // in label_noise emit token-identical corpora: the clean counterpart of a
  // noisy corpus is recoverable by regenerating with label_noise = 0.
  std::mt19937 noise_rng(spec.seed ^ 0x9e3779b9u);

  std::vector<std::string> subj_types, obj_types, relations, triggers, fillers;
  for (std::size_t i = 0; i < spec.n_subj_types; ++i)
    subj_types.push_back("S" + padded(i));
  for (std::size_t i = 0; i < spec.n_obj_types; ++i)
    obj_types.push_back("O" + padded(i));
  for (std::size_t i = 0; i < spec.n_relations; ++i)
    relations.push_back("rel" + padded(i));
  for (std::size_t i = 0; i < spec.trigger_vocab_size; ++i)
    triggers.push_back("trig" + padded(i));
  for (std::size_t i = 0; i < kFillerVocab; ++i)
    fillers.push_back("w" + padded(i));

  // Ground-truth domains S(r), O(r).
  RestrictionMap::Schemas schemas;
  for (const auto& r : relations) {
    RelationSchema schema;
    schema.relation = r;
    while (schema.subj_types.empty())
      for (const auto& t : subj_types)
        if (bernoulli(rng, spec.domain_density)) schema.subj_types.insert(t);
    while (schema.obj_types.empty())
      for (const auto& t : obj_types)
        if (bernoulli(rng, spec.domain_density)) schema.obj_types.insert(t);
    schemas.emplace(r, std::move(schema));
  }

  // Round-robin keeps triggers as distinct as the vocabulary allows: injective
  // when the vocabulary covers every relation, evenly many-to-one when it is
  // smaller (the way a preposition like "in" serves many real relations).
  std::vector<std::size_t> trigger_of;  // per relation
  for (std::size_t i = 0; i < spec.n_relations; ++i)
    trigger_of.push_back(i % triggers.size());

  std::map<std::string, std::size_t> type_index;
  for (std::size_t i = 0; i < subj_types.size(); ++i)
    type_index[subj_types[i]] = i;
  for (std::size_t i = 0; i < obj_types.size(); ++i)
    type_index[obj_types[i]] = i;

  // Relations map onto surface variants many-to-one, with the assignment
  // shifted by a per-pair offset: coprime-ish multipliers spread the offsets
  // so a variant's tie class differs from pair to pair.
  const auto n_variants = static_cast<std::uint32_t>(
      (spec.n_relations + kSurfaceAmbiguity - 1) / kSurfaceAmbiguity);
  auto preferred_variant = [&](std::size_t r, const std::string& subj_type,
                               const std::string& obj_type) {
    const std::size_t shift =
        5 * type_index.at(subj_type) + 11 * type_index.at(obj_type);
    return (r + shift) % n_variants;
  };
  auto surface = [&](const std::string& type, std::size_t variant) {
    std::string s = type;
    for (char& c : s) c = static_cast<char>(std::tolower(c));
    return s + "e" + padded(variant);
  };
  auto filler = [&] {
    return fillers[uniform_index(rng, static_cast<std::uint32_t>(
                                          fillers.size()))];
  };

  std::vector<Example> examples;
  examples.reserve(spec.n_examples);
  for (std::size_t i = 0; i < spec.n_examples; ++i) {
    Example ex;
    std::string id = std::to_string(i);
    ex.id = "gen-" + std::string(id.size() < 6 ? 6 - id.size() : 0, '0') + id;

    const bool negative = bernoulli(rng, spec.no_relation_rate);
    std::string middle_token;
    std::size_t subj_variant, obj_variant;
    if (negative) {
      ex.relation = kNoRelation;
      ex.subj_type = subj_types[uniform_index(
          rng, static_cast<std::uint32_t>(subj_types.size()))];
      ex.obj_type = obj_types[uniform_index(
          rng, static_cast<std::uint32_t>(obj_types.size()))];
      middle_token = filler();  // no trigger
      subj_variant = uniform_index(rng, n_variants);
      obj_variant = uniform_index(rng, n_variants);
    } else {
      const std::size_t r = uniform_index(
          rng, static_cast<std::uint32_t>(spec.n_relations));
      ex.relation = relations[r];
      const RelationSchema& schema = schemas.at(relations[r]);
      ex.subj_type = pick(rng, schema.subj_types);
      ex.obj_type = pick(rng, schema.obj_types);
      middle_token = bernoulli(rng, kTriggerFidelity)
                         ? triggers[trigger_of[r]]
                         : triggers[uniform_index(
                               rng, static_cast<std::uint32_t>(
                                        triggers.size()))];
      subj_variant = bernoulli(rng, kSurfaceFidelity)
                         ? preferred_variant(r, ex.subj_type, ex.obj_type)
                         : uniform_index(rng, n_variants);
      obj_variant = bernoulli(rng, kSurfaceFidelity)
                        ? preferred_variant(r, ex.subj_type, ex.obj_type)
                        : uniform_index(rng, n_variants);
    }

    const std::size_t left = uniform_index(rng, kMaxSideFillers);
    const std::size_t right = uniform_index(rng, kMaxSideFillers);
    ex.tokens.push_back(surface(ex.subj_type, subj_variant));
    for (std::size_t j = 0; j < left; ++j) ex.tokens.push_back(filler());
    ex.tokens.push_back(middle_token);
    for (std::size_t j = 0; j < right; ++j) ex.tokens.push_back(filler());
    ex.tokens.push_back(surface(ex.obj_type, obj_variant));
    ex.subj_span = {0, 1};
    ex.obj_span = {ex.tokens.size() - 1, ex.tokens.size()};

    // Noise goes in after token emission, so the surface cues point at the
    // original relation.
    if (!negative && spec.n_relations > 1 &&
        bernoulli(noise_rng, spec.label_noise)) {
      std::size_t other = uniform_index(
          noise_rng, static_cast<std::uint32_t>(spec.n_relations - 1));
      if (relations[other] == ex.relation) other = spec.n_relations - 1;
      ex.relation = relations[other];
    }
    examples.push_back(std::move(ex));
  }

  return Generated{Corpus(std::move(examples)),
                   restriction_map_from_schemas(std::move(schemas))};
}

}  // namespace recent
