#pragma once

#include <compare>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "recent/corpus.hpp"

namespace recent {

// Admissible entity types of one relation: the subject types S(r) and the
// object types O(r). The negative label has no schema.
struct RelationSchema {
  std::string relation;
  std::set<std::string> subj_types;
  std::set<std::string> obj_types;

  bool operator==(const RelationSchema&) const = default;
  bool degenerate() const { return subj_types.empty() || obj_types.empty(); }
};

struct TypePair {
  std::string subj_type;
  std::string obj_type;

  auto operator<=>(const TypePair&) const = default;
};

// Two views of the type/relation compatibility facts: per-relation type sets
// (schemas) and the induced map from a type pair to its candidate relations
// (entries). Candidate sets are lexicographically sorted so class indices
// are deterministic, and never contain the negative label.
class RestrictionMap {
 public:
  using Entries = std::map<TypePair, std::vector<std::string>>;
  using Schemas = std::map<std::string, RelationSchema>;

  RestrictionMap() = default;
  RestrictionMap(Entries entries, Schemas schemas);

  const Entries& entries() const { return entries_; }
  const Schemas& schemas() const { return schemas_; }

  // True iff pair.subj_type is in S(relation) and pair.obj_type in O(relation).
  // Throws LookupError for a relation the map does not know.
  bool matches_domain(const std::string& relation, const TypePair& pair) const;

  // Candidate relations for the pair; the empty set for unseen pairs.
  const std::vector<std::string>& candidates(const TypePair& pair) const;

  // Relations whose schema admits no type pair at all.
  std::vector<std::string> degenerate_relations() const;

  nlohmann::ordered_json entries_to_json() const;

 private:
  Entries entries_;
  Schemas schemas_;
};

// Aggregates the training corpus: entries[(ts,to)] is the set of semantic
// relations observed with that exact type pair; schemas hold the types
// observed with each relation. Type pairs seen only with the negative label
// get an empty candidate set (the pair still exists as a group).
RestrictionMap build_restriction_map(const Corpus& corpus);

// Builds the map a curated schema implies: each relation is a candidate for
// every pair in S(r) x O(r). Used for schema-override files and generator
// ground truth.
RestrictionMap restriction_map_from_schemas(RestrictionMap::Schemas schemas);

// Schema-override file format: JSON object mapping relation ->
// {"subj_types": [...], "obj_types": [...]}.
RestrictionMap load_schema_json(const std::string& path);
void save_schema_json(const RestrictionMap& map, const std::string& path);

}  // namespace recent
