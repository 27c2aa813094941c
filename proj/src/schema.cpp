#include "recent/schema.hpp"

#include <algorithm>
#include <fstream>

#include "recent/errors.hpp"

namespace recent {

RestrictionMap::RestrictionMap(Entries entries, Schemas schemas)
    : entries_(std::move(entries)), schemas_(std::move(schemas)) {
  for (auto& [pair, relations] : entries_) {
    std::sort(relations.begin(), relations.end());
    relations.erase(std::unique(relations.begin(), relations.end()),
                    relations.end());
    for (const auto& r : relations)
      if (r == kNoRelation)
        throw ValidationError("candidate sets must not contain no_relation");
  }
  if (schemas_.count(kNoRelation))
    throw ValidationError("the negative label has no relation schema");
}

bool RestrictionMap::matches_domain(const std::string& relation,
                                    const TypePair& pair) const {
  auto it = schemas_.find(relation);
  if (it == schemas_.end())
    throw LookupError("unknown relation '" + relation + "'");
  const RelationSchema& s = it->second;
  return s.subj_types.count(pair.subj_type) > 0 &&
         s.obj_types.count(pair.obj_type) > 0;
}

const std::vector<std::string>& RestrictionMap::candidates(
    const TypePair& pair) const {
  static const std::vector<std::string> kEmpty;
  auto it = entries_.find(pair);
  return it == entries_.end() ? kEmpty : it->second;
}

std::vector<std::string> RestrictionMap::degenerate_relations() const {
  std::vector<std::string> out;
  for (const auto& [r, schema] : schemas_)
    if (schema.degenerate()) out.push_back(r);
  return out;
}

nlohmann::ordered_json RestrictionMap::entries_to_json() const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& [pair, relations] : entries_) {
    nlohmann::ordered_json e;
    e["subj_type"] = pair.subj_type;
    e["obj_type"] = pair.obj_type;
    e["candidates"] = relations;
    arr.push_back(std::move(e));
  }
  return arr;
}

RestrictionMap build_restriction_map(const Corpus& corpus) {
  RestrictionMap::Entries entries;
  RestrictionMap::Schemas schemas;
  for (const Example& ex : corpus.examples()) {
    TypePair pair{ex.subj_type, ex.obj_type};
    auto& candidates = entries[pair];
    if (!ex.is_semantic()) continue;
    candidates.push_back(ex.relation);
    RelationSchema& schema = schemas[ex.relation];
    schema.relation = ex.relation;
    schema.subj_types.insert(ex.subj_type);
    schema.obj_types.insert(ex.obj_type);
  }
  return RestrictionMap(std::move(entries), std::move(schemas));
}

RestrictionMap restriction_map_from_schemas(RestrictionMap::Schemas schemas) {
  RestrictionMap::Entries entries;
  for (const auto& [relation, schema] : schemas)
    for (const auto& ts : schema.subj_types)
      for (const auto& to : schema.obj_types)
        entries[TypePair{ts, to}].push_back(relation);
  return RestrictionMap(std::move(entries), std::move(schemas));
}

RestrictionMap load_schema_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("schema file '" + path + "': " + e.what());
  }
  if (!doc.is_object())
    throw ParseError("schema file '" + path + "': expected a JSON object");
  RestrictionMap::Schemas schemas;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    RelationSchema s;
    s.relation = it.key();
    try {
      for (const auto& t : it.value().at("subj_types"))
        s.subj_types.insert(t.get<std::string>());
      for (const auto& t : it.value().at("obj_types"))
        s.obj_types.insert(t.get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("schema file '" + path + "', relation '" + it.key() +
                       "': " + e.what());
    }
    schemas.emplace(s.relation, std::move(s));
  }
  return restriction_map_from_schemas(std::move(schemas));
}

void save_schema_json(const RestrictionMap& map, const std::string& path) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (const auto& [relation, schema] : map.schemas()) {
    nlohmann::ordered_json s;
    s["subj_types"] = schema.subj_types;
    s["obj_types"] = schema.obj_types;
    doc[relation] = std::move(s);
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("error while writing '" + path + "'");
}

}  // namespace recent
