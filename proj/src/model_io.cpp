#include "recent/model_io.hpp"

#include <fstream>

#include "recent/errors.hpp"

namespace recent {

namespace {

using Json = nlohmann::ordered_json;

Json train_config_to_json(const TrainConfig& c) {
  Json j;
  j["learning_rate"] = c.learning_rate;
  j["epochs"] = c.epochs;
  j["l2"] = c.l2;
  j["seed"] = c.seed;
  j["class_weighting"] = c.class_weighting;
  return j;
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
  TrainConfig c;
  c.learning_rate = j.at("learning_rate").get<double>();
  c.epochs = j.at("epochs").get<int>();
  c.l2 = j.at("l2").get<double>();
  c.seed = j.at("seed").get<std::uint32_t>();
  c.class_weighting = j.at("class_weighting").get<bool>();
  return c;
}

Json linear_model_to_json(const LinearModel& m) {
  Json j;
  j["labels"] = m.labels();
  j["vocab"]["min_count"] = m.vocab().min_count();
  j["vocab"]["features"] = m.vocab().feature_names();
  j["weights"] = m.weights();
  if (m.constant_class())
    j["constant_class"] = *m.constant_class();
  else
    j["constant_class"] = nullptr;
  j["train_config"] = train_config_to_json(m.config());
  return j;
}

LinearModel linear_model_from_json(const nlohmann::json& j) {
  auto labels = j.at("labels").get<std::vector<std::string>>();
  FeatureVocab vocab = FeatureVocab::from_features(
      j.at("vocab").at("features").get<std::vector<std::string>>(),
      j.at("vocab").at("min_count").get<int>());
  auto weights = j.at("weights").get<std::vector<double>>();
  std::optional<std::size_t> constant_class;
  if (!j.at("constant_class").is_null())
    constant_class = j.at("constant_class").get<std::size_t>();
  return LinearModel(std::move(labels), std::move(weights),
                     train_config_from_json(j.at("train_config")),
                     std::move(vocab), constant_class);
}

Json restriction_map_to_json(const RestrictionMap& map) {
  Json j;
  Json schemas = Json::object();
  for (const auto& [relation, schema] : map.schemas()) {
    Json s;
    s["subj_types"] = schema.subj_types;
    s["obj_types"] = schema.obj_types;
    schemas[relation] = std::move(s);
  }
  j["schemas"] = std::move(schemas);
  Json entries = Json::array();
  for (const auto& [pair, candidates] : map.entries()) {
    Json e;
    e["subj_type"] = pair.subj_type;
    e["obj_type"] = pair.obj_type;
    e["candidates"] = candidates;
    entries.push_back(std::move(e));
  }
  j["entries"] = std::move(entries);
  return j;
}

RestrictionMap restriction_map_from_json(const nlohmann::json& j) {
  RestrictionMap::Schemas schemas;
  for (auto it = j.at("schemas").begin(); it != j.at("schemas").end(); ++it) {
    RelationSchema s;
    s.relation = it.key();
    for (const auto& t : it.value().at("subj_types"))
      s.subj_types.insert(t.get<std::string>());
    for (const auto& t : it.value().at("obj_types"))
      s.obj_types.insert(t.get<std::string>());
    schemas.emplace(s.relation, std::move(s));
  }
  RestrictionMap::Entries entries;
  for (const auto& e : j.at("entries")) {
    TypePair pair{e.at("subj_type").get<std::string>(),
                  e.at("obj_type").get<std::string>()};
    entries.emplace(std::move(pair),
                    e.at("candidates").get<std::vector<std::string>>());
  }
  return RestrictionMap(std::move(entries), std::move(schemas));
}

Json pipeline_to_json(const RecentPipeline& p) {
  Json j;
  j["config"]["gate_threshold"] = p.config().gate_threshold;
  j["config"]["gate_scope"] = "global";
  j["config"]["train_config"] = train_config_to_json(p.config().train_config);
  j["gate"] = linear_model_to_json(p.gate());
  j["restriction_map"] = restriction_map_to_json(p.restriction_map());
  Json groups = Json::array();
  for (const auto& [pair, model] : p.group_models()) {
    Json g;
    g["subj_type"] = pair.subj_type;
    g["obj_type"] = pair.obj_type;
    if (std::holds_alternative<GroupEmpty>(model)) {
      g["kind"] = "empty";
    } else if (const auto* constant = std::get_if<GroupConstant>(&model)) {
      g["kind"] = "constant";
      g["relation"] = constant->relation;
    } else {
      g["kind"] = "trained";
      g["model"] = linear_model_to_json(std::get<LinearModel>(model));
    }
    groups.push_back(std::move(g));
  }
  j["groups"] = std::move(groups);
  return j;
}

RecentPipeline pipeline_from_json(const nlohmann::json& j) {
  PipelineConfig config;
  config.gate_threshold = j.at("config").at("gate_threshold").get<double>();
  if (j.at("config").at("gate_scope").get<std::string>() != "global")
    throw ParseError("unknown gate_scope");
  config.train_config =
      train_config_from_json(j.at("config").at("train_config"));
  LinearModel gate = linear_model_from_json(j.at("gate"));
  RestrictionMap map = restriction_map_from_json(j.at("restriction_map"));
  std::map<TypePair, GroupModel> groups;
  for (const auto& g : j.at("groups")) {
    TypePair pair{g.at("subj_type").get<std::string>(),
                  g.at("obj_type").get<std::string>()};
    const std::string kind = g.at("kind").get<std::string>();
    if (kind == "empty")
      groups.emplace(std::move(pair), GroupEmpty{});
    else if (kind == "constant")
      groups.emplace(std::move(pair),
                     GroupConstant{g.at("relation").get<std::string>()});
    else if (kind == "trained")
      groups.emplace(std::move(pair), linear_model_from_json(g.at("model")));
    else
      throw ParseError("unknown group model kind '" + kind + "'");
  }
  return RecentPipeline(std::move(gate), std::move(groups), std::move(map),
                        config);
}

}  // namespace

nlohmann::ordered_json model_to_json(const ModelArtifact& artifact) {
  Json j;
  j["format_version"] = kModelFormatVersion;
  if (const auto* pipeline = std::get_if<RecentPipeline>(&artifact)) {
    j["mode"] = "recent";
    j["pipeline"] = pipeline_to_json(*pipeline);
  } else {
    j["mode"] = "flat";
    j["model"] = linear_model_to_json(std::get<LinearModel>(artifact));
  }
  return j;
}

ModelArtifact model_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("format_version"))
    throw ParseError("not a model artifact (missing format_version)");
  const int version = doc.at("format_version").get<int>();
  if (version != kModelFormatVersion)
    throw VersionError("unsupported model format_version " +
                       std::to_string(version) + " (expected " +
                       std::to_string(kModelFormatVersion) + ")");
  const std::string mode = doc.at("mode").get<std::string>();
  if (mode == "recent") return pipeline_from_json(doc.at("pipeline"));
  if (mode == "flat") return linear_model_from_json(doc.at("model"));
  throw ParseError("unknown model mode '" + mode + "'");
}

void save_model(const ModelArtifact& artifact, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << model_to_json(artifact).dump() << '\n';
  if (!out) throw IoError("error while writing '" + path + "'");
}

ModelArtifact load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("model file '" + path + "': " + e.what());
  }
  return model_from_json(doc);
}

}  // namespace recent
