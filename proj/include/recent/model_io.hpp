#pragma once

#include <string>
#include <variant>

#include "json.hpp"
#include "recent/pipeline.hpp"

namespace recent {

inline constexpr int kModelFormatVersion = 1;

// A trained artifact in either mode. Serialized as a single self-describing
// JSON document whose first key is the format version; loading a document
// with a different version is refused. Doubles are emitted in round-trip
// form, so a saved model predicts bit-identically to the in-memory one.
using ModelArtifact = std::variant<RecentPipeline, LinearModel>;

nlohmann::ordered_json model_to_json(const ModelArtifact& artifact);
ModelArtifact model_from_json(const nlohmann::json& doc);

void save_model(const ModelArtifact& artifact, const std::string& path);
ModelArtifact load_model(const std::string& path);

}  // namespace recent
