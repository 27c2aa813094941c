#include "recent/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "recent/errors.hpp"

namespace recent {

void validate(const PipelineConfig& config) {
  if (!(config.gate_threshold > 0.0 && config.gate_threshold < 1.0))
    throw ValidationError("gate_threshold must lie in (0,1)");
  validate(config.train_config);
}

RecentPipeline::RecentPipeline(LinearModel gate,
                               std::map<TypePair, GroupModel> group_models,
                               RestrictionMap restriction_map,
                               PipelineConfig config)
    : gate_(std::move(gate)),
      group_models_(std::move(group_models)),
      restriction_map_(std::move(restriction_map)),
      config_(config) {
  validate(config_);
  for (const auto& [pair, model] : group_models_) {
    if (!restriction_map_.entries().count(pair))
      throw ValidationError("group model for a pair missing from the map");
    if (const auto* trained = std::get_if<LinearModel>(&model)) {
      if (trained->labels() != restriction_map_.candidates(pair))
        throw ValidationError("group model labels differ from candidates");
    }
  }
}

double RecentPipeline::gate_proba(const Example& ex) const {
  const SparseVector x = vectorize(extract(ex, true), gate_.vocab());
  const std::vector<double> proba = gate_.predict_proba(x);
  const auto& labels = gate_.labels();
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == kGateSemanticLabel) return proba[i];
  return 0.0;  // gate trained without any semantic example
}

std::map<TypePair, std::vector<Example>> group_by_types(const Corpus& corpus) {
  std::map<TypePair, std::vector<Example>> groups;
  for (const Example& ex : corpus.examples())
    groups[TypePair{ex.subj_type, ex.obj_type}].push_back(ex);
  return groups;
}

namespace {

FeatureVocab build_vocab(const std::vector<std::vector<std::string>>& extracted,
                         int min_count) {
  FeatureVocab vocab(min_count);
  for (const auto& features : extracted) vocab.observe(features);
  vocab.freeze();
  return vocab;
}

LinearModel fit_group(const std::vector<Example>& members,
                      const std::vector<std::string>& candidates,
                      const TrainConfig& config, int min_count) {
  std::vector<std::vector<std::string>> extracted;
  for (const Example& ex : members)
    if (ex.is_semantic()) extracted.push_back(extract(ex, false));
  FeatureVocab vocab = build_vocab(extracted, min_count);

  Dataset data;
  data.reserve(extracted.size());
  std::size_t row = 0;
  for (const Example& ex : members) {
    if (!ex.is_semantic()) continue;
    const auto it =
        std::lower_bound(candidates.begin(), candidates.end(), ex.relation);
    data.emplace_back(vectorize(extracted[row++], vocab),
                      static_cast<std::size_t>(it - candidates.begin()));
  }
  return fit(data, candidates, config, std::move(vocab));
}

}  // namespace

RecentPipeline train_recent(const Corpus& corpus, const PipelineConfig& config,
                            int min_count) {
  validate(config);
  if (corpus.empty()) throw ValidationError("cannot train on an empty corpus");

  // Global gate over all examples, types included as features.
  std::vector<std::vector<std::string>> gate_features;
  gate_features.reserve(corpus.size());
  for (const Example& ex : corpus.examples())
    gate_features.push_back(extract(ex, true));
  FeatureVocab gate_vocab = build_vocab(gate_features, min_count);
  Dataset gate_data;
  gate_data.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i)
    gate_data.emplace_back(
        vectorize(gate_features[i], gate_vocab),
        corpus.examples()[i].is_semantic() ? std::size_t{1} : std::size_t{0});
  LinearModel gate = fit(gate_data, {kNoRelation, kGateSemanticLabel},
                         config.train_config, std::move(gate_vocab));

  RestrictionMap map = build_restriction_map(corpus);
  const auto groups = group_by_types(corpus);

  std::map<TypePair, GroupModel> group_models;
  std::vector<const std::pair<const TypePair, std::vector<Example>>*> to_train;
  for (const auto& group : groups) {
    const auto& candidates = map.candidates(group.first);
    if (candidates.empty())
      group_models.emplace(group.first, GroupEmpty{});
    else if (candidates.size() == 1)
      group_models.emplace(group.first, GroupConstant{candidates.front()});
    else
      to_train.push_back(&group);
  }

  // Groups are disjoint and each fit is deterministic, so parallel results
  // match sequential training exactly.
  std::vector<GroupModel> trained(to_train.size(), GroupEmpty{});
  const std::size_t n_threads = std::max(
      std::size_t{1}, std::min<std::size_t>(std::thread::hardware_concurrency(),
                                            to_train.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < to_train.size();
         i = next.fetch_add(1)) {
      trained[i] = fit_group(to_train[i]->second,
                             map.candidates(to_train[i]->first),
                             config.train_config, min_count);
    }
  };
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (std::size_t i = 0; i < to_train.size(); ++i)
    group_models.emplace(to_train[i]->first, std::move(trained[i]));

  return RecentPipeline(std::move(gate), std::move(group_models),
                        std::move(map), config);
}

std::string predict_recent(const RecentPipeline& pipeline, const Example& ex) {
  if (pipeline.gate_proba(ex) < pipeline.config().gate_threshold)
    return kNoRelation;

  const auto& groups = pipeline.group_models();
  const auto it = groups.find(TypePair{ex.subj_type, ex.obj_type});
  if (it == groups.end()) return kNoRelation;  // unseen pair: fall back

  if (std::holds_alternative<GroupEmpty>(it->second)) return kNoRelation;
  if (const auto* constant = std::get_if<GroupConstant>(&it->second))
    return constant->relation;
  const auto& model = std::get<LinearModel>(it->second);
  const SparseVector x = vectorize(extract(ex, false), model.vocab());
  return predict(model, x).label;
}

LinearModel train_flat(const Corpus& corpus, const TrainConfig& config,
                       int min_count) {
  if (corpus.empty()) throw ValidationError("cannot train on an empty corpus");
  std::vector<std::string> labels(corpus.label_set().begin(),
                                  corpus.label_set().end());

  std::vector<std::vector<std::string>> extracted;
  extracted.reserve(corpus.size());
  for (const Example& ex : corpus.examples())
    extracted.push_back(extract(ex, true));
  FeatureVocab vocab = build_vocab(extracted, min_count);

  Dataset data;
  data.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto it = std::lower_bound(labels.begin(), labels.end(),
                                     corpus.examples()[i].relation);
    data.emplace_back(vectorize(extracted[i], vocab),
                      static_cast<std::size_t>(it - labels.begin()));
  }
  return fit(data, std::move(labels), config, std::move(vocab));
}

std::string predict_flat(const LinearModel& model, const Example& ex) {
  const SparseVector x = vectorize(extract(ex, true), model.vocab());
  return predict(model, x).label;
}

}  // namespace recent
