#include "recent/learner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "recent/errors.hpp"
#include "recent/rng.hpp"

namespace recent {

void validate(const TrainConfig& config) {
  if (config.learning_rate <= 0)
    throw ValidationError("learning_rate must be > 0");
  if (config.epochs < 1) throw ValidationError("epochs must be >= 1");
  if (config.l2 < 0) throw ValidationError("l2 must be >= 0");
}

std::vector<double> softmax(std::span<const double> scores) {
  if (scores.empty()) throw ValidationError("softmax of an empty vector");
  const double max = *std::max_element(scores.begin(), scores.end());
  std::vector<double> out(scores.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out[i] = std::exp(scores[i] - max);
    sum += out[i];
  }
  for (double& p : out) p /= sum;
  return out;
}

LinearModel::LinearModel(std::vector<std::string> labels,
                         std::vector<double> weights, TrainConfig config,
                         FeatureVocab vocab,
                         std::optional<std::size_t> constant_class)
    : labels_(std::move(labels)),
      weights_(std::move(weights)),
      config_(config),
      vocab_(std::move(vocab)),
      constant_class_(constant_class) {
  if (labels_.empty()) throw ValidationError("model needs at least one label");
  if (weights_.size() != labels_.size() * vocab_.size())
    throw ValidationError("weight matrix shape mismatch");
  for (double w : weights_)
    if (!std::isfinite(w)) throw ValidationError("non-finite model weight");
  if (constant_class_ && *constant_class_ >= labels_.size())
    throw ValidationError("constant class out of range");
}

namespace {

std::vector<double> scores_of(std::span<const double> weights, std::size_t k,
                              std::size_t d, const SparseVector& x) {
  std::vector<double> scores(k, 0.0);
  for (const auto& [index, value] : x.pairs) {
    if (index >= d)
      throw ValidationError("feature index out of vocabulary bounds");
    for (std::size_t c = 0; c < k; ++c)
      scores[c] += weights[c * d + index] * value;
  }
  return scores;
}

// Shared core of nll_loss_and_gradient and the fit loop: mean weighted NLL
// over the batch plus (l2/2)*||W||^2, with its exact analytic gradient.
LossGrad loss_grad(std::span<const double> weights, std::size_t k,
                   std::size_t d, double l2,
                   std::span<const LabeledVector> batch,
                   std::span<const double> class_weights) {
  if (batch.empty()) throw ValidationError("loss over an empty batch");
  LossGrad result;
  result.gradient.assign(k * d, 0.0);

  for (const auto& [x, gold] : batch) {
    if (gold >= k) throw ValidationError("class index out of range");
    const std::vector<double> p = softmax(scores_of(weights, k, d, x));
    const double weight = class_weights.empty() ? 1.0 : class_weights[gold];
    result.loss += weight * -std::log(std::max(p[gold], 1e-300));
    for (const auto& [index, value] : x.pairs) {
      for (std::size_t c = 0; c < k; ++c) {
        const double indicator = (c == gold) ? 1.0 : 0.0;
        result.gradient[c * d + index] += weight * (p[c] - indicator) * value;
      }
    }
  }

  const double inv_n = 1.0 / static_cast<double>(batch.size());
  result.loss *= inv_n;
  for (double& g : result.gradient) g *= inv_n;

  if (l2 > 0) {
    double sq = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      sq += weights[i] * weights[i];
      result.gradient[i] += l2 * weights[i];
    }
    result.loss += 0.5 * l2 * sq;
  }
  return result;
}

}  // namespace

std::vector<double> LinearModel::predict_proba(const SparseVector& x) const {
  if (constant_class_) {
    std::vector<double> out(num_classes(), 0.0);
    out[*constant_class_] = 1.0;
    return out;
  }
  return softmax(scores_of(weights_, num_classes(), dim(), x));
}

LossGrad nll_loss_and_gradient(const LinearModel& model,
                               std::span<const LabeledVector> batch,
                               std::span<const double> class_weights) {
  return loss_grad(model.weights(), model.num_classes(), model.dim(),
                   model.config().l2, batch, class_weights);
}

LinearModel fit(const Dataset& data, std::vector<std::string> labels,
                const TrainConfig& config, FeatureVocab vocab) {
  validate(config);
  if (data.empty()) throw ValidationError("cannot fit on empty data");
  if (labels.empty()) throw ValidationError("cannot fit with no labels");
  const std::size_t k = labels.size();
  const std::size_t d = vocab.size();

  std::set<std::size_t> distinct;
  for (const auto& [x, gold] : data) {
    if (gold >= k) throw ValidationError("class index out of range");
    distinct.insert(gold);
  }
  if (distinct.size() == 1) {
    return LinearModel(std::move(labels), std::vector<double>(k * d, 0.0),
                       config, std::move(vocab), *distinct.begin());
  }

  std::vector<double> class_weights;
  if (config.class_weighting) {
    std::vector<std::size_t> counts(k, 0);
    for (const auto& [x, gold] : data) ++counts[gold];
    class_weights.resize(k, 0.0);
    const double n = static_cast<double>(data.size());
    for (std::size_t c = 0; c < k; ++c)
      if (counts[c] > 0)
        class_weights[c] = n / (static_cast<double>(k) * counts[c]);
  }

  constexpr std::size_t kBatchSize = 32;
  std::vector<double> weights(k * d, 0.0);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937 rng(config.seed);

  std::vector<LabeledVector> batch;
  batch.reserve(kBatchSize);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle(order, rng);
    for (std::size_t begin = 0; begin < order.size(); begin += kBatchSize) {
      const std::size_t end = std::min(begin + kBatchSize, order.size());
      batch.clear();
      for (std::size_t i = begin; i < end; ++i) batch.push_back(data[order[i]]);
      const LossGrad lg =
          loss_grad(weights, k, d, config.l2, batch, class_weights);
      for (std::size_t i = 0; i < weights.size(); ++i)
        weights[i] -= config.learning_rate * lg.gradient[i];
    }
  }
  return LinearModel(std::move(labels), std::move(weights), config,
                     std::move(vocab));
}

Prediction predict(const LinearModel& model, const SparseVector& x) {
  std::vector<double> proba = model.predict_proba(x);
  std::size_t best = 0;
  for (std::size_t c = 1; c < proba.size(); ++c)
    if (proba[c] > proba[best]) best = c;
  return Prediction{model.labels()[best], std::move(proba)};
}

}  // namespace recent
