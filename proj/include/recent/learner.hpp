#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "recent/features.hpp"

namespace recent {

struct TrainConfig {
  double learning_rate = 0.1;
  int epochs = 20;
  double l2 = 1e-4;
  std::uint32_t seed = 13;
  bool class_weighting = false;

  bool operator==(const TrainConfig&) const = default;
};

void validate(const TrainConfig& config);

using LabeledVector = std::pair<SparseVector, std::size_t>;
using Dataset = std::vector<LabeledVector>;

// Numerically stable: p_i = exp(s_i - max) / sum_j exp(s_j - max).
std::vector<double> softmax(std::span<const double> scores);

// The seam where other base classifiers could plug in: anything that maps a
// sparse vector to a probability vector over a fixed label list.
class Classifier {
 public:
  virtual ~Classifier() = default;
  // Non-negative, sums to 1 within 1e-9, aligned with labels().
  virtual std::vector<double> predict_proba(const SparseVector& x) const = 0;
  virtual const std::vector<std::string>& labels() const = 0;
};

// Multinomial logistic regression over sparse count vectors. Weights are a
// dense num_classes x dim row-major matrix; the bias is an ordinary feature.
// A model fitted on single-class data is constant: probability 1 on that
// class, exactly.
class LinearModel final : public Classifier {
 public:
  LinearModel() = default;
  LinearModel(std::vector<std::string> labels, std::vector<double> weights,
              TrainConfig config, FeatureVocab vocab,
              std::optional<std::size_t> constant_class = std::nullopt);

  std::vector<double> predict_proba(const SparseVector& x) const override;
  const std::vector<std::string>& labels() const override { return labels_; }

  std::size_t num_classes() const { return labels_.size(); }
  std::size_t dim() const { return vocab_.size(); }
  const std::vector<double>& weights() const { return weights_; }
  const TrainConfig& config() const { return config_; }
  const FeatureVocab& vocab() const { return vocab_; }
  std::optional<std::size_t> constant_class() const { return constant_class_; }

 private:
  std::vector<std::string> labels_;
  std::vector<double> weights_;  // num_classes x dim, row-major
  TrainConfig config_;
  FeatureVocab vocab_;
  std::optional<std::size_t> constant_class_;
};

struct LossGrad {
  double loss = 0.0;
  std::vector<double> gradient;  // same shape as the weight matrix
};

// loss = mean over the batch of w_c * (-log p_gold) + (l2/2) * ||W||^2,
// gradient its exact analytic gradient. class_weights, when non-empty, holds
// one multiplier per class (the class_weighting scheme of fit).
LossGrad nll_loss_and_gradient(const LinearModel& model,
                               std::span<const LabeledVector> batch,
                               std::span<const double> class_weights = {});

// Mini-batch gradient descent (batch size 32, seeded shuffle each epoch,
// zero-initialized weights). Deterministic given (data order, config.seed).
// Single-class data yields the constant model; empty data is an error.
LinearModel fit(const Dataset& data, std::vector<std::string> labels,
                const TrainConfig& config, FeatureVocab vocab);

struct Prediction {
  std::string label;
  std::vector<double> proba;
};

// Argmax of predict_proba; ties break toward the lowest class index.
Prediction predict(const LinearModel& model, const SparseVector& x);

}  // namespace recent
