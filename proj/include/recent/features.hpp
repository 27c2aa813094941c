#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "recent/corpus.hpp"

namespace recent {

// Dense string->index vocabulary built in two phases: observe() counts
// feature occurrences over a corpus, freeze() admits everything with
// count >= min_count in lexicographic order. A frozen vocabulary never
// grows; unseen features simply have no index.
class FeatureVocab {
 public:
  explicit FeatureVocab(int min_count = 2) : min_count_(min_count) {}

  void observe(const std::vector<std::string>& features);
  void freeze();
  bool frozen() const { return frozen_; }

  std::optional<std::size_t> index_of(const std::string& feature) const;
  std::size_t size() const { return names_.size(); }
  int min_count() const { return min_count_; }

  // Index -> feature string, in index order.
  const std::vector<std::string>& feature_names() const { return names_; }

  // Frozen vocabulary with the given features at indices 0..n-1.
  // Used by tests and model deserialization; features must be distinct.
  static FeatureVocab from_features(std::vector<std::string> features,
                                    int min_count = 2);

 private:
  int min_count_;
  bool frozen_ = false;
  std::map<std::string, std::size_t> counts_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::string> names_;
};

// Indices strictly increasing, values finite and non-zero.
struct SparseVector {
  std::vector<std::pair<std::size_t, double>> pairs;

  bool operator==(const SparseVector&) const = default;
};

bool is_valid(const SparseVector& v);

// Deterministic feature multiset of one example:
//   tok=w        for tokens outside both entity spans
//   subj_tok=w / obj_tok=w  for tokens inside the spans
//   mid=w        for tokens strictly between the two spans
//   dist=b       bucketed distance between span starts {0,1,2,3-5,6-10,11+}
//   ts= / to= / tp=   entity types, only when include_type_features
//   bias         always
std::vector<std::string> extract(const Example& ex, bool include_type_features);

std::string distance_bucket(std::size_t d);

// Feature counts mapped through the vocabulary; features without an index
// are dropped. Requires a frozen vocabulary.
SparseVector vectorize(const std::vector<std::string>& features,
                       const FeatureVocab& vocab);

}  // namespace recent
