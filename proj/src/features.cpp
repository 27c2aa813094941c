#include "recent/features.hpp"

#include <algorithm>
#include <cmath>

#include "recent/errors.hpp"

namespace recent {

void FeatureVocab::observe(const std::vector<std::string>& features) {
  if (frozen_) throw ValidationError("cannot observe into a frozen vocabulary");
  for (const auto& f : features) ++counts_[f];
}

void FeatureVocab::freeze() {
  if (frozen_) return;
  for (const auto& [feature, count] : counts_) {
    if (count < static_cast<std::size_t>(min_count_)) continue;
    index_.emplace(feature, names_.size());
    names_.push_back(feature);
  }
  counts_.clear();
  frozen_ = true;
}

std::optional<std::size_t> FeatureVocab::index_of(
    const std::string& feature) const {
  auto it = index_.find(feature);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

FeatureVocab FeatureVocab::from_features(std::vector<std::string> features,
                                         int min_count) {
  FeatureVocab vocab(min_count);
  for (const auto& f : features) {
    if (!vocab.index_.emplace(f, vocab.names_.size()).second)
      throw ValidationError("duplicate feature '" + f + "' in vocabulary");
    vocab.names_.push_back(f);
  }
  vocab.frozen_ = true;
  return vocab;
}

bool is_valid(const SparseVector& v) {
  for (std::size_t i = 0; i < v.pairs.size(); ++i) {
    const auto& [index, value] = v.pairs[i];
    if (i > 0 && index <= v.pairs[i - 1].first) return false;
    if (!std::isfinite(value) || value == 0.0) return false;
  }
  return true;
}

std::string distance_bucket(std::size_t d) {
  if (d <= 2) return std::to_string(d);
  if (d <= 5) return "3-5";
  if (d <= 10) return "6-10";
  return "11+";
}

std::vector<std::string> extract(const Example& ex,
                                 bool include_type_features) {
  std::vector<std::string> out;
  out.reserve(2 * ex.tokens.size() + 8);

  for (std::size_t i = 0; i < ex.tokens.size(); ++i) {
    if (ex.subj_span.contains(i))
      out.push_back("subj_tok=" + ex.tokens[i]);
    else if (ex.obj_span.contains(i))
      out.push_back("obj_tok=" + ex.tokens[i]);
    else
      out.push_back("tok=" + ex.tokens[i]);
  }

  const Span& first =
      ex.subj_span.start < ex.obj_span.start ? ex.subj_span : ex.obj_span;
  const Span& second =
      ex.subj_span.start < ex.obj_span.start ? ex.obj_span : ex.subj_span;
  for (std::size_t i = first.end; i < second.start; ++i)
    out.push_back("mid=" + ex.tokens[i]);

  const std::size_t d = second.start - first.start;
  out.push_back("dist=" + distance_bucket(d));

  if (include_type_features) {
    out.push_back("ts=" + ex.subj_type);
    out.push_back("to=" + ex.obj_type);
    out.push_back("tp=" + ex.subj_type + "|" + ex.obj_type);
  }
  out.push_back("bias");
  return out;
}

SparseVector vectorize(const std::vector<std::string>& features,
                       const FeatureVocab& vocab) {
  if (!vocab.frozen())
    throw ValidationError("vectorize requires a frozen vocabulary");
  std::map<std::size_t, double> counts;
  for (const auto& f : features)
    if (auto idx = vocab.index_of(f)) counts[*idx] += 1.0;
  SparseVector v;
  v.pairs.assign(counts.begin(), counts.end());
  return v;
}

}  // namespace recent
