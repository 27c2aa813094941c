#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace recent {

// Deterministic draw helpers on top of std::mt19937. The engine itself is
// fully specified by the standard; std::shuffle and the distribution classes
// are not, so every draw in this codebase goes through these functions to
// keep corpora, splits and trained weights identical across toolchains.

inline std::uint32_t uniform_index(std::mt19937& rng, std::uint32_t n) {
  // n must be > 0. Modulo bias is ~n/2^32, irrelevant at the scales used here.
  return rng() % n;
}

inline double uniform_real(std::mt19937& rng) {
  // [0, 1) with 32-bit resolution.
  return static_cast<double>(rng()) * (1.0 / 4294967296.0);
}

inline bool bernoulli(std::mt19937& rng, double p) {
  return uniform_real(rng) < p;
}

// Fisher-Yates, identical output on every platform.
template <typename T>
void shuffle(std::vector<T>& v, std::mt19937& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = uniform_index(rng, static_cast<std::uint32_t>(i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace recent
