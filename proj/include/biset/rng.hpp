#pragma once

#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "biset/tensor.hpp"

namespace biset {

/// Named random source. Every piece of sampling in the pipeline (parameter
/// init, dropout masks, batch shuffles, random templates) draws from one of
/// these so that a run is reproducible from its seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::mt19937_64& engine() { return gen_; }

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }

  /// Uniform integer in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(gen_);
  }

  Mat uniform_matrix(Eigen::Index rows, Eigen::Index cols, double lo,
                     double hi) {
    Mat m(rows, cols);
    std::uniform_real_distribution<double> dist(lo, hi);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = dist(gen_);
    }
    return m;
  }

  Vec uniform_vector(Eigen::Index n, double lo, double hi) {
    return uniform_matrix(n, 1, lo, hi);
  }

  std::vector<std::size_t> permutation(std::size_t n) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    std::shuffle(p.begin(), p.end(), gen_);
    return p;
  }

  /// Deterministic child stream, so separate concerns (init vs. batching)
  /// cannot perturb each other's draws.
  Rng fork(std::uint64_t stream) {
    return Rng(gen_() ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace biset
