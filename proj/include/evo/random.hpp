#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace evo {

/// The single random stream of a run. Every stochastic decision of an
/// algorithm draws from one instance, in program order, so a seed fully
/// determines the run.
class Random {
 public:
  explicit Random(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return std::generate_canonical<double, 53>(engine_); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform on {0, ..., n-1}; n must be positive.
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

  bool bernoulli(double p) { return p > 0.0 && uniform() < p; }

  double normal(double sigma) {
    return std::normal_distribution<double>(0.0, sigma)(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace evo
