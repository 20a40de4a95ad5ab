#pragma once

/// @file evaluate.hpp
/// Problem definition and population evaluation kernels.
///
/// Fitness functions are pure, so a batch of genomes can be evaluated in
/// any order. `evaluate_serial` is the reference kernel;
/// `evaluate_parallel` distributes the same batch over OpenMP threads and
/// must produce bit-identical results.

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evo/genome.hpp"
#include "evo/random.hpp"

namespace evo {

/// Fitness of a genome, or nullopt when the genome is rejected (infeasible
/// under a delete policy) and must be discarded by the caller.
using Fitness = std::optional<double>;
using FitnessFn = std::function<Fitness(const Genome&)>;

struct Problem {
  std::string name;
  /// Draws a random initial genome (feasible where the problem has a notion
  /// of feasibility).
  std::function<Genome(Random&)> sample;
  FitnessFn evaluate;
};

/// Evaluates `batch[i].genome` for every i; returns one accepted flag per
/// member and fills fitness/evaluated for the accepted ones.
std::vector<char> evaluate_serial(std::span<Individual> batch, const FitnessFn& fitness);
std::vector<char> evaluate_parallel(std::span<Individual> batch, const FitnessFn& fitness,
                                    int threads);

/// Counts fitness calls against a budget. Rejected genomes count too.
class Evaluator {
 public:
  static constexpr std::uint64_t kUnlimited = std::numeric_limits<std::uint64_t>::max();

  explicit Evaluator(const Problem& problem, std::uint64_t budget = kUnlimited,
                     int threads = 1)
      : problem_(&problem), budget_(budget), threads_(threads) {}

  const Problem& problem() const { return *problem_; }
  std::uint64_t count() const { return count_; }
  std::uint64_t budget() const { return budget_; }
  std::uint64_t remaining() const { return budget_ - count_; }

  Fitness operator()(const Genome& g);

  /// Evaluates every member of `batch`; the caller guarantees the batch
  /// fits the remaining budget.
  std::vector<char> evaluate(std::span<Individual> batch);

 private:
  const Problem* problem_;
  std::uint64_t budget_;
  int threads_;
  std::uint64_t count_ = 0;
};

/// Samples and evaluates `size` individuals; rejected samples are redrawn
/// up to `max_retries` times each.
Population initialize_population(std::size_t size, Evaluator& eval, Random& rng,
                                 std::size_t max_retries = 1000);

}  // namespace evo
