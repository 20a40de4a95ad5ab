#pragma once

/// @file ea.hpp
/// The generational loop: initialize, then repeat parent selection,
/// crossover, mutation, evaluation and survival selection until a
/// termination condition holds.

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "evo/evaluate.hpp"
#include "evo/genome.hpp"
#include "evo/operators.hpp"
#include "evo/random.hpp"

namespace evo {

struct MaxGenerations {
  std::uint64_t n = 100;
};
struct MaxEvaluations {
  std::uint64_t n = 10000;
};
struct MaxWallClockSeconds {
  double seconds = 60.0;
};
/// Fires when the best-of-generation fitness improved by less than
/// `epsilon` across the last `window` generations.
struct MinImprovement {
  double epsilon = 1e-6;
  std::uint64_t window = 10;
};

using TerminationCondition =
    std::variant<MaxGenerations, MaxEvaluations, MaxWallClockSeconds, MinImprovement>;

struct RunState {
  std::uint64_t generation = 0;
  std::uint64_t evaluations = 0;
  double elapsed_seconds = 0.0;
  /// Best fitness of each generation so far, oldest first.
  std::vector<double> best_history;
};

bool check_termination(const RunState& state, const TerminationCondition& cond);
void validate(const TerminationCondition& cond);

enum class CrossoverKind { None, OnePoint, TwoPoint, Uniform, Blend };
enum class MutationKind { None, BitFlip, Random, Delta, Gaussian };

std::string_view to_string(CrossoverKind k);
std::string_view to_string(MutationKind k);
CrossoverKind parse_crossover_kind(std::string_view name);
MutationKind parse_mutation_kind(std::string_view name);

struct CrossoverSpec {
  CrossoverKind kind = CrossoverKind::OnePoint;
  /// Probability that a selected pair is recombined at all.
  double rate = 0.9;
  double swap_probability = 0.5;
  double blend_weight = 0.5;
};

struct MutationSpec {
  MutationKind kind = MutationKind::Random;
  /// Per-gene probability.
  double rate = 0.05;
  double step = 0.01;
  double sigma = 0.05;
};

/// Two offspring from two parents according to `spec` (no rate check).
std::pair<Genome, Genome> apply_crossover(const CrossoverSpec& spec, const Genome& a,
                                          const Genome& b, Random& rng);
Genome apply_mutation(const MutationSpec& spec, const Genome& g, Random& rng);

/// (mu/rho +, lambda) configuration. `overlapping` selects (mu+lambda).
struct RunConfig {
  std::size_t population_size = 50;
  std::size_t offspring_size = 50;
  /// Parents per mating: 1 = mutation only, 2 = two-parent crossover.
  std::size_t breeding_size = 2;
  bool overlapping = true;
  SelectionScheme parent_scheme = SelectionScheme::BinaryTournament;
  SelectionScheme survival_scheme = SelectionScheme::Truncation;
  CrossoverSpec crossover;
  MutationSpec mutation;
  TerminationCondition termination = MaxGenerations{100};
  /// Hard cap on fitness calls, applied in addition to `termination`.
  std::uint64_t max_evaluations = Evaluator::kUnlimited;
  std::uint64_t seed = 1;
  int threads = 1;
  std::size_t max_retries = 1000;
  /// Parent selection on shared fitness (radius > 0 enables).
  double sharing_radius = 0.0;
  double sharing_alpha = 1.0;
};

void validate(const RunConfig& config);

struct GenerationStats {
  std::uint64_t generation = 0;
  std::uint64_t evaluations = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  std::optional<std::size_t> peaks_found;
};

/// Called after each generation is recorded; may fill extra columns.
using GenerationHook = std::function<void(const Population&, GenerationStats&)>;

struct RunResult {
  Population population;
  std::vector<GenerationStats> log;
  std::uint64_t evaluations = 0;
};

/// Picks mu survivors from offspring (comma) or parents + offspring (plus).
Population survival_select(const Population& parents, const Population& offspring,
                           const RunConfig& config, Random& rng);

/// Tracks termination state and the per-generation log shared by all loops.
class RunMonitor {
 public:
  RunMonitor(TerminationCondition cond, GenerationHook hook);

  void record(const Population& pop, const Evaluator& eval);
  bool done() const;
  std::vector<GenerationStats> take_log() { return std::move(log_); }

 private:
  TerminationCondition cond_;
  GenerationHook hook_;
  RunState state_;
  std::vector<GenerationStats> log_;
  double start_;
};

RunResult run_generational(const RunConfig& config, const Problem& problem, Random& rng,
                           const GenerationHook& hook = {});

}  // namespace evo
