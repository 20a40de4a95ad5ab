#pragma once

/// @file de.hpp
/// DE/rand/1 with binomial recombination and one-to-one greedy replacement.

#include <array>
#include <cstdint>
#include <string_view>

#include "evo/ea.hpp"
#include "evo/evaluate.hpp"
#include "evo/genome.hpp"
#include "evo/random.hpp"

namespace evo {

/// How out-of-box trial components are brought back inside.
enum class BoundPolicy {
  Reflect,  ///< fold the overshoot back into the interval
  Clamp,
};

std::string_view to_string(BoundPolicy p);
BoundPolicy parse_bound_policy(std::string_view name);

struct DEConfig {
  double scale_factor = 0.5;
  double crossover_rate = 0.9;
  BoundPolicy bound_policy = BoundPolicy::Reflect;
  std::uint64_t seed = 1;
};

void validate(const DEConfig& config);

double apply_bound(double x, const Interval& box, BoundPolicy policy);
void apply_bounds(RealVector& v, BoundPolicy policy);

/// Three distinct indices in [0, n), all different from `target`.
std::array<std::size_t, 3> pick_distinct(std::size_t n, std::size_t target, Random& rng);

/// base + F * (diff_a - diff_b) for real vectors. For bit and move strings
/// the discrete analogue starts from the base and resamples, with
/// probability min(F, 1), every position where the two difference members
/// disagree.
Genome trial_from(const Genome& base, const Genome& diff_a, const Genome& diff_b,
                  double scale_factor, BoundPolicy policy, Random& rng);

/// Trial vector for `target_index` from three uniformly chosen members.
Genome trial_vector(const Population& pop, std::size_t target_index, const DEConfig& config,
                    Random& rng);

/// Binomial recombination: each component comes from the trial with
/// probability CR; one uniformly chosen index always does.
Genome recombine(const Genome& target, const Genome& trial, double crossover_rate, Random& rng);

/// Offspring of member `target_index` given the three participants.
/// String genomes that come out identical to the target get one position
/// changed to a different symbol, so every offspring is a new candidate.
Genome make_offspring(const Population& pop, std::size_t target_index,
                      const std::array<std::size_t, 3>& picks, const DEConfig& config,
                      Random& rng);

/// One generation: every member (in index order, while budget remains)
/// gets an offspring built from the current population; the offspring
/// replaces it iff strictly fitter.
Population de_step(const Population& pop, const DEConfig& config, Evaluator& eval, Random& rng);

/// DE loop driven by the population size, termination condition and
/// evaluation budget of `loop`.
RunResult run_de(const RunConfig& loop, const DEConfig& config, const Problem& problem,
                 Random& rng, const GenerationHook& hook = {});

}  // namespace evo
