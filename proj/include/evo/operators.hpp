#pragma once

/// @file operators.hpp
/// Selection, crossover and mutation operators over Genome values.
///
/// Every operator maps valid genomes to valid genomes: real vectors stay
/// inside their box, move strings stay inside their alphabet, and lengths
/// never change.

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "evo/genome.hpp"
#include "evo/random.hpp"

namespace evo {

enum class SelectionScheme {
  FitnessProportional,
  RankProportional,
  UniformDeterministic,
  UniformStochastic,
  BinaryTournament,
  Truncation,
};

std::string_view to_string(SelectionScheme s);
SelectionScheme parse_selection_scheme(std::string_view name);

/// Picks k indices into `fitness`.
///
/// - FitnessProportional: index i with probability f_i / sum(f); every f_i
///   must be strictly positive.
/// - RankProportional: linear ranking, worst rank 1 and best rank n.
/// - UniformDeterministic: 0, 1, ..., n-1, 0, 1, ... in order.
/// - UniformStochastic: uniform with replacement.
/// - BinaryTournament: k independent contests between two distinct members.
/// - Truncation: the k fittest, best first; k must not exceed n.
///
/// Ties between equal fitness values go to the lower index.
std::vector<std::size_t> select(std::span<const double> fitness, SelectionScheme scheme,
                                std::size_t k, Random& rng);

std::vector<std::size_t> select(const Population& pop, SelectionScheme scheme, std::size_t k,
                                Random& rng);

std::vector<double> fitness_values(const Population& pop);

/// Adds a constant so that the minimum fitness becomes `floor`. Meant to
/// precede fitness-proportional selection on signed fitness.
std::vector<double> shift_positive(std::span<const double> fitness, double floor = 1e-9);

// Crossover. Both parents must share variant and length.

std::pair<Genome, Genome> crossover_one_point_at(const Genome& a, const Genome& b,
                                                 std::size_t cut);
std::pair<Genome, Genome> crossover_one_point(const Genome& a, const Genome& b, Random& rng);

std::pair<Genome, Genome> crossover_two_point_at(const Genome& a, const Genome& b,
                                                 std::size_t cut1, std::size_t cut2);
std::pair<Genome, Genome> crossover_two_point(const Genome& a, const Genome& b, Random& rng);

std::pair<Genome, Genome> crossover_uniform(const Genome& a, const Genome& b, double p_swap,
                                            Random& rng);

/// w*a + (1-w)*b componentwise, clamped to the bounds of `a`.
RealVector crossover_blend(const RealVector& a, const RealVector& b, double w = 0.5);

// Mutation.

BitString mutate_bitflip(const BitString& g, double p, Random& rng);

/// Resamples each position uniformly from its domain with probability p.
Genome mutate_random(const Genome& g, double p, Random& rng);

enum class DeltaSign { Random, Plus, Minus };

/// Adds +step or -step to each component with probability p, then clamps.
RealVector mutate_delta(const RealVector& g, double p, double step, Random& rng,
                        DeltaSign sign = DeltaSign::Random);

/// Adds an N(0, sigma^2) draw to each component with probability p, then clamps.
RealVector mutate_gaussian(const RealVector& g, double p, double sigma, Random& rng);

}  // namespace evo
