#pragma once

/// @file multimodal.hpp
/// Niching: crowding replacement, fitness sharing, species seeds with
/// species-specific explosion (EASE), and crowding DE with spatial and
/// temporal locality.

#include <array>
#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "evo/de.hpp"
#include "evo/ea.hpp"
#include "evo/evaluate.hpp"
#include "evo/genome.hpp"
#include "evo/random.hpp"

namespace evo {

enum class DistanceMetric { Euclidean, Hamming };

/// Euclidean for real vectors, Hamming for bit and move strings.
DistanceMetric default_metric(const Genome& g);
double distance(const Genome& a, const Genome& b, DistanceMetric metric);

struct NichingConfig {
  double sharing_radius = 0.1;
  double sharing_alpha = 1.0;
  /// Discount applied to the nearest neighbour's delta history.
  double tl_discount = 0.5;
  /// Roulette floor of the spatial-locality wheel, as a fraction of d_max.
  double sl_floor = 0.05;
  DistanceMetric metric = DistanceMetric::Euclidean;
};

struct SpeciesConfig {
  double species_radius = 0.1;
  std::size_t explosion_copies = 5;
  /// Fraction of the evaluation budget spent in the exploration stage.
  double stage_switch_fraction = 0.5;
  std::size_t random_injection_count = 5;
};

void validate(const NichingConfig& c);
void validate(const SpeciesConfig& c);

/// Member closest to `candidate`; ties go to the lower index.
std::size_t nearest_member(const Population& pop, const Genome& candidate, DistanceMetric metric);

/// Replaces the nearest member with `offspring` iff the offspring is
/// strictly fitter. Returns whether a replacement happened.
bool crowding_replace(Population& pop, const Individual& offspring, DistanceMetric metric);

/// f_i / sum_j sh(d_ij) with sh(d) = 1 - (d/radius)^alpha for d < radius.
/// Every fitness must be strictly positive.
std::vector<double> shared_fitness(const Population& pop, const NichingConfig& config);

/// Scans members best first and keeps those at distance >= radius from
/// every seed already kept. Returned best first.
std::vector<std::size_t> select_species_seeds(const Population& pop, double radius,
                                              DistanceMetric metric);

using Mutator = std::function<Genome(const Genome&, Random&)>;

/// Evaluates `copies` mutated clones of `seed` and returns the fittest of
/// the seed and its clones (the seed on ties).
Individual species_explosion(const Individual& seed, std::size_t copies, const Mutator& mutate,
                             Evaluator& eval, Random& rng);

/// Roulette weights of the spatial-locality wheel around `parent_index`:
/// w_j = (d_max - d_j) + floor * d_max for j != parent, 0 for the parent.
/// All-equal distances give a uniform wheel.
std::vector<double> sl_weights(const Population& pop, std::size_t parent_index,
                               DistanceMetric metric, double floor);

/// Three distinct indices (none equal to the parent) drawn from the wheel
/// without replacement.
std::array<std::size_t, 3> sl_pick_indices(const Population& pop, std::size_t parent_index,
                                           DistanceMetric metric, double floor, Random& rng);

/// Temporal-locality follow-up for an offspring that beat its nearest
/// neighbour: stores (x_off - x_nn) + discount * delta_nn as the
/// offspring's delta, evaluates x_off + delta, and returns whichever of the
/// two is fitter, carrying the new delta. Without remaining budget the
/// offspring is returned with its delta.
Individual tl_update(const Individual& offspring, const Individual& nearest, double discount,
                     BoundPolicy policy, Evaluator& eval);

enum class CrowdingVariant { Plain, SL, TL, STL };

std::string_view to_string(CrowdingVariant v);
bool uses_spatial_locality(CrowdingVariant v);
bool uses_temporal_locality(CrowdingVariant v);
/// TL needs vector arithmetic; on string genomes TL -> Plain and STL -> SL.
CrowdingVariant effective_variant(CrowdingVariant v, const Genome& sample);

/// One crowding-DE generation. Offspring are built from the population as
/// it stands at the start of the step, evaluated as a batch, then placed in
/// target-index order against their nearest current member.
Population crowding_de_step(const Population& pop, const DEConfig& de, const NichingConfig& niche,
                            CrowdingVariant variant, Evaluator& eval, Random& rng);

RunResult run_crowding_de(const RunConfig& loop, const DEConfig& de, const NichingConfig& niche,
                          CrowdingVariant variant, const Problem& problem, Random& rng,
                          const GenerationHook& hook = {});

struct EaseResult {
  RunResult run;
  /// Species seeds of the final generation, best first.
  Population seeds;
};

/// Two-stage species-conserving run: an exploration stage (generational
/// loop with random injection) followed by a species-specific stage where
/// mating stays inside a species. Seeds bypass variation and are exploded
/// every generation in both stages.
EaseResult ease_run(const RunConfig& config, const SpeciesConfig& species, DistanceMetric metric,
                    const Problem& problem, Random& rng, const GenerationHook& hook = {});

struct Peak {
  std::vector<double> location;
  double value = 0.0;
};

struct PeakReport {
  std::size_t found = 0;
  double ratio = 0.0;
};

/// Counts known peaks certified by some member within `dist_tol` of the
/// location and `value_tol` of the value; a member certifies at most one
/// peak.
PeakReport peak_metrics(const Population& pop, const std::vector<Peak>& peaks, double value_tol,
                        double dist_tol);

}  // namespace evo
