#include "evo/multimodal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "evo/error.hpp"

namespace evo {

DistanceMetric default_metric(const Genome& g) {
  return std::holds_alternative<RealVector>(g) ? DistanceMetric::Euclidean
                                               : DistanceMetric::Hamming;
}

double distance(const Genome& a, const Genome& b, DistanceMetric metric) {
  if (!same_shape(a, b)) throw InvalidInput("distance between genomes of different shape");
  if (metric == DistanceMetric::Euclidean) {
    const auto* x = std::get_if<RealVector>(&a);
    if (!x) throw InvalidInput("euclidean distance requires real-vector genomes");
    const auto& y = std::get<RealVector>(b);
    double s = 0.0;
    for (std::size_t i = 0; i < x->values.size(); ++i) {
      const double d = x->values[i] - y.values[i];
      s += d * d;
    }
    return std::sqrt(s);
  }
  return std::visit(
      [&](const auto& x) -> double {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b);
        std::size_t diff = 0;
        if constexpr (std::is_same_v<T, BitString>) {
          for (std::size_t i = 0; i < x.bits.size(); ++i) diff += x.bits[i] != y.bits[i];
        } else if constexpr (std::is_same_v<T, MoveString>) {
          for (std::size_t i = 0; i < x.moves.size(); ++i) diff += x.moves[i] != y.moves[i];
        } else {
          for (std::size_t i = 0; i < x.values.size(); ++i) diff += x.values[i] != y.values[i];
        }
        return static_cast<double>(diff);
      },
      a);
}

void validate(const NichingConfig& c) {
  if (!(c.sharing_radius > 0.0)) throw InvalidConfig("sharing_radius must be > 0");
  if (!(c.sharing_alpha > 0.0)) throw InvalidConfig("sharing_alpha must be > 0");
  if (!(c.tl_discount >= 0.0 && c.tl_discount < 1.0))
    throw InvalidConfig("tl_discount must lie in [0,1)");
  if (!(c.sl_floor > 0.0)) throw InvalidConfig("sl_floor must be > 0");
}

void validate(const SpeciesConfig& c) {
  if (!(c.species_radius > 0.0)) throw InvalidConfig("species_radius must be > 0");
  if (c.explosion_copies == 0) throw InvalidConfig("explosion_copies must be >= 1");
  if (!(c.stage_switch_fraction > 0.0 && c.stage_switch_fraction <= 1.0))
    throw InvalidConfig("stage_switch_fraction must lie in (0,1]");
}

std::size_t nearest_member(const Population& pop, const Genome& candidate, DistanceMetric metric) {
  if (pop.empty()) throw InvalidInput("nearest member of an empty population");
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const double d = distance(pop[i].genome, candidate, metric);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

bool crowding_replace(Population& pop, const Individual& offspring, DistanceMetric metric) {
  const auto nn = nearest_member(pop, offspring.genome, metric);
  if (!(offspring.fitness > pop[nn].fitness)) return false;
  pop[nn] = offspring;
  return true;
}

std::vector<double> shared_fitness(const Population& pop, const NichingConfig& config) {
  validate(config);
  const std::size_t n = pop.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(pop[i].fitness > 0.0))
      throw ContractViolation("fitness sharing requires strictly positive fitness");
    double niche = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = distance(pop[i].genome, pop[j].genome, config.metric);
      if (d < config.sharing_radius)
        niche += 1.0 - std::pow(d / config.sharing_radius, config.sharing_alpha);
    }
    out[i] = pop[i].fitness / niche;
  }
  return out;
}

std::vector<std::size_t> select_species_seeds(const Population& pop, double radius,
                                              DistanceMetric metric) {
  std::vector<std::size_t> order(pop.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pop[a].fitness > pop[b].fitness; });
  std::vector<std::size_t> seeds;
  for (auto i : order) {
    const bool far = std::all_of(seeds.begin(), seeds.end(), [&](std::size_t s) {
      return distance(pop[i].genome, pop[s].genome, metric) >= radius;
    });
    if (far) seeds.push_back(i);
  }
  return seeds;
}

Individual species_explosion(const Individual& seed, std::size_t copies, const Mutator& mutate,
                             Evaluator& eval, Random& rng) {
  if (copies == 0) throw InvalidInput("species explosion needs at least one copy");
  Population clones;
  clones.reserve(copies);
  for (std::size_t c = 0; c < copies; ++c) clones.emplace_back(mutate(seed.genome, rng));
  const auto ok = eval.evaluate(clones);
  Individual best = seed;
  for (std::size_t c = 0; c < copies; ++c)
    if (ok[c] && clones[c].fitness > best.fitness) best = clones[c];
  return best;
}

std::vector<double> sl_weights(const Population& pop, std::size_t parent_index,
                               DistanceMetric metric, double floor) {
  const std::size_t n = pop.size();
  std::vector<double> d(n, 0.0);
  double d_max = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == parent_index) continue;
    d[j] = distance(pop[parent_index].genome, pop[j].genome, metric);
    d_max = std::max(d_max, d[j]);
  }
  std::vector<double> w(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (j == parent_index) continue;
    w[j] = d_max > 0.0 ? (d_max - d[j]) + floor * d_max : 1.0;
  }
  return w;
}

std::array<std::size_t, 3> sl_pick_indices(const Population& pop, std::size_t parent_index,
                                           DistanceMetric metric, double floor, Random& rng) {
  if (pop.size() < 4) throw InvalidInput("spatial-locality picking needs a population of at least 4");
  auto w = sl_weights(pop, parent_index, metric, floor);
  std::array<std::size_t, 3> picks{};
  for (auto& p : picks) {
    std::discrete_distribution<std::size_t> wheel(w.begin(), w.end());
    p = wheel(rng.engine());
    w[p] = 0.0;
  }
  return picks;
}

Individual tl_update(const Individual& offspring, const Individual& nearest, double discount,
                     BoundPolicy policy, Evaluator& eval) {
  const auto* x_off = std::get_if<RealVector>(&offspring.genome);
  const auto* x_nn = std::get_if<RealVector>(&nearest.genome);
  if (!x_off || !x_nn) throw InvalidInput("temporal locality requires real-vector genomes");
  const std::size_t d = x_off->size();

  std::vector<double> delta(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double history = nearest.delta ? (*nearest.delta)[i] : 0.0;
    delta[i] = (x_off->values[i] - x_nn->values[i]) + discount * history;
  }

  Individual installed = offspring;
  installed.delta = delta;
  if (eval.remaining() == 0) return installed;

  RealVector second = *x_off;
  for (std::size_t i = 0; i < d; ++i) second.values[i] += delta[i];
  apply_bounds(second, policy);
  const Fitness f = eval(second);
  if (f && *f > offspring.fitness) {
    installed = Individual(std::move(second), *f);
    installed.delta = std::move(delta);
  }
  return installed;
}

std::string_view to_string(CrowdingVariant v) {
  switch (v) {
    case CrowdingVariant::Plain: return "plain";
    case CrowdingVariant::SL: return "sl";
    case CrowdingVariant::TL: return "tl";
    case CrowdingVariant::STL: return "stl";
  }
  return "?";
}

bool uses_spatial_locality(CrowdingVariant v) {
  return v == CrowdingVariant::SL || v == CrowdingVariant::STL;
}

bool uses_temporal_locality(CrowdingVariant v) {
  return v == CrowdingVariant::TL || v == CrowdingVariant::STL;
}

CrowdingVariant effective_variant(CrowdingVariant v, const Genome& sample) {
  if (std::holds_alternative<RealVector>(sample)) return v;
  if (v == CrowdingVariant::TL) return CrowdingVariant::Plain;
  if (v == CrowdingVariant::STL) return CrowdingVariant::SL;
  return v;
}

Population crowding_de_step(const Population& pop, const DEConfig& de, const NichingConfig& niche,
                            CrowdingVariant variant, Evaluator& eval, Random& rng) {
  validate(de);
  validate(niche);
  const std::size_t n = pop.size();
  if (n < 4) throw InvalidInput("crowding DE needs a population of at least 4");
  variant = effective_variant(variant, pop.front().genome);
  const std::size_t m = static_cast<std::size_t>(std::min<std::uint64_t>(n, eval.remaining()));

  Population offspring;
  offspring.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto picks = uses_spatial_locality(variant)
                           ? sl_pick_indices(pop, i, niche.metric, niche.sl_floor, rng)
                           : pick_distinct(n, i, rng);
    offspring.emplace_back(make_offspring(pop, i, picks, de, rng));
  }
  const auto ok = eval.evaluate(offspring);

  Population next = pop;
  for (std::size_t i = 0; i < m; ++i) {
    if (!ok[i]) continue;
    const auto nn = nearest_member(next, offspring[i].genome, niche.metric);
    if (!(offspring[i].fitness > next[nn].fitness)) continue;
    if (uses_temporal_locality(variant))
      next[nn] = tl_update(offspring[i], next[nn], niche.tl_discount, de.bound_policy, eval);
    else
      next[nn] = std::move(offspring[i]);
  }
  return next;
}

RunResult run_crowding_de(const RunConfig& loop, const DEConfig& de, const NichingConfig& niche,
                          CrowdingVariant variant, const Problem& problem, Random& rng,
                          const GenerationHook& hook) {
  validate(de);
  validate(niche);
  validate(loop.termination);
  if (loop.population_size < 4) throw InvalidConfig("crowding DE needs population_size >= 4");
  Evaluator eval(problem, loop.max_evaluations, loop.threads);
  RunMonitor monitor(loop.termination, hook);

  Population pop = initialize_population(loop.population_size, eval, rng, loop.max_retries);
  monitor.record(pop, eval);
  while (!monitor.done() && eval.remaining() > 0) {
    pop = crowding_de_step(pop, de, niche, variant, eval, rng);
    monitor.record(pop, eval);
  }
  return {std::move(pop), monitor.take_log(), eval.count()};
}

namespace {

// Evaluation count (or generation count when the budget is unbounded) at
// which the species-specific stage starts.
struct StageSwitch {
  bool by_evaluations = true;
  double at = std::numeric_limits<double>::infinity();
};

StageSwitch stage_switch(const RunConfig& config, const SpeciesConfig& species) {
  StageSwitch s;
  if (config.max_evaluations != Evaluator::kUnlimited) {
    s.at = species.stage_switch_fraction * static_cast<double>(config.max_evaluations);
  } else if (const auto* e = std::get_if<MaxEvaluations>(&config.termination)) {
    s.at = species.stage_switch_fraction * static_cast<double>(e->n);
  } else if (const auto* g = std::get_if<MaxGenerations>(&config.termination)) {
    s.by_evaluations = false;
    s.at = species.stage_switch_fraction * static_cast<double>(g->n);
  }
  // A fraction of 1 means the whole run explores.
  if (species.stage_switch_fraction >= 1.0) s.at = std::numeric_limits<double>::infinity();
  return s;
}

// Species label per member: index of the nearest seed within the radius,
// or a fresh singleton label.
std::vector<std::size_t> assign_species(const Population& pop, const std::vector<std::size_t>& seeds,
                                        double radius, DistanceMetric metric) {
  std::vector<std::size_t> label(pop.size());
  std::size_t next_label = seeds.size();
  for (std::size_t i = 0; i < pop.size(); ++i) {
    std::size_t best = seeds.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      const double d = distance(pop[i].genome, pop[seeds[s]].genome, metric);
      if (d < radius && d < best_d) {
        best_d = d;
        best = s;
      }
    }
    label[i] = best < seeds.size() ? best : next_label++;
  }
  return label;
}

}  // namespace

EaseResult ease_run(const RunConfig& config, const SpeciesConfig& species, DistanceMetric metric,
                    const Problem& problem, Random& rng, const GenerationHook& hook) {
  validate(config);
  validate(species);
  Evaluator eval(problem, config.max_evaluations, config.threads);
  RunMonitor monitor(config.termination, hook);
  const Mutator mutate = [&](const Genome& g, Random& r) {
    return apply_mutation(config.mutation, g, r);
  };
  const auto sw = stage_switch(config, species);
  const std::size_t mu = config.population_size;

  Population pop = initialize_population(mu, eval, rng, config.max_retries);
  monitor.record(pop, eval);

  for (std::uint64_t gen = 0; !monitor.done() && eval.remaining() > 0; ++gen) {
    const double progress = sw.by_evaluations ? static_cast<double>(eval.count())
                                              : static_cast<double>(gen);
    const bool exploring = progress < sw.at;

    auto seed_idx = select_species_seeds(pop, species.species_radius, metric);
    if (seed_idx.size() > mu) seed_idx.resize(mu);
    std::vector<char> is_seed(pop.size(), 0);
    for (auto s : seed_idx) is_seed[s] = 1;

    // Variation works on the population before explosion.
    const std::size_t lambda =
        static_cast<std::size_t>(std::min<std::uint64_t>(config.offspring_size, eval.remaining()));
    std::vector<std::size_t> mates;
    mates.reserve(2 * lambda);
    if (exploring) {
      mates = select(pop, config.parent_scheme, 2 * lambda, rng);
    } else {
      const auto label = assign_species(pop, seed_idx, species.species_radius, metric);
      for (std::size_t k = 0; k < lambda; ++k) {
        const auto first = select(pop, config.parent_scheme, 1, rng).front();
        std::vector<std::size_t> members;
        std::vector<double> f;
        for (std::size_t i = 0; i < pop.size(); ++i)
          if (label[i] == label[first]) {
            members.push_back(i);
            f.push_back(pop[i].fitness);
          }
        const auto second = members[select(f, config.parent_scheme, 1, rng).front()];
        mates.push_back(first);
        mates.push_back(second);
      }
    }
    Population offspring;
    offspring.reserve(lambda);
    for (std::size_t k = 0; k < lambda; ++k) {
      const Genome& a = pop[mates[2 * k]].genome;
      const Genome& b = pop[mates[2 * k + 1]].genome;
      Genome child = config.breeding_size > 1 && rng.bernoulli(config.crossover.rate)
                         ? apply_crossover(config.crossover, a, b, rng).first
                         : a;
      offspring.emplace_back(mutate(child, rng));
    }
    auto ok = eval.evaluate(offspring);

    Population pool;
    for (std::size_t k = 0; k < offspring.size(); ++k)
      if (ok[k]) pool.push_back(std::move(offspring[k]));

    if (exploring) {
      const std::size_t inject = static_cast<std::size_t>(
          std::min<std::uint64_t>(species.random_injection_count, eval.remaining()));
      Population fresh;
      for (std::size_t k = 0; k < inject; ++k) fresh.emplace_back(problem.sample(rng));
      ok = eval.evaluate(fresh);
      for (std::size_t k = 0; k < fresh.size(); ++k)
        if (ok[k]) pool.push_back(std::move(fresh[k]));
    }

    Population seeds;
    for (auto s : seed_idx) {
      if (eval.remaining() >= species.explosion_copies)
        seeds.push_back(species_explosion(pop[s], species.explosion_copies, mutate, eval, rng));
      else
        seeds.push_back(pop[s]);
    }

    const std::size_t fill = mu - seeds.size();
    const bool parents_join = config.overlapping || pool.size() < fill;
    if (parents_join)
      for (std::size_t i = 0; i < pop.size(); ++i)
        if (!is_seed[i]) pool.push_back(pop[i]);

    Population next = std::move(seeds);
    if (fill > 0)
      for (auto i : select(pool, config.survival_scheme, fill, rng)) next.push_back(pool[i]);
    pop = std::move(next);
    monitor.record(pop, eval);
  }

  EaseResult result;
  for (auto s : select_species_seeds(pop, species.species_radius, metric))
    result.seeds.push_back(pop[s]);
  result.run = {std::move(pop), monitor.take_log(), eval.count()};
  return result;
}

PeakReport peak_metrics(const Population& pop, const std::vector<Peak>& peaks, double value_tol,
                        double dist_tol) {
  if (peaks.empty()) throw InvalidInput("peak metrics need at least one known peak");
  std::vector<char> used(pop.size(), 0);
  PeakReport report;
  for (const auto& peak : peaks) {
    std::size_t best = pop.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pop.size(); ++i) {
      if (used[i] || !pop[i].evaluated) continue;
      const auto* x = std::get_if<RealVector>(&pop[i].genome);
      if (!x || x->size() != peak.location.size()) continue;
      double s = 0.0;
      for (std::size_t k = 0; k < x->size(); ++k) {
        const double d = x->values[k] - peak.location[k];
        s += d * d;
      }
      const double d = std::sqrt(s);
      if (d <= dist_tol && std::abs(pop[i].fitness - peak.value) <= value_tol && d < best_d) {
        best_d = d;
        best = i;
      }
    }
    if (best < pop.size()) {
      used[best] = 1;
      ++report.found;
    }
  }
  report.ratio = static_cast<double>(report.found) / static_cast<double>(peaks.size());
  return report;
}

}  // namespace evo
