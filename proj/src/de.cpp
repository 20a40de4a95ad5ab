#include "evo/de.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "evo/error.hpp"

namespace evo {

std::string_view to_string(BoundPolicy p) { return p == BoundPolicy::Reflect ? "reflect" : "clamp"; }

BoundPolicy parse_bound_policy(std::string_view name) {
  if (name == "reflect") return BoundPolicy::Reflect;
  if (name == "clamp") return BoundPolicy::Clamp;
  throw InvalidInput("unknown bound policy '" + std::string(name) + "'");
}

void validate(const DEConfig& c) {
  if (!(c.scale_factor >= 0.0)) throw InvalidConfig("scale_factor must be >= 0");
  if (c.crossover_rate < 0.0 || c.crossover_rate > 1.0)
    throw InvalidConfig("crossover_rate (CR) outside [0,1]");
}

double apply_bound(double x, const Interval& box, BoundPolicy policy) {
  if (box.contains(x)) return x;
  if (policy == BoundPolicy::Clamp || box.width() <= 0.0) return box.clamp(x);
  const double w = box.width();
  double y = std::fmod(x - box.lo, 2.0 * w);
  if (y < 0.0) y += 2.0 * w;
  if (y > w) y = 2.0 * w - y;
  return box.clamp(box.lo + y);
}

void apply_bounds(RealVector& v, BoundPolicy policy) {
  for (std::size_t i = 0; i < v.values.size(); ++i)
    v.values[i] = apply_bound(v.values[i], v.bounds[i], policy);
}

std::array<std::size_t, 3> pick_distinct(std::size_t n, std::size_t target, Random& rng) {
  if (n < 4) throw InvalidInput("differential evolution needs a population of at least 4");
  std::array<std::size_t, 3> r{};
  for (std::size_t k = 0; k < 3; ++k) {
    std::size_t c;
    do {
      c = rng.index(n);
    } while (c == target || std::find(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(k), c) !=
                                r.begin() + static_cast<std::ptrdiff_t>(k));
    r[k] = c;
  }
  return r;
}

Genome trial_from(const Genome& base, const Genome& diff_a, const Genome& diff_b,
                  double scale_factor, BoundPolicy policy, Random& rng) {
  if (!same_shape(base, diff_a) || !same_shape(base, diff_b))
    throw InvalidInput("trial vector participants differ in variant or dimension");
  if (const auto* x = std::get_if<RealVector>(&base)) {
    const auto& a = std::get<RealVector>(diff_a);
    const auto& b = std::get<RealVector>(diff_b);
    RealVector t = *x;
    for (std::size_t i = 0; i < t.values.size(); ++i)
      t.values[i] += scale_factor * (a.values[i] - b.values[i]);
    apply_bounds(t, policy);
    return t;
  }
  const double p = std::min(scale_factor, 1.0);
  if (const auto* x = std::get_if<BitString>(&base)) {
    const auto& a = std::get<BitString>(diff_a);
    const auto& b = std::get<BitString>(diff_b);
    BitString t = *x;
    for (std::size_t i = 0; i < t.bits.size(); ++i)
      if (a.bits[i] != b.bits[i] && rng.bernoulli(p)) t.bits[i] = static_cast<std::uint8_t>(rng.index(2));
    return t;
  }
  const auto& x = std::get<MoveString>(base);
  const auto& a = std::get<MoveString>(diff_a);
  const auto& b = std::get<MoveString>(diff_b);
  MoveString t = x;
  for (std::size_t i = 0; i < t.moves.size(); ++i)
    if (a.moves[i] != b.moves[i] && rng.bernoulli(p))
      t.moves[i] = t.alphabet[rng.index(t.alphabet.size())];
  return t;
}

Genome trial_vector(const Population& pop, std::size_t target_index, const DEConfig& config,
                    Random& rng) {
  const auto r = pick_distinct(pop.size(), target_index, rng);
  return trial_from(pop[r[0]].genome, pop[r[1]].genome, pop[r[2]].genome, config.scale_factor,
                    config.bound_policy, rng);
}

Genome recombine(const Genome& target, const Genome& trial, double crossover_rate, Random& rng) {
  if (!same_shape(target, trial)) throw InvalidInput("recombination dimension mismatch");
  const std::size_t d = genome_size(target);
  if (d == 0) return target;
  const std::size_t forced = rng.index(d);
  Genome child = target;
  std::visit(
      [&](auto& c) {
        using T = std::decay_t<decltype(c)>;
        const auto& t = std::get<T>(trial);
        for (std::size_t i = 0; i < d; ++i) {
          const bool take = rng.bernoulli(crossover_rate) || i == forced;
          if (!take) continue;
          if constexpr (std::is_same_v<T, BitString>) c.bits[i] = t.bits[i];
          else if constexpr (std::is_same_v<T, RealVector>) c.values[i] = t.values[i];
          else c.moves[i] = t.moves[i];
        }
      },
      child);
  return child;
}

namespace {

void change_one_symbol(Genome& g, Random& rng) {
  if (auto* b = std::get_if<BitString>(&g)) {
    if (b->bits.empty()) return;
    auto& bit = b->bits[rng.index(b->bits.size())];
    bit = bit ? 0 : 1;
  } else if (auto* m = std::get_if<MoveString>(&g)) {
    if (m->moves.empty() || m->alphabet.size() < 2) return;
    auto& c = m->moves[rng.index(m->moves.size())];
    const auto cur = m->alphabet.find(c);
    auto k = rng.index(m->alphabet.size() - 1);
    if (k >= cur) ++k;
    c = m->alphabet[k];
  }
}

}  // namespace

Genome make_offspring(const Population& pop, std::size_t target_index,
                      const std::array<std::size_t, 3>& picks, const DEConfig& config,
                      Random& rng) {
  const Genome trial = trial_from(pop[picks[0]].genome, pop[picks[1]].genome,
                                  pop[picks[2]].genome, config.scale_factor,
                                  config.bound_policy, rng);
  Genome child = recombine(pop[target_index].genome, trial, config.crossover_rate, rng);
  if (!std::holds_alternative<RealVector>(child) && child == pop[target_index].genome)
    change_one_symbol(child, rng);
  return child;
}

Population de_step(const Population& pop, const DEConfig& config, Evaluator& eval, Random& rng) {
  validate(config);
  const std::size_t n = pop.size();
  const std::size_t m = static_cast<std::size_t>(std::min<std::uint64_t>(n, eval.remaining()));

  Population offspring;
  offspring.reserve(m);
  for (std::size_t i = 0; i < m; ++i)
    offspring.emplace_back(make_offspring(pop, i, pick_distinct(n, i, rng), config, rng));
  const auto ok = eval.evaluate(offspring);

  Population next = pop;
  for (std::size_t i = 0; i < m; ++i)
    if (ok[i] && offspring[i].fitness > pop[i].fitness) next[i] = std::move(offspring[i]);
  return next;
}

RunResult run_de(const RunConfig& loop, const DEConfig& config, const Problem& problem,
                 Random& rng, const GenerationHook& hook) {
  validate(config);
  validate(loop.termination);
  if (loop.population_size < 4) throw InvalidConfig("DE needs population_size >= 4");
  Evaluator eval(problem, loop.max_evaluations, loop.threads);
  RunMonitor monitor(loop.termination, hook);

  Population pop = initialize_population(loop.population_size, eval, rng, loop.max_retries);
  monitor.record(pop, eval);
  while (!monitor.done() && eval.remaining() > 0) {
    pop = de_step(pop, config, eval, rng);
    monitor.record(pop, eval);
  }
  return {std::move(pop), monitor.take_log(), eval.count()};
}

}  // namespace evo
