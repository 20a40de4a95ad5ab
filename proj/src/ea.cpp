#include "evo/ea.hpp"

#include <algorithm>
#include <chrono>
#include <string>

#include "evo/error.hpp"
#include "evo/multimodal.hpp"

namespace evo {

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

constexpr std::pair<CrossoverKind, std::string_view> kCrossoverNames[] = {
    {CrossoverKind::None, "none"},        {CrossoverKind::OnePoint, "one-point"},
    {CrossoverKind::TwoPoint, "two-point"}, {CrossoverKind::Uniform, "uniform"},
    {CrossoverKind::Blend, "blend"},
};

constexpr std::pair<MutationKind, std::string_view> kMutationNames[] = {
    {MutationKind::None, "none"},         {MutationKind::BitFlip, "bitflip"},
    {MutationKind::Random, "random"},     {MutationKind::Delta, "delta"},
    {MutationKind::Gaussian, "gaussian"},
};

const RealVector& as_real(const Genome& g, std::string_view op) {
  const auto* r = std::get_if<RealVector>(&g);
  if (!r) throw InvalidInput(std::string(op) + " requires a real-vector genome");
  return *r;
}

}  // namespace

bool check_termination(const RunState& state, const TerminationCondition& cond) {
  return std::visit(
      [&](const auto& c) -> bool {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, MaxGenerations>) {
          return state.generation >= c.n;
        } else if constexpr (std::is_same_v<T, MaxEvaluations>) {
          return state.evaluations >= c.n;
        } else if constexpr (std::is_same_v<T, MaxWallClockSeconds>) {
          return state.elapsed_seconds >= c.seconds;
        } else {
          const auto& h = state.best_history;
          if (h.size() < c.window) return false;
          return h.back() - h[h.size() - c.window] < c.epsilon;
        }
      },
      cond);
}

void validate(const TerminationCondition& cond) {
  std::visit(
      [](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, MaxGenerations> || std::is_same_v<T, MaxEvaluations>) {
          if (c.n < 1) throw InvalidConfig("termination count must be >= 1");
        } else if constexpr (std::is_same_v<T, MaxWallClockSeconds>) {
          if (!(c.seconds > 0.0)) throw InvalidConfig("wall-clock limit must be positive");
        } else {
          if (c.epsilon < 0.0) throw InvalidConfig("min-improvement epsilon must be >= 0");
          if (c.window < 1) throw InvalidConfig("min-improvement window must be >= 1");
        }
      },
      cond);
}

std::string_view to_string(CrossoverKind k) {
  for (auto [key, name] : kCrossoverNames)
    if (key == k) return name;
  return "?";
}

std::string_view to_string(MutationKind k) {
  for (auto [key, name] : kMutationNames)
    if (key == k) return name;
  return "?";
}

CrossoverKind parse_crossover_kind(std::string_view name) {
  for (auto [key, n] : kCrossoverNames)
    if (n == name) return key;
  throw InvalidInput("unknown crossover operator '" + std::string(name) + "'");
}

MutationKind parse_mutation_kind(std::string_view name) {
  for (auto [key, n] : kMutationNames)
    if (n == name) return key;
  throw InvalidInput("unknown mutation operator '" + std::string(name) + "'");
}

std::pair<Genome, Genome> apply_crossover(const CrossoverSpec& spec, const Genome& a,
                                          const Genome& b, Random& rng) {
  switch (spec.kind) {
    case CrossoverKind::None: return {a, b};
    case CrossoverKind::OnePoint: return crossover_one_point(a, b, rng);
    case CrossoverKind::TwoPoint: return crossover_two_point(a, b, rng);
    case CrossoverKind::Uniform: return crossover_uniform(a, b, spec.swap_probability, rng);
    case CrossoverKind::Blend: {
      const auto& x = as_real(a, "blend crossover");
      const auto& y = as_real(b, "blend crossover");
      return {crossover_blend(x, y, spec.blend_weight), crossover_blend(y, x, spec.blend_weight)};
    }
  }
  return {a, b};
}

Genome apply_mutation(const MutationSpec& spec, const Genome& g, Random& rng) {
  switch (spec.kind) {
    case MutationKind::None: return g;
    case MutationKind::BitFlip: {
      const auto* b = std::get_if<BitString>(&g);
      if (!b) throw InvalidInput("bit-flip mutation requires a bit-string genome");
      return mutate_bitflip(*b, spec.rate, rng);
    }
    case MutationKind::Random: return mutate_random(g, spec.rate, rng);
    case MutationKind::Delta:
      return mutate_delta(as_real(g, "delta mutation"), spec.rate, spec.step, rng);
    case MutationKind::Gaussian:
      return mutate_gaussian(as_real(g, "gaussian mutation"), spec.rate, spec.sigma, rng);
  }
  return g;
}

void validate(const RunConfig& c) {
  if (c.population_size == 0) throw InvalidConfig("population_size must be positive");
  if (c.offspring_size == 0) throw InvalidConfig("offspring_size must be positive");
  if (c.breeding_size == 0 || c.breeding_size > 2)
    throw InvalidConfig("breeding_size must be 1 or 2 (two-parent operators)");
  if (c.breeding_size > c.population_size)
    throw InvalidConfig("breeding_size exceeds population_size");
  if (!c.overlapping && c.offspring_size < c.population_size)
    throw InvalidConfig("non-overlapping survival needs offspring_size >= population_size");
  if (c.crossover.rate < 0.0 || c.crossover.rate > 1.0)
    throw InvalidConfig("crossover rate outside [0,1]");
  if (c.mutation.rate < 0.0 || c.mutation.rate > 1.0)
    throw InvalidConfig("mutation rate outside [0,1]");
  if (c.max_retries == 0) throw InvalidConfig("max_retries must be >= 1");
  validate(c.termination);
}

Population survival_select(const Population& parents, const Population& offspring,
                           const RunConfig& config, Random& rng) {
  const std::size_t mu = config.population_size;
  if (!config.overlapping) {
    if (offspring.size() < mu)
      throw InvalidConfig("non-overlapping survival needs at least mu offspring");
    Population next;
    next.reserve(mu);
    for (auto i : select(offspring, config.survival_scheme, mu, rng)) next.push_back(offspring[i]);
    return next;
  }
  Population pool;
  pool.reserve(parents.size() + offspring.size());
  pool.insert(pool.end(), parents.begin(), parents.end());
  pool.insert(pool.end(), offspring.begin(), offspring.end());
  Population next;
  next.reserve(mu);
  for (auto i : select(pool, config.survival_scheme, mu, rng)) next.push_back(pool[i]);
  return next;
}

RunMonitor::RunMonitor(TerminationCondition cond, GenerationHook hook)
    : cond_(cond), hook_(std::move(hook)), start_(now_seconds()) {}

void RunMonitor::record(const Population& pop, const Evaluator& eval) {
  GenerationStats s;
  s.generation = log_.size();
  s.evaluations = eval.count();
  s.best_fitness = pop[best_index(pop)].fitness;
  s.mean_fitness = mean_fitness(pop);
  if (hook_) hook_(pop, s);
  state_.generation = s.generation;
  state_.evaluations = s.evaluations;
  state_.elapsed_seconds = now_seconds() - start_;
  state_.best_history.push_back(s.best_fitness);
  log_.push_back(s);
}

bool RunMonitor::done() const { return check_termination(state_, cond_); }

RunResult run_generational(const RunConfig& config, const Problem& problem, Random& rng,
                           const GenerationHook& hook) {
  validate(config);
  Evaluator eval(problem, config.max_evaluations, config.threads);
  RunMonitor monitor(config.termination, hook);

  Population pop = initialize_population(config.population_size, eval, rng, config.max_retries);
  monitor.record(pop, eval);

  const std::size_t lambda = config.offspring_size;
  while (!monitor.done() && eval.remaining() >= lambda) {
    std::vector<double> weights = fitness_values(pop);
    if (config.sharing_radius > 0.0) {
      NichingConfig niche;
      niche.sharing_radius = config.sharing_radius;
      niche.sharing_alpha = config.sharing_alpha;
      niche.metric = default_metric(pop.front().genome);
      weights = shared_fitness(pop, niche);
    }

    Population offspring;
    offspring.reserve(lambda);
    bool budget_out = false;
    for (std::size_t round = 0; offspring.size() < lambda; ++round) {
      if (round > config.max_retries)
        throw InitializationFailure("could not produce enough feasible offspring");
      const std::size_t need = lambda - offspring.size();
      if (eval.remaining() < need) {
        budget_out = true;
        break;
      }
      // Parents are drawn in mating pairs; the second of a pair is unused
      // for odd `need`.
      const std::size_t draws = config.breeding_size == 1 ? need : need + (need % 2);
      const auto parents = select(weights, config.parent_scheme, draws, rng);

      Population batch;
      batch.reserve(need);
      if (config.breeding_size == 1) {
        for (auto p : parents) batch.emplace_back(apply_mutation(config.mutation, pop[p].genome, rng));
      } else {
        for (std::size_t i = 0; i + 1 < parents.size() && batch.size() < need; i += 2) {
          const Genome& a = pop[parents[i]].genome;
          const Genome& b = pop[parents[i + 1]].genome;
          auto children = rng.bernoulli(config.crossover.rate)
                              ? apply_crossover(config.crossover, a, b, rng)
                              : std::pair<Genome, Genome>{a, b};
          batch.emplace_back(apply_mutation(config.mutation, children.first, rng));
          if (batch.size() < need)
            batch.emplace_back(apply_mutation(config.mutation, children.second, rng));
        }
      }
      const auto ok = eval.evaluate(batch);
      for (std::size_t i = 0; i < batch.size(); ++i)
        if (ok[i]) offspring.push_back(std::move(batch[i]));
    }
    if (budget_out) break;

    pop = survival_select(pop, offspring, config, rng);
    monitor.record(pop, eval);
  }

  RunResult result;
  result.population = std::move(pop);
  result.log = monitor.take_log();
  result.evaluations = eval.count();
  return result;
}

}  // namespace evo
