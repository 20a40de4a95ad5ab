#include <doctest.h>

#include <algorithm>
#include <set>

#include "evo/ea.hpp"
#include "evo/error.hpp"

using namespace evo;

namespace {

Problem one_max(std::size_t bits) {
  Problem p;
  p.name = "onemax";
  p.sample = [bits](Random& rng) -> Genome {
    BitString b;
    for (std::size_t i = 0; i < bits; ++i) b.bits.push_back(static_cast<std::uint8_t>(rng.index(2)));
    return b;
  };
  p.evaluate = [](const Genome& g) -> Fitness {
    const auto& b = std::get<BitString>(g).bits;
    return static_cast<double>(std::count(b.begin(), b.end(), 1));
  };
  return p;
}

RunConfig one_max_config(std::uint64_t seed) {
  RunConfig c;
  c.population_size = 50;
  c.offspring_size = 50;
  c.crossover.kind = CrossoverKind::OnePoint;
  c.mutation.kind = MutationKind::BitFlip;
  c.mutation.rate = 1.0 / 20.0;
  c.termination = MaxGenerations{100};
  c.seed = seed;
  return c;
}

Population labelled(std::vector<double> f, std::uint8_t tag) {
  Population pop;
  for (double v : f) pop.emplace_back(BitString{{tag}}, v);
  return pop;
}

}  // namespace

TEST_CASE("termination conditions") {
  RunState s;
  s.generation = 10;
  CHECK(check_termination(s, MaxGenerations{10}));
  s.generation = 9;
  CHECK_FALSE(check_termination(s, MaxGenerations{10}));

  s.evaluations = 500;
  CHECK(check_termination(s, MaxEvaluations{500}));
  CHECK_FALSE(check_termination(s, MaxEvaluations{501}));

  s.elapsed_seconds = 2.0;
  CHECK(check_termination(s, MaxWallClockSeconds{1.5}));
  CHECK_FALSE(check_termination(s, MaxWallClockSeconds{3.0}));

  s.best_history = {1, 1, 1, 1, 1};
  CHECK(check_termination(s, MinImprovement{0.01, 5}));
  s.best_history = {1, 1, 1, 1};
  CHECK_FALSE(check_termination(s, MinImprovement{0.01, 5}));
  s.best_history = {1, 1.5, 2, 2.5, 3};
  CHECK_FALSE(check_termination(s, MinImprovement{0.01, 5}));

  CHECK_THROWS_AS(validate(TerminationCondition{MaxGenerations{0}}), InvalidConfig);
  CHECK_THROWS_AS(validate(TerminationCondition{MinImprovement{-1.0, 3}}), InvalidConfig);
  CHECK_THROWS_AS(validate(TerminationCondition{MinImprovement{0.1, 0}}), InvalidConfig);
}

TEST_CASE("overlapping truncation keeps fitter parents") {
  RunConfig c;
  c.population_size = 3;
  c.offspring_size = 4;
  c.overlapping = true;
  c.survival_scheme = SelectionScheme::Truncation;
  Random rng(1);
  const auto parents = labelled({10, 11, 12}, 0);
  const auto offspring = labelled({1, 2, 3, 4}, 1);
  const auto next = survival_select(parents, offspring, c, rng);
  REQUIRE(next.size() == 3);
  for (const auto& ind : next) CHECK(std::get<BitString>(ind.genome).bits[0] == 0);
}

TEST_CASE("non-overlapping survival draws from offspring only") {
  RunConfig c;
  c.population_size = 3;
  c.offspring_size = 4;
  c.overlapping = false;
  Random rng(1);
  const auto parents = labelled({10, 11, 12}, 0);
  const auto offspring = labelled({1, 2, 3, 4}, 1);
  for (auto scheme : {SelectionScheme::Truncation, SelectionScheme::BinaryTournament,
                      SelectionScheme::UniformStochastic, SelectionScheme::FitnessProportional}) {
    c.survival_scheme = scheme;
    for (const auto& ind : survival_select(parents, offspring, c, rng))
      CHECK(std::get<BitString>(ind.genome).bits[0] == 1);
  }
  c.offspring_size = 2;
  CHECK_THROWS_AS(validate(c), InvalidConfig);
  CHECK_THROWS_AS(survival_select(parents, labelled({1, 2}, 1), c, rng), InvalidConfig);
}

TEST_CASE("run config validation") {
  RunConfig c;
  CHECK_NOTHROW(validate(c));
  c.breeding_size = 3;
  CHECK_THROWS_AS(validate(c), InvalidConfig);
  c.breeding_size = 2;
  c.population_size = 1;
  CHECK_THROWS_AS(validate(c), InvalidConfig);
}

TEST_CASE("the canonical GA is expressible as a run config") {
  RunConfig c;
  c.parent_scheme = SelectionScheme::FitnessProportional;
  c.crossover.kind = CrossoverKind::OnePoint;
  c.mutation.kind = MutationKind::BitFlip;
  c.overlapping = false;
  c.survival_scheme = SelectionScheme::UniformDeterministic;
  c.termination = MaxGenerations{30};
  CHECK_NOTHROW(validate(c));
  Random rng(4);
  auto problem = one_max(16);
  // Fitness-proportional selection needs positive fitness.
  auto base = problem.evaluate;
  problem.evaluate = [base](const Genome& g) -> Fitness { return *base(g) + 1.0; };
  const auto result = run_generational(c, problem, rng);
  CHECK(result.log.size() == 31);
}

TEST_CASE("OneMax reaches the optimum") {
  int solved = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Random rng(seed);
    const auto result = run_generational(one_max_config(seed), one_max(20), rng);
    if (result.log.back().best_fitness == 20.0) ++solved;
  }
  CHECK(solved >= 19);
}

TEST_CASE("generational runs are deterministic and elitist") {
  auto c = one_max_config(42);
  c.termination = MaxGenerations{40};
  c.parent_scheme = SelectionScheme::RankProportional;
  c.crossover.kind = CrossoverKind::Uniform;
  Random a(42), b(42);
  const auto r1 = run_generational(c, one_max(30), a);
  const auto r2 = run_generational(c, one_max(30), b);
  REQUIRE(r1.log.size() == r2.log.size());
  for (std::size_t i = 0; i < r1.log.size(); ++i) {
    CHECK(r1.log[i].evaluations == r2.log[i].evaluations);
    CHECK(r1.log[i].best_fitness == r2.log[i].best_fitness);
    CHECK(r1.log[i].mean_fitness == r2.log[i].mean_fitness);
  }
  for (std::size_t i = 0; i < r1.population.size(); ++i)
    CHECK(r1.population[i].genome == r2.population[i].genome);
  for (std::size_t i = 1; i < r1.log.size(); ++i)
    CHECK(r1.log[i].best_fitness >= r1.log[i - 1].best_fitness);
}

TEST_CASE("parallel evaluation does not change a run") {
  auto c = one_max_config(5);
  c.termination = MaxGenerations{20};
  Random a(5), b(5);
  const auto serial = run_generational(c, one_max(24), a);
  c.threads = 4;
  const auto parallel = run_generational(c, one_max(24), b);
  REQUIRE(serial.log.size() == parallel.log.size());
  for (std::size_t i = 0; i < serial.log.size(); ++i)
    CHECK(serial.log[i].best_fitness == parallel.log[i].best_fitness);
  for (std::size_t i = 0; i < serial.population.size(); ++i)
    CHECK(serial.population[i].genome == parallel.population[i].genome);
}

TEST_CASE("evaluation budget is never exceeded") {
  auto c = one_max_config(3);
  c.termination = MaxGenerations{1000};
  c.max_evaluations = 1234;
  Random rng(3);
  const auto result = run_generational(c, one_max(20), rng);
  CHECK(result.evaluations <= 1234);
  for (std::size_t i = 1; i < result.log.size(); ++i)
    CHECK(result.log[i].evaluations > result.log[i - 1].evaluations);
}

TEST_CASE("rejected offspring are regenerated") {
  // Genomes with a leading 1 are rejected, like infeasible conformations
  // under the delete policy.
  Problem p = one_max(10);
  auto base = p.evaluate;
  p.evaluate = [base](const Genome& g) -> Fitness {
    if (std::get<BitString>(g).bits[0]) return std::nullopt;
    return base(g);
  };
  auto sample = p.sample;
  p.sample = [sample](Random& rng) {
    auto g = sample(rng);
    std::get<BitString>(g).bits[0] = 0;
    return g;
  };
  auto c = one_max_config(8);
  c.termination = MaxGenerations{20};
  c.mutation.rate = 0.2;
  Random rng(8);
  const auto result = run_generational(c, p, rng);
  CHECK(result.log.size() == 21);
  for (const auto& ind : result.population) CHECK(std::get<BitString>(ind.genome).bits[0] == 0);
}

TEST_CASE("evaluators count calls and parallel batches match serial ones") {
  const auto p = one_max(12);
  Random rng(2);
  Population a;
  for (int i = 0; i < 200; ++i) a.emplace_back(p.sample(rng));
  Population b = a;
  CHECK(evaluate_serial(a, p.evaluate) == evaluate_parallel(b, p.evaluate, 4));
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].fitness == b[i].fitness);

  Evaluator eval(p, 3);
  CHECK(eval(a[0].genome).has_value());
  CHECK(eval.remaining() == 2);
  CHECK_THROWS_AS(eval.evaluate(std::span(a.data(), 3)), ContractViolation);
}
