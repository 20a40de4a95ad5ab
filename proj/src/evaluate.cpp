#include "evo/evaluate.hpp"

#include <cmath>
#include <string>

#include <omp.h>

#include "evo/error.hpp"

namespace evo {

namespace {

bool install(Individual& ind, const Fitness& f) {
  if (!f) {
    ind.evaluated = false;
    return false;
  }
  if (!std::isfinite(*f)) throw ContractViolation("fitness function returned a non-finite value");
  ind.fitness = *f;
  ind.evaluated = true;
  return true;
}

}  // namespace

std::vector<char> evaluate_serial(std::span<Individual> batch, const FitnessFn& fitness) {
  std::vector<char> ok(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) ok[i] = install(batch[i], fitness(batch[i].genome));
  return ok;
}

std::vector<char> evaluate_parallel(std::span<Individual> batch, const FitnessFn& fitness,
                                    int threads) {
  const auto n = static_cast<std::ptrdiff_t>(batch.size());
  std::vector<Fitness> values(batch.size());
#pragma omp parallel for num_threads(threads) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) values[i] = fitness(batch[i].genome);

  std::vector<char> ok(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) ok[i] = install(batch[i], values[i]);
  return ok;
}

Fitness Evaluator::operator()(const Genome& g) {
  if (count_ >= budget_) throw ContractViolation("evaluation budget exhausted");
  ++count_;
  auto f = problem_->evaluate(g);
  if (f && !std::isfinite(*f)) throw ContractViolation("fitness function returned a non-finite value");
  return f;
}

std::vector<char> Evaluator::evaluate(std::span<Individual> batch) {
  if (batch.size() > remaining()) throw ContractViolation("batch exceeds evaluation budget");
  count_ += batch.size();
  if (threads_ > 1 && batch.size() > 1) return evaluate_parallel(batch, problem_->evaluate, threads_);
  return evaluate_serial(batch, problem_->evaluate);
}

Population initialize_population(std::size_t size, Evaluator& eval, Random& rng,
                                 std::size_t max_retries) {
  if (size == 0) throw InvalidInput("population size must be positive");
  Population pop;
  pop.reserve(size);
  for (std::size_t i = 0; i < size; ++i) pop.emplace_back(eval.problem().sample(rng));
  if (eval.remaining() < size) throw InvalidConfig("budget smaller than the initial population");
  auto ok = eval.evaluate(pop);
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t attempt = 0; !ok[i]; ++attempt) {
      if (attempt >= max_retries || eval.remaining() == 0)
        throw InitializationFailure("could not sample a feasible individual for slot " +
                                    std::to_string(i));
      pop[i] = Individual(eval.problem().sample(rng));
      ok[i] = eval.evaluate(std::span(&pop[i], 1))[0];
    }
  }
  return pop;
}

}  // namespace evo
