#include "evo/operators.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "evo/error.hpp"

namespace evo {

namespace {

constexpr std::pair<SelectionScheme, std::string_view> kSchemeNames[] = {
    {SelectionScheme::FitnessProportional, "fitness-proportional"},
    {SelectionScheme::RankProportional, "rank-proportional"},
    {SelectionScheme::UniformDeterministic, "uniform-deterministic"},
    {SelectionScheme::UniformStochastic, "uniform-stochastic"},
    {SelectionScheme::BinaryTournament, "binary-tournament"},
    {SelectionScheme::Truncation, "truncation"},
};

// Indices sorted best first; ties keep the lower index first.
std::vector<std::size_t> order_by_fitness(std::span<const double> fitness) {
  std::vector<std::size_t> order(fitness.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return fitness[a] > fitness[b]; });
  return order;
}

std::vector<std::size_t> draw_weighted(const std::vector<double>& weights, std::size_t k,
                                       Random& rng) {
  std::discrete_distribution<std::size_t> dist(weights.begin(), weights.end());
  std::vector<std::size_t> out(k);
  for (auto& i : out) i = dist(rng.engine());
  return out;
}

void require_same_shape(const Genome& a, const Genome& b, std::size_t min_len) {
  if (!same_shape(a, b)) throw InvalidInput("crossover parents differ in variant or length");
  if (genome_size(a) < min_len)
    throw InvalidInput("crossover needs genomes of length >= " + std::to_string(min_len));
}

// Calls f(seq_a, seq_b) with the underlying element containers of two
// genomes of the same variant.
template <class F>
void with_sequences(Genome& a, Genome& b, F&& f) {
  std::visit(
      [&](auto& x) {
        using T = std::decay_t<decltype(x)>;
        auto& y = std::get<T>(b);
        if constexpr (std::is_same_v<T, BitString>) f(x.bits, y.bits);
        else if constexpr (std::is_same_v<T, RealVector>) f(x.values, y.values);
        else f(x.moves, y.moves);
      },
      a);
}

}  // namespace

std::string_view to_string(SelectionScheme s) {
  for (auto [k, v] : kSchemeNames)
    if (k == s) return v;
  return "?";
}

SelectionScheme parse_selection_scheme(std::string_view name) {
  for (auto [k, v] : kSchemeNames)
    if (v == name) return k;
  throw InvalidInput("unknown selection scheme '" + std::string(name) + "'");
}

std::vector<std::size_t> select(std::span<const double> fitness, SelectionScheme scheme,
                                std::size_t k, Random& rng) {
  const std::size_t n = fitness.size();
  if (n == 0) throw InvalidInput("cannot select from an empty population");
  std::vector<std::size_t> out;
  out.reserve(k);

  switch (scheme) {
    case SelectionScheme::FitnessProportional: {
      for (double f : fitness)
        if (!(f > 0.0))
          throw ContractViolation("fitness-proportional selection requires positive fitness");
      std::vector<double> w(fitness.begin(), fitness.end());
      return draw_weighted(w, k, rng);
    }
    case SelectionScheme::RankProportional: {
      const auto order = order_by_fitness(fitness);
      std::vector<double> w(n);
      for (std::size_t r = 0; r < n; ++r) w[order[r]] = static_cast<double>(n - r);
      return draw_weighted(w, k, rng);
    }
    case SelectionScheme::UniformDeterministic:
      for (std::size_t i = 0; i < k; ++i) out.push_back(i % n);
      return out;
    case SelectionScheme::UniformStochastic:
      for (std::size_t i = 0; i < k; ++i) out.push_back(rng.index(n));
      return out;
    case SelectionScheme::BinaryTournament:
      for (std::size_t i = 0; i < k; ++i) {
        std::size_t a = rng.index(n);
        std::size_t b = a;
        if (n > 1) {
          b = rng.index(n - 1);
          if (b >= a) ++b;
        }
        if (b < a) std::swap(a, b);
        out.push_back(fitness[b] > fitness[a] ? b : a);
      }
      return out;
    case SelectionScheme::Truncation: {
      if (k > n)
        throw InvalidInput("truncation cannot select " + std::to_string(k) + " of " +
                           std::to_string(n) + " members");
      auto order = order_by_fitness(fitness);
      order.resize(k);
      return order;
    }
  }
  return out;
}

std::vector<double> fitness_values(const Population& pop) {
  std::vector<double> f(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) f[i] = pop[i].fitness;
  return f;
}

std::vector<std::size_t> select(const Population& pop, SelectionScheme scheme, std::size_t k,
                                Random& rng) {
  const auto f = fitness_values(pop);
  return select(f, scheme, k, rng);
}

std::vector<double> shift_positive(std::span<const double> fitness, double floor) {
  std::vector<double> out(fitness.begin(), fitness.end());
  if (out.empty()) return out;
  const double lo = *std::min_element(out.begin(), out.end());
  for (auto& f : out) f = f - lo + floor;
  return out;
}

std::pair<Genome, Genome> crossover_one_point_at(const Genome& a, const Genome& b,
                                                 std::size_t cut) {
  require_same_shape(a, b, 2);
  if (cut < 1 || cut >= genome_size(a)) throw InvalidInput("one-point cut must be interior");
  Genome c1 = a, c2 = b;
  with_sequences(c1, c2, [&](auto& x, auto& y) {
    std::swap_ranges(x.begin() + static_cast<std::ptrdiff_t>(cut), x.end(),
                     y.begin() + static_cast<std::ptrdiff_t>(cut));
  });
  return {std::move(c1), std::move(c2)};
}

std::pair<Genome, Genome> crossover_one_point(const Genome& a, const Genome& b, Random& rng) {
  require_same_shape(a, b, 2);
  const std::size_t cut = 1 + rng.index(genome_size(a) - 1);
  return crossover_one_point_at(a, b, cut);
}

std::pair<Genome, Genome> crossover_two_point_at(const Genome& a, const Genome& b,
                                                 std::size_t cut1, std::size_t cut2) {
  require_same_shape(a, b, 3);
  const std::size_t len = genome_size(a);
  if (!(cut1 >= 1 && cut1 < cut2 && cut2 < len))
    throw InvalidInput("two-point cuts must be interior, distinct and ordered");
  Genome c1 = a, c2 = b;
  with_sequences(c1, c2, [&](auto& x, auto& y) {
    std::swap_ranges(x.begin() + static_cast<std::ptrdiff_t>(cut1),
                     x.begin() + static_cast<std::ptrdiff_t>(cut2),
                     y.begin() + static_cast<std::ptrdiff_t>(cut1));
  });
  return {std::move(c1), std::move(c2)};
}

std::pair<Genome, Genome> crossover_two_point(const Genome& a, const Genome& b, Random& rng) {
  require_same_shape(a, b, 3);
  const std::size_t interior = genome_size(a) - 1;  // cut positions 1..len-1
  std::size_t c1 = 1 + rng.index(interior);
  std::size_t c2 = 1 + rng.index(interior - 1);
  if (c2 >= c1) ++c2;
  if (c2 < c1) std::swap(c1, c2);
  return crossover_two_point_at(a, b, c1, c2);
}

std::pair<Genome, Genome> crossover_uniform(const Genome& a, const Genome& b, double p_swap,
                                            Random& rng) {
  require_same_shape(a, b, 1);
  if (p_swap < 0.0 || p_swap > 1.0) throw InvalidInput("swap probability outside [0,1]");
  Genome c1 = a, c2 = b;
  with_sequences(c1, c2, [&](auto& x, auto& y) {
    for (std::size_t i = 0; i < x.size(); ++i)
      if (rng.bernoulli(p_swap)) std::swap(x[i], y[i]);
  });
  return {std::move(c1), std::move(c2)};
}

RealVector crossover_blend(const RealVector& a, const RealVector& b, double w) {
  if (a.size() != b.size()) throw InvalidInput("blend crossover dimension mismatch");
  if (w < 0.0 || w > 1.0) throw InvalidInput("blend weight outside [0,1]");
  RealVector child = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    child.values[i] = w * a.values[i] + (1.0 - w) * b.values[i];
  child.clamp_to_bounds();
  return child;
}

BitString mutate_bitflip(const BitString& g, double p, Random& rng) {
  BitString out = g;
  for (auto& b : out.bits)
    if (rng.bernoulli(p)) b = b ? 0 : 1;
  return out;
}

Genome mutate_random(const Genome& g, double p, Random& rng) {
  Genome out = g;
  std::visit(
      [&](auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BitString>) {
          for (auto& b : x.bits)
            if (rng.bernoulli(p)) b = static_cast<std::uint8_t>(rng.index(2));
        } else if constexpr (std::is_same_v<T, RealVector>) {
          for (std::size_t i = 0; i < x.values.size(); ++i)
            if (rng.bernoulli(p)) x.values[i] = rng.uniform(x.bounds[i].lo, x.bounds[i].hi);
        } else {
          for (auto& c : x.moves)
            if (rng.bernoulli(p)) c = x.alphabet[rng.index(x.alphabet.size())];
        }
      },
      out);
  return out;
}

RealVector mutate_delta(const RealVector& g, double p, double step, Random& rng,
                        DeltaSign sign) {
  if (!(step > 0.0)) throw InvalidInput("delta mutation step must be positive");
  RealVector out = g;
  for (auto& v : out.values) {
    if (!rng.bernoulli(p)) continue;
    bool up = sign == DeltaSign::Plus;
    if (sign == DeltaSign::Random) up = rng.index(2) == 1;
    v += up ? step : -step;
  }
  out.clamp_to_bounds();
  return out;
}

RealVector mutate_gaussian(const RealVector& g, double p, double sigma, Random& rng) {
  if (!(sigma > 0.0)) throw InvalidInput("gaussian mutation sigma must be positive");
  RealVector out = g;
  for (auto& v : out.values)
    if (rng.bernoulli(p)) v += rng.normal(sigma);
  out.clamp_to_bounds();
  return out;
}

}  // namespace evo
