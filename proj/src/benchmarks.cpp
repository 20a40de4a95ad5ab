#include "evo/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <omp.h>

#include "evo/error.hpp"

namespace evo::bench {

namespace {

using std::numbers::pi;

double sin6(double x) {
  const double s = std::sin(x);
  const double s2 = s * s;
  return s2 * s2 * s2;
}


std::vector<double> grid_point(const BenchmarkFunction& f, std::size_t res, std::size_t flat) {
  std::vector<double> x(f.dimension());
  for (std::size_t d = f.dimension(); d-- > 0;) {
    const std::size_t k = flat % res;
    flat /= res;
    const auto& b = f.bounds[d];
    x[d] = b.lo + b.width() * static_cast<double>(k) / static_cast<double>(res - 1);
  }
  return x;
}

std::size_t grid_size(const BenchmarkFunction& f, std::size_t res) {
  std::size_t total = 1;
  for (std::size_t d = 0; d < f.dimension(); ++d) total *= res;
  return total;
}

std::vector<double> sample_serial(const BenchmarkFunction& f, std::size_t res) {
  std::vector<double> v(grid_size(f, res));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f.evaluate(grid_point(f, res, i));
  return v;
}

std::vector<double> sample_parallel(const BenchmarkFunction& f, std::size_t res, int threads) {
  std::vector<double> v(grid_size(f, res));
  const auto n = static_cast<std::ptrdiff_t>(v.size());
#pragma omp parallel for num_threads(threads) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    v[i] = f.evaluate(grid_point(f, res, static_cast<std::size_t>(i)));
  return v;
}

// Maximizes f along coordinate d inside [lo, hi] by interval bisection on
// the comparison of two interior points.
double bisect_coordinate(const BenchmarkFunction& f, std::vector<double>& x, std::size_t d,
                         double lo, double hi) {
  auto at = [&](double t) {
    x[d] = t;
    return f.evaluate(x);
  };
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(lo)); ++it) {
    const double m = 0.5 * (lo + hi);
    const double h = (hi - lo) * 1e-3;
    if (at(m - h) < at(m + h)) lo = m - h;
    else hi = m + h;
  }
  x[d] = 0.5 * (lo + hi);
  return f.evaluate(x);
}

std::vector<Peak> find_peaks(const BenchmarkFunction& f, std::size_t res,
                             const std::vector<double>& grid) {
  const std::size_t dim = f.dimension();
  std::vector<Peak> peaks;
  const std::size_t total = grid.size();
  for (std::size_t i = 0; i < total; ++i) {
    // Decompose into per-axis indices.
    std::vector<std::size_t> idx(dim);
    std::size_t rest = i;
    for (std::size_t d = dim; d-- > 0;) {
      idx[d] = rest % res;
      rest /= res;
    }
    // Edge points are maxima of the box, not of the function.
    bool is_max = true;
    for (std::size_t d = 0; d < dim; ++d)
      if (idx[d] == 0 || idx[d] + 1 == res) is_max = false;
    // Compare against every neighbour in the 3^dim - 1 stencil; ties are
    // broken toward the lower flat index so plateaus yield one point.
    std::size_t stencil = 1;
    for (std::size_t d = 0; d < dim; ++d) stencil *= 3;
    for (std::size_t s = 0; s < stencil && is_max; ++s) {
      std::size_t code = s, flat = 0;
      bool inside = true, self = true;
      for (std::size_t d = 0; d < dim; ++d) {
        const int off = static_cast<int>(code % 3) - 1;
        code /= 3;
        if (off != 0) self = false;
        const long j = static_cast<long>(idx[d]) + off;
        if (j < 0 || j >= static_cast<long>(res)) {
          inside = false;
          break;
        }
        flat = flat * res + static_cast<std::size_t>(j);
      }
      if (!inside || self) continue;
      if (grid[flat] > grid[i] || (grid[flat] == grid[i] && flat < i)) is_max = false;
    }
    if (!is_max) continue;

    std::vector<double> x = grid_point(f, res, i);
    double value = f.evaluate(x);
    for (int sweep = 0; sweep < 100; ++sweep) {
      const double before = value;
      const auto prev = x;
      for (std::size_t d = 0; d < dim; ++d) {
        const auto& b = f.bounds[d];
        const double cell = b.width() / static_cast<double>(res - 1);
        const double lo = std::max(b.lo, x[d] - 2 * cell);
        const double hi = std::min(b.hi, x[d] + 2 * cell);
        value = bisect_coordinate(f, x, d, lo, hi);
      }
      double moved = 0.0;
      for (std::size_t d = 0; d < dim; ++d) moved = std::max(moved, std::abs(x[d] - prev[d]));
      if (dim == 1 || (moved < 1e-12 && std::abs(value - before) < 1e-15)) break;
    }
    peaks.push_back({std::move(x), value});
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const Peak& a, const Peak& b) { return a.value > b.value; });
  return peaks;
}

void check_oracle_input(const BenchmarkFunction& f, std::size_t resolution) {
  if (f.dimension() == 0 || f.dimension() > 2)
    throw InvalidInput("grid peak oracle refused: dimension " + std::to_string(f.dimension()) +
                       " (supported: 1 or 2)");
  if (resolution < 1000) throw InvalidInput("grid peak oracle needs resolution >= 1000");
}

}  // namespace

BenchmarkFunction equal_maxima() {
  BenchmarkFunction f;
  f.name = "equal-maxima";
  f.bounds = {{0.0, 1.0}};
  f.evaluate = [](std::span<const double> x) { return sin6(5.0 * pi * x[0]); };
  for (double c : {0.1, 0.3, 0.5, 0.7, 0.9}) f.known_peaks.push_back({{c}, 1.0});
  return f;
}

BenchmarkFunction uneven_decreasing_maxima() {
  BenchmarkFunction f;
  f.name = "uneven-decreasing-maxima";
  f.bounds = {{0.0, 1.0}};
  f.evaluate = [](std::span<const double> x) {
    const double envelope = std::exp(-2.0 * std::log(2.0) * std::pow((x[0] - 0.08) / 0.854, 2.0));
    return envelope * sin6(5.0 * pi * (std::pow(x[0], 0.75) - 0.05));
  };
  return f;
}

BenchmarkFunction himmelblau() {
  BenchmarkFunction f;
  f.name = "himmelblau";
  f.bounds = {{-6.0, 6.0}, {-6.0, 6.0}};
  f.evaluate = [](std::span<const double> v) {
    const double x = v[0], y = v[1];
    const double a = x * x + y - 11.0, b = x + y * y - 7.0;
    return -(a * a + b * b);
  };
  f.known_peaks = {
      {{3.0, 2.0}, 0.0},
      {{-2.805118086952745, 3.131312518250573}, 0.0},
      {{-3.779310253377747, -3.283185991286170}, 0.0},
      {{3.584428340330492, -1.848126526964404}, 0.0},
  };
  return f;
}

BenchmarkFunction six_hump_camel() {
  BenchmarkFunction f;
  f.name = "six-hump-camel";
  f.bounds = {{-1.9, 1.9}, {-1.1, 1.1}};
  f.evaluate = [](std::span<const double> v) {
    const double x = v[0], y = v[1];
    const double x2 = x * x, y2 = y * y;
    return -((4.0 - 2.1 * x2 + x2 * x2 / 3.0) * x2 + x * y + (-4.0 + 4.0 * y2) * y2);
  };
  f.known_peaks = {
      {{0.08984201368301331, -0.7126564032704135}, 1.031628453489877},
      {{-0.08984201368301331, 0.7126564032704135}, 1.031628453489877},
  };
  return f;
}

BenchmarkFunction sphere(std::size_t dimension) {
  if (dimension == 0) throw InvalidInput("sphere dimension must be positive");
  BenchmarkFunction f;
  f.name = "sphere";
  f.bounds.assign(dimension, Interval{-5.0, 5.0});
  f.evaluate = [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return -s;
  };
  f.known_peaks = {{std::vector<double>(dimension, 0.0), 0.0}};
  return f;
}

std::vector<BenchmarkFunction> builtin_suite() {
  return {equal_maxima(), uneven_decreasing_maxima(), himmelblau(), six_hump_camel(), sphere()};
}

std::vector<std::string> benchmark_names() {
  std::vector<std::string> names;
  for (const auto& f : builtin_suite()) names.push_back(f.name);
  return names;
}

BenchmarkFunction find_benchmark(std::string_view name, std::size_t dimension) {
  if (name == "sphere") return sphere(dimension == 0 ? 5 : dimension);
  for (auto& f : builtin_suite()) {
    if (f.name != name) continue;
    if (dimension != 0 && dimension != f.dimension())
      throw InvalidInput("benchmark '" + f.name + "' has fixed dimension " +
                         std::to_string(f.dimension()));
    return f;
  }
  throw InvalidInput("unknown benchmark '" + std::string(name) + "'");
}

Problem make_problem(const BenchmarkFunction& f) {
  Problem p;
  p.name = "bench:" + f.name;
  p.sample = [bounds = f.bounds](Random& rng) -> Genome {
    RealVector v{std::vector<double>(bounds.size()), bounds};
    for (std::size_t i = 0; i < bounds.size(); ++i) v.values[i] = rng.uniform(bounds[i].lo, bounds[i].hi);
    return v;
  };
  p.evaluate = [eval = f.evaluate](const Genome& g) -> Fitness {
    const auto* v = std::get_if<RealVector>(&g);
    if (!v) throw InvalidInput("benchmark functions take real-vector genomes");
    return eval(v->values);
  };
  return p;
}

std::vector<Peak> grid_peak_oracle(const BenchmarkFunction& f, std::size_t resolution) {
  check_oracle_input(f, resolution);
  return find_peaks(f, resolution, sample_serial(f, resolution));
}

std::vector<Peak> grid_peak_oracle_parallel(const BenchmarkFunction& f, std::size_t resolution,
                                            int threads) {
  check_oracle_input(f, resolution);
  if (threads <= 0) threads = omp_get_max_threads();
  return find_peaks(f, resolution, sample_parallel(f, resolution, threads));
}

std::vector<Peak> reference_peaks(const BenchmarkFunction& f) {
  if (!f.known_peaks.empty()) return f.known_peaks;
  return grid_peak_oracle(f);
}

}  // namespace evo::bench
