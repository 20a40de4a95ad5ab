#pragma once

/// @file benchmarks.hpp
/// Real-valued test functions in maximization form with known optima, and
/// a grid-search oracle that locates the local maxima of 1D/2D functions.

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evo/evaluate.hpp"
#include "evo/genome.hpp"
#include "evo/multimodal.hpp"

namespace evo::bench {

struct BenchmarkFunction {
  std::string name;
  std::vector<Interval> bounds;
  std::function<double(std::span<const double>)> evaluate;
  /// Peaks a run is scored against. Empty for functions whose peaks are
  /// derived with grid_peak_oracle.
  std::vector<Peak> known_peaks;

  std::size_t dimension() const { return bounds.size(); }
};

BenchmarkFunction equal_maxima();
BenchmarkFunction uneven_decreasing_maxima();
BenchmarkFunction himmelblau();
BenchmarkFunction six_hump_camel();
BenchmarkFunction sphere(std::size_t dimension = 5);

std::vector<BenchmarkFunction> builtin_suite();
/// Names: equal-maxima, uneven-decreasing-maxima, himmelblau,
/// six-hump-camel, sphere.
BenchmarkFunction find_benchmark(std::string_view name, std::size_t dimension = 0);
std::vector<std::string> benchmark_names();

/// Problem whose genomes are real vectors inside the function's box,
/// sampled uniformly.
Problem make_problem(const BenchmarkFunction& f);

/// Local maxima of the function sampled on a `resolution`-per-axis grid,
/// each refined by coordinate-wise interval bisection. Grid points on the
/// boundary of the box are never reported. Strongest first.
std::vector<Peak> grid_peak_oracle(const BenchmarkFunction& f, std::size_t resolution = 1000);
/// Same search with the grid sampled across OpenMP threads.
std::vector<Peak> grid_peak_oracle_parallel(const BenchmarkFunction& f,
                                            std::size_t resolution = 1000, int threads = 0);

/// The function's known peaks, or the oracle's when none are shipped.
std::vector<Peak> reference_peaks(const BenchmarkFunction& f);

}  // namespace evo::bench
