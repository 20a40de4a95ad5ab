// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance                 run every criterion
//   acceptance --criterion N   run criterion N only (exit status 1 on FAIL)

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evo/benchmarks.hpp"
#include "evo/de.hpp"
#include "evo/experiment.hpp"
#include "evo/hp_lattice.hpp"
#include "evo/multimodal.hpp"
#include "evo/operators.hpp"

using namespace evo;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) { return format_double(std::round(v * 10000.0) / 10000.0); }

// 1. Worked examples: binary decoding and blend crossover.
Outcome exact_examples() {
  std::vector<std::string> bad;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) bad.push_back(what);
  };
  expect(decode_binary_integer(BitString::from_text("10011")) == 19, "10011 -> 19");
  expect(decode_binary_integer(BitString::from_text("1101010")) == 106, "1101010 -> 106");
  expect(decode_binary_integer(BitString::from_text("00011")) == 3, "00011 -> 3");
  expect(decode_binary_integer(BitString::from_text("0101010")) == 42, "0101010 -> 42");
  const std::array<std::size_t, 2> widths{5, 5};
  expect(decode_binary_vector(BitString::from_text("1001111110"), widths) ==
             std::vector<std::uint64_t>{19, 30},
         "1001111110 -> (19, 30)");
  RealVector a{{1, 2, 3}, std::vector<Interval>(3, Interval{0, 10})};
  RealVector b{{4, 5, 6}, a.bounds};
  expect(crossover_blend(a, b).values == std::vector<double>{2.5, 3.5, 4.5}, "blend -> [2.5 3.5 4.5]");
  if (bad.empty()) return {true, "6/6 examples exact"};
  std::string d = "mismatch:";
  for (const auto& s : bad) d += " [" + s + "]";
  return {false, d};
}

// 2. Crowding DE on every length-8 HP sequence against the exhaustive oracle.
Outcome hp_oracle_equivalence() {
  const auto scheme = hp::EnergyScheme::scheme1();
  RunConfig loop;
  loop.population_size = 50;
  loop.termination = MaxEvaluations{5000};
  loop.max_evaluations = 5000;
  std::size_t hits = 0, total = 0, below = 0;
  for (unsigned code = 0; code < 256; ++code) {
    std::string text(8, 'P');
    for (int i = 0; i < 8; ++i)
      if (code >> (7 - i) & 1) text[i] = 'H';
    const auto seq = hp::HPSequence::parse(text);
    const double oracle = hp::enumerate_optimal(seq, scheme).min_energy;
    const auto problem = hp::make_problem(seq, scheme, hp::DeletePolicy{});
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      Random rng(seed);
      DEConfig de;
      de.seed = seed;
      const auto r = run_crowding_de(loop, de, NichingConfig{.metric = DistanceMetric::Hamming},
                                     CrowdingVariant::Plain, problem, rng);
      const auto& best = r.population[best_index(r.population)];
      const auto conf = hp::decode_relative(std::get<MoveString>(best.genome).moves);
      const double e = hp::energy(conf, seq, scheme);
      ++total;
      if (!conf.feasible || e < oracle - 1e-9) ++below;
      if (std::abs(e - oracle) < 1e-9) ++hits;
    }
  }
  const double rate = double(hits) / double(total);
  std::string d = std::to_string(hits) + "/" + std::to_string(total) + " runs reach the oracle minimum (" +
                  fmt(100 * rate) + "%, need >= 95%); " + std::to_string(below) +
                  " runs below the oracle or infeasible";
  return {rate >= 0.95 && below == 0, d};
}

// 3. Energy invariance under translation and the 24 cube rotations.
Outcome energy_invariance() {
  std::vector<std::array<int, 9>> rots;
  const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (const auto& p : perms)
    for (int signs = 0; signs < 8; ++signs) {
      std::array<int, 9> m{};
      for (int r = 0; r < 3; ++r) m[3 * r + p[r]] = (signs >> r & 1) ? -1 : 1;
      const int det = m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
                      m[2] * (m[3] * m[7] - m[4] * m[6]);
      if (det == 1) rots.push_back(m);
    }
  if (rots.size() != 24) return {false, "rotation group has " + std::to_string(rots.size()) + " elements"};

  Random rng(2024);
  const auto scheme = hp::EnergyScheme::scheme1();
  std::size_t failures = 0, checks = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 3 + rng.index(18);
    std::string text(n, 'H');
    for (auto& c : text) c = rng.index(2) ? 'H' : 'P';
    const auto seq = hp::HPSequence::parse(text);
    const auto conf = hp::decode_relative(hp::random_feasible_genome(n, rng, 1000000));
    const double e = hp::energy(conf, seq, scheme);
    const hp::Vec3 shift{int(rng.index(201)) - 100, int(rng.index(201)) - 100, int(rng.index(201)) - 100};
    for (const auto& m : rots) {
      hp::Conformation moved = conf;
      for (auto& p : moved.coords)
        p = hp::Vec3{m[0] * p.x + m[1] * p.y + m[2] * p.z, m[3] * p.x + m[4] * p.y + m[5] * p.z,
                     m[6] * p.x + m[7] * p.y + m[8] * p.z} + shift;
      ++checks;
      if (hp::energy(moved, seq, scheme) != e) ++failures;
    }
  }
  return {failures == 0, std::to_string(checks - failures) + "/" + std::to_string(checks) +
                             " transformed conformations keep their energy exactly"};
}

std::size_t peaks_found(const Population& pop, const std::vector<Peak>& peaks) {
  return peak_metrics(pop, peaks, 1e-4, 0.01).found;
}

// 4. Peak recovery on equal maxima.
Outcome peak_recovery() {
  const auto f = bench::equal_maxima();
  const auto oracle = bench::grid_peak_oracle(f);
  if (oracle.size() != 5) return {false, "oracle finds " + std::to_string(oracle.size()) + " peaks"};
  const auto peaks = f.known_peaks;
  const auto problem = bench::make_problem(f);

  RunConfig loop;
  loop.population_size = 50;
  loop.termination = MaxEvaluations{10000};
  loop.max_evaluations = 10000;

  RunConfig ease_cfg = loop;
  ease_cfg.offspring_size = 50;
  ease_cfg.crossover.kind = CrossoverKind::Blend;
  ease_cfg.mutation.kind = MutationKind::Gaussian;
  ease_cfg.mutation.rate = 1.0;
  ease_cfg.mutation.sigma = 0.01;

  int stl_ok = 0, de_collapsed = 0, ease_ok = 0;
  std::string stl_counts, de_counts, ease_counts;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    DEConfig de;
    de.seed = seed;
    Random r1(seed), r2(seed), r3(seed);
    const auto stl = run_crowding_de(loop, de, NichingConfig{}, CrowdingVariant::STL, problem, r1);
    const auto plain = run_de(loop, de, problem, r2);
    const auto ease = ease_run(ease_cfg, SpeciesConfig{}, DistanceMetric::Euclidean, problem, r3);
    const auto a = peaks_found(stl.population, peaks), b = peaks_found(plain.population, peaks),
               c = peaks_found(ease.run.population, peaks);
    stl_ok += a == 5;
    de_collapsed += b <= 2;
    ease_ok += c >= 4;
    stl_counts += std::to_string(a);
    de_counts += std::to_string(b);
    ease_counts += std::to_string(c);
  }
  const bool pass = stl_ok >= 18 && de_collapsed >= 18 && ease_ok >= 16;
  return {pass, "crowding-de-stl 5/5 in " + std::to_string(stl_ok) + "/20 (need 18) [" + stl_counts +
                    "]; plain de <= 2 in " + std::to_string(de_collapsed) + "/20 (need 18) [" + de_counts +
                    "]; ease >= 4 in " + std::to_string(ease_ok) + "/20 (need 16) [" + ease_counts + "]"};
}

// 5. DE on the 5-d sphere.
Outcome de_convergence() {
  const auto problem = bench::make_problem(bench::sphere(5));
  RunConfig loop;
  loop.population_size = 30;
  loop.termination = MaxEvaluations{30000};
  loop.max_evaluations = 30000;
  int solved = 0;
  double worst = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Random rng(seed);
    DEConfig de;
    de.seed = seed;
    const auto r = run_de(loop, de, problem, rng);
    const double err = -r.population[best_index(r.population)].fitness;
    worst = std::max(worst, err);
    solved += err < 1e-6 && r.evaluations <= 30000;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", worst);
  return {solved >= 19, std::to_string(solved) + "/20 seeds reach < 1e-6 (need 19); worst " + buf};
}

// 6. Selection frequencies against their specified probabilities.
Outcome selection_statistics() {
  const int n = 100000;
  Random rng(6);
  double worst = 0;

  const std::vector<double> fit{1, 2, 3, 4, 10};
  const double sum = 20;
  std::vector<int> counts(fit.size(), 0);
  for (auto i : select(fit, SelectionScheme::FitnessProportional, n, rng)) ++counts[i];
  for (std::size_t i = 0; i < fit.size(); ++i)
    worst = std::max(worst, std::abs(counts[i] / double(n) - fit[i] / sum));

  Population pop;
  for (double x : {0.0, 1.0, 3.0, 4.0, -2.0, 7.5})
    pop.emplace_back(RealVector{{x}, {Interval{-10, 10}}}, 1.0);
  const auto w = sl_weights(pop, 0, DistanceMetric::Euclidean, 0.05);
  double wsum = 0;
  for (double x : w) wsum += x;
  std::vector<int> first(pop.size(), 0);
  for (int t = 0; t < n; ++t) ++first[sl_pick_indices(pop, 0, DistanceMetric::Euclidean, 0.05, rng)[0]];
  for (std::size_t j = 0; j < pop.size(); ++j) worst = std::max(worst, std::abs(first[j] / double(n) - w[j] / wsum));

  return {worst <= 0.01, "largest frequency deviation " + fmt(worst) + " over 1e5 draws (limit 0.01)"};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// 7. Same seed, same bytes, for every algorithm on every problem.
Outcome determinism() {
  namespace fs = std::filesystem;
  const auto root = fs::temp_directory_path() / "evo_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  std::ofstream(root / "seq.txt") << "HPHPPHHPHPPHPHHPPHPH\n";

  std::vector<std::string> problems;
  for (const auto& name : bench::benchmark_names()) problems.push_back("bench:" + name);
  problems.push_back("hp:" + (root / "seq.txt").string());
  const char* algorithms[] = {"ga", "de", "crowding-de", "crowding-de-sl", "crowding-de-tl",
                              "crowding-de-stl", "ease"};
  std::size_t pairs = 0;
  std::vector<std::string> differ;
  for (const auto& problem : problems)
    for (const char* algo : algorithms) {
      std::string outputs[2];
      for (int k = 0; k < 2; ++k) {
        const auto dir = root / ("run" + std::to_string(k));
        fs::remove_all(dir);
        auto spec = parse_config(std::string("algorithm=") + algo + "\nproblem=" + problem +
                                 "\nbudget=2000\nrepeats=2\nseed=11\nout=" + dir.string());
        std::ostringstream err;
        if (run_experiment(spec, err) != 0) return {false, std::string(algo) + " on " + problem + ": " + err.str()};
        outputs[k] = slurp(dir / "runs.csv") + slurp(dir / "summary.json");
      }
      ++pairs;
      if (outputs[0] != outputs[1]) differ.push_back(std::string(algo) + " on " + problem);
    }
  fs::remove_all(root);
  std::string d = std::to_string(pairs - differ.size()) + "/" + std::to_string(pairs) +
                  " algorithm/problem pairs byte-identical across two invocations";
  for (const auto& s : differ) d += "; differs: " + s;
  return {differ.empty(), d};
}

// 8. Best fitness never decreases under DE or any crowding variant.
Outcome monotone_best() {
  const auto suite = bench::builtin_suite();
  Random meta(8);
  int violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto& f = suite[meta.index(suite.size())];
    const auto problem = bench::make_problem(f);
    DEConfig de;
    de.scale_factor = meta.uniform(0.05, 2.0);
    de.crossover_rate = meta.uniform();
    de.bound_policy = meta.index(2) ? BoundPolicy::Reflect : BoundPolicy::Clamp;
    NichingConfig niche;
    niche.tl_discount = meta.uniform(0.0, 0.99);
    niche.sl_floor = meta.uniform(0.001, 0.5);
    const std::size_t kind = meta.index(5);
    const std::size_t size = 4 + meta.index(40);
    Random rng(1000 + trial);
    Evaluator eval(problem);
    auto pop = initialize_population(size, eval, rng);
    for (int g = 0; g < 25; ++g) {
      const double before = pop[best_index(pop)].fitness;
      Population next = kind == 0 ? de_step(pop, de, eval, rng)
                                  : crowding_de_step(pop, de, niche, CrowdingVariant(kind - 1), eval, rng);
      if (next.size() != pop.size() || next[best_index(next)].fitness < before) {
        ++violations;
        break;
      }
      pop = std::move(next);
    }
  }
  return {violations == 0, std::to_string(100 - violations) + "/100 random configurations keep best fitness monotone"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-8)")->check(CLI::Range(1, 8));
  CLI11_PARSE(app, argc, argv);

  const std::map<int, std::pair<const char*, std::function<Outcome()>>> criteria{
      {1, {"worked examples", exact_examples}},
      {2, {"HP oracle equivalence", hp_oracle_equivalence}},
      {3, {"energy invariance", energy_invariance}},
      {4, {"multimodal peak recovery", peak_recovery}},
      {5, {"DE convergence", de_convergence}},
      {6, {"selection statistics", selection_statistics}},
      {7, {"determinism", determinism}},
      {8, {"monotone best", monotone_best}},
  };
  bool all = true;
  for (const auto& [id, entry] : criteria) {
    if (only != 0 && id != only) continue;
    Outcome o;
    try {
      o = entry.second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d (%s): %s: %s\n", id, entry.first, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
