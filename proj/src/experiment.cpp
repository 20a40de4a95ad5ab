#include "evo/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "evo/benchmarks.hpp"
#include "evo/hp_lattice.hpp"

namespace evo {

namespace {

using json = nlohmann::ordered_json;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view type) {
  throw ConfigError("key '" + std::string(key) + "': expected " + std::string(type) + ", got '" +
                    std::string(value) + "'");
}

template <class T>
T parse_number(std::string_view key, std::string_view text, std::string_view type) {
  const auto t = trim(text);
  T v{};
  const auto* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (t.empty() || ec != std::errc{} || ptr != end) bad_value(key, text, type);
  return v;
}

template <class T>
void assign(T& field, std::string_view key, std::string_view value) {
  if constexpr (std::is_same_v<T, std::string>) {
    field = trim(value);
  } else if constexpr (std::is_same_v<T, bool>) {
    const auto t = trim(value);
    if (t == "true" || t == "1" || t == "yes") field = true;
    else if (t == "false" || t == "0" || t == "no") field = false;
    else bad_value(key, value, "boolean");
  } else if constexpr (std::is_same_v<T, double>) {
    field = parse_number<double>(key, value, "real number");
  } else if constexpr (std::is_signed_v<T>) {
    field = parse_number<T>(key, value, "integer");
  } else {
    field = parse_number<T>(key, value, "non-negative integer");
  }
}

struct KeyDef {
  ConfigKey info;
  std::function<void(ExperimentSpec&, std::string_view)> set;
  std::function<json(const ExperimentSpec&)> get;
};

template <class T>
KeyDef field(std::string name, std::string help, T ExperimentSpec::*member) {
  KeyDef k;
  k.info = {name, std::move(help)};
  k.set = [member, name](ExperimentSpec& s, std::string_view v) { assign(s.*member, name, v); };
  k.get = [member](const ExperimentSpec& s) { return json(s.*member); };
  return k;
}

const std::vector<KeyDef>& key_table() {
  using S = ExperimentSpec;
  static const std::vector<KeyDef> table = {
      field("algorithm", "ga | de | crowding-de | crowding-de-sl | crowding-de-tl | crowding-de-stl | ease", &S::algorithm),
      field("problem", "bench:<name> | hp:<path>", &S::problem),
      field("seed", "base seed; repeat r uses seed + r", &S::seed),
      field("repeats", "number of runs", &S::repeats),
      field("budget", "maximum fitness evaluations per run", &S::budget),
      field("out", "output directory", &S::out),
      field("threads", "threads for population evaluation", &S::threads),
      field("termination", "evaluations | generations | seconds | min-improvement (budget always applies)", &S::termination),
      field("generations", "generation limit for termination=generations", &S::generations),
      field("seconds", "wall-clock limit for termination=seconds", &S::seconds),
      field("min_improvement", "epsilon for termination=min-improvement", &S::min_improvement),
      field("min_improvement_window", "window (generations) for termination=min-improvement", &S::min_improvement_window),
      field("population_size", "mu", &S::population_size),
      field("offspring_size", "lambda (ga, ease)", &S::offspring_size),
      field("breeding_size", "rho: 1 = mutation only, 2 = two-parent crossover", &S::breeding_size),
      field("overlapping", "true = (mu+lambda), false = (mu,lambda)", &S::overlapping),
      field("parent_selection", "fitness-proportional | rank-proportional | uniform-deterministic | uniform-stochastic | binary-tournament | truncation", &S::parent_selection),
      field("survival_selection", "selection scheme for survivors", &S::survival_selection),
      field("crossover", "auto | none | one-point | two-point | uniform | blend (auto: blend for real vectors, one-point otherwise)", &S::crossover),
      field("crossover_rate", "probability that a mating pair is recombined", &S::crossover_rate),
      field("swap_probability", "per-gene swap probability of uniform crossover", &S::swap_probability),
      field("blend_weight", "weight w of blend crossover", &S::blend_weight),
      field("mutation", "auto | none | bitflip | random | delta | gaussian (auto: gaussian for real vectors, random otherwise)", &S::mutation),
      field("mutation_rate", "per-gene mutation probability", &S::mutation_rate),
      field("mutation_step", "step of delta mutation", &S::mutation_step),
      field("mutation_sigma", "standard deviation of gaussian mutation", &S::mutation_sigma),
      field("fitness_sharing", "ga: select parents on shared fitness", &S::fitness_sharing),
      field("scale_factor", "DE difference-vector scale F", &S::scale_factor),
      field("cr", "DE binomial recombination rate CR", &S::cr),
      field("bound_policy", "reflect | clamp", &S::bound_policy),
      field("metric", "auto | euclidean | hamming", &S::metric),
      field("sharing_radius", "fitness-sharing radius", &S::sharing_radius),
      field("sharing_alpha", "fitness-sharing exponent", &S::sharing_alpha),
      field("tl_discount", "temporal-locality discount of the neighbour's delta, in [0,1)", &S::tl_discount),
      field("sl_floor", "spatial-locality roulette floor as a fraction of the largest distance", &S::sl_floor),
      field("species_radius", "ease: minimum distance between species seeds", &S::species_radius),
      field("explosion_copies", "ease: mutated copies per seed and generation", &S::explosion_copies),
      field("stage_switch", "ease: budget fraction spent exploring, in (0,1]", &S::stage_switch),
      field("injection", "ease: random individuals injected per exploration generation", &S::injection),
      field("dimension", "benchmark dimension (0 = function default)", &S::dimension),
      field("energy_scheme", "HP contact energies: 1, 2 or 3", &S::energy_scheme),
      field("feasibility", "delete | penalty", &S::feasibility),
      field("penalty", "energy penalty per collision (negative: 2*|E(H,H)|)", &S::penalty),
      field("encoding", "relative | absolute", &S::encoding),
      field("sequence_index", "which sequence of the HP file to fold", &S::sequence_index),
      field("max_retries", "resampling attempts for infeasible individuals", &S::max_retries),
      field("value_tol", "peak certification: fitness tolerance", &S::value_tol),
      field("dist_tol", "peak certification: distance tolerance", &S::dist_tol),
  };
  return table;
}

const KeyDef& find_key(std::string_view key) {
  for (const auto& k : key_table())
    if (k.info.name == key) return k;
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

const std::vector<std::string> kAlgorithms = {"ga",          "de",
                                              "crowding-de", "crowding-de-sl",
                                              "crowding-de-tl", "crowding-de-stl",
                                              "ease"};

bool is_hp(const ExperimentSpec& s) { return s.problem.rfind("hp:", 0) == 0; }
bool is_bench(const ExperimentSpec& s) { return s.problem.rfind("bench:", 0) == 0; }

template <class F>
void checked(std::string_view key, F&& f) {
  try {
    f();
  } catch (const InvalidInput& e) {
    throw ConfigError("key '" + std::string(key) + "': " + e.what());
  }
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> out;
    for (const auto& k : key_table()) out.push_back(k.info);
    return out;
  }();
  return keys;
}

std::string describe_config_keys() {
  const ExperimentSpec defaults;
  std::ostringstream os;
  for (const auto& k : key_table()) {
    const json v = k.get(defaults);
    const std::string shown = v.is_string() ? v.get<std::string>() : v.dump();
    os << "  " << k.info.name << " = " << shown << "\n      " << k.info.help << '\n';
  }
  return os.str();
}

void set_config_value(ExperimentSpec& spec, std::string_view key, std::string_view value) {
  find_key(trim(key)).set(spec, value);
}

void apply_config_text(ExperimentSpec& spec, std::string_view text) {
  const auto t = trim(text);
  if (!t.empty() && t.front() == '{') {
    json doc;
    try {
      doc = json::parse(t);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("malformed JSON config: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("JSON config must be an object");
    for (const auto& [key, value] : doc.items()) {
      std::string v;
      if (value.is_string()) v = value.get<std::string>();
      else if (value.is_boolean()) v = value.get<bool>() ? "true" : "false";
      else if (value.is_number()) v = value.dump();
      else throw ConfigError("key '" + key + "': expected a scalar value");
      set_config_value(spec, key, v);
    }
    return;
  }

  std::istringstream in{std::string(text)};
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
    try {
      set_config_value(spec, content.substr(0, eq), content.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void validate_spec(ExperimentSpec& s) {
  if (std::find(kAlgorithms.begin(), kAlgorithms.end(), s.algorithm) == kAlgorithms.end())
    throw ConfigError("key 'algorithm': unknown algorithm '" + s.algorithm + "'");
  if (s.repeats < 1) throw ConfigError("key 'repeats': must be >= 1");
  if (s.budget < 1) throw ConfigError("key 'budget': must be >= 1");
  if (s.threads < 1) throw ConfigError("key 'threads': must be >= 1");

  const std::vector<std::string> terms = {"evaluations", "generations", "seconds", "min-improvement"};
  if (std::find(terms.begin(), terms.end(), s.termination) == terms.end())
    throw ConfigError("key 'termination': unknown condition '" + s.termination + "'");

  checked("parent_selection", [&] { parse_selection_scheme(s.parent_selection); });
  checked("survival_selection", [&] { parse_selection_scheme(s.survival_selection); });
  if (s.crossover != "auto") checked("crossover", [&] { parse_crossover_kind(s.crossover); });
  if (s.mutation != "auto") checked("mutation", [&] { parse_mutation_kind(s.mutation); });
  checked("bound_policy", [&] { parse_bound_policy(s.bound_policy); });
  if (s.metric != "auto" && s.metric != "euclidean" && s.metric != "hamming")
    throw ConfigError("key 'metric': expected auto, euclidean or hamming");

  if (is_bench(s)) {
    checked("problem", [&] { bench::find_benchmark(s.problem.substr(6), s.dimension); });
    if (s.metric == "hamming") throw ConfigError("key 'metric': benchmarks use euclidean distance");
    if (s.mutation == "bitflip") throw ConfigError("key 'mutation': bitflip needs bit-string genomes");
  } else if (is_hp(s)) {
    const auto path = s.problem.substr(3);
    std::vector<hp::HPSequence> seqs;
    checked("problem", [&] { seqs = hp::read_sequence_file(path); });
    if (seqs.empty()) throw ConfigError("key 'problem': no sequence in '" + path + "'");
    if (s.sequence_index >= seqs.size())
      throw ConfigError("key 'sequence_index': file has only " + std::to_string(seqs.size()) +
                        " sequences");
    if (s.energy_scheme < 1 || s.energy_scheme > 3)
      throw ConfigError("key 'energy_scheme': must be 1, 2 or 3");
    if (s.feasibility != "delete" && s.feasibility != "penalty")
      throw ConfigError("key 'feasibility': expected delete or penalty");
    if (s.encoding != "relative" && s.encoding != "absolute")
      throw ConfigError("key 'encoding': expected relative or absolute");
    if (s.metric == "euclidean") throw ConfigError("key 'metric': HP move strings use hamming distance");
    if (s.crossover == "blend") throw ConfigError("key 'crossover': blend needs real-vector genomes");
    if (s.mutation == "delta" || s.mutation == "gaussian" || s.mutation == "bitflip")
      throw ConfigError("key 'mutation': " + s.mutation + " is not defined for move strings");
    if (s.algorithm == "crowding-de-tl" || s.algorithm == "crowding-de-stl") {
      const std::string degraded = s.algorithm == "crowding-de-tl" ? "crowding-de" : "crowding-de-sl";
      s.warnings.push_back("temporal locality needs real-vector genomes; " + s.algorithm +
                           " runs as " + degraded + " on HP problems");
      s.algorithm = degraded;
    }
  } else {
    throw ConfigError("key 'problem': expected bench:<name> or hp:<path>, got '" + s.problem + "'");
  }

  const bool de_family = s.algorithm != "ga" && s.algorithm != "ease";
  if (de_family && s.population_size < 4)
    throw ConfigError("key 'population_size': differential evolution needs at least 4");
}

ExperimentSpec parse_config(std::string_view text) {
  ExperimentSpec spec;
  apply_config_text(spec, text);
  validate_spec(spec);
  return spec;
}

std::string spec_to_json(const ExperimentSpec& spec) {
  json doc = json::object();
  for (const auto& k : key_table()) doc[k.info.name] = k.get(spec);
  return doc.dump(2);
}

namespace {

struct ResolvedProblem {
  Problem problem;
  std::vector<Peak> peaks;
  bool hp = false;
  hp::HPSequence sequence;
  hp::EnergyScheme scheme;
  hp::Encoding encoding = hp::Encoding::Relative;
};

ResolvedProblem resolve_problem(const ExperimentSpec& s) {
  ResolvedProblem r;
  if (is_bench(s)) {
    const auto f = bench::find_benchmark(s.problem.substr(6), s.dimension);
    r.problem = bench::make_problem(f);
    r.peaks = bench::reference_peaks(f);
    return r;
  }
  r.hp = true;
  r.sequence = hp::read_sequence_file(s.problem.substr(3)).at(s.sequence_index);
  r.scheme = hp::EnergyScheme::preset(s.energy_scheme);
  r.encoding = s.encoding == "absolute" ? hp::Encoding::Absolute : hp::Encoding::Relative;
  hp::FeasibilityPolicy policy = hp::DeletePolicy{};
  if (s.feasibility == "penalty")
    policy = hp::PenaltyPolicy{s.penalty >= 0.0 ? s.penalty : 2.0 * std::abs(r.scheme.e_hh)};
  r.problem = hp::make_problem(r.sequence, r.scheme, policy, r.encoding, s.max_retries);
  return r;
}

RunConfig make_run_config(const ExperimentSpec& s, bool real_genome, std::uint64_t seed) {
  RunConfig c;
  c.population_size = s.population_size;
  c.offspring_size = s.offspring_size;
  c.breeding_size = s.breeding_size;
  c.overlapping = s.overlapping;
  c.parent_scheme = parse_selection_scheme(s.parent_selection);
  c.survival_scheme = parse_selection_scheme(s.survival_selection);
  c.crossover.kind = s.crossover == "auto"
                         ? (real_genome ? CrossoverKind::Blend : CrossoverKind::OnePoint)
                         : parse_crossover_kind(s.crossover);
  c.crossover.rate = s.crossover_rate;
  c.crossover.swap_probability = s.swap_probability;
  c.crossover.blend_weight = s.blend_weight;
  c.mutation.kind = s.mutation == "auto"
                        ? (real_genome ? MutationKind::Gaussian : MutationKind::Random)
                        : parse_mutation_kind(s.mutation);
  c.mutation.rate = s.mutation_rate;
  c.mutation.step = s.mutation_step;
  c.mutation.sigma = s.mutation_sigma;
  if (s.termination == "evaluations") c.termination = MaxEvaluations{s.budget};
  else if (s.termination == "generations") c.termination = MaxGenerations{s.generations};
  else if (s.termination == "seconds") c.termination = MaxWallClockSeconds{s.seconds};
  else c.termination = MinImprovement{s.min_improvement, s.min_improvement_window};
  c.max_evaluations = s.budget;
  c.seed = seed;
  c.threads = s.threads;
  c.max_retries = s.max_retries;
  if (s.fitness_sharing) {
    c.sharing_radius = s.sharing_radius;
    c.sharing_alpha = s.sharing_alpha;
  }
  return c;
}

json genome_json(const Genome& g) {
  if (const auto* r = std::get_if<RealVector>(&g)) return json(r->values);
  return json(genome_to_string(g));
}

}  // namespace

int run_experiment(const ExperimentSpec& spec, std::ostream& err) {
  try {
    const auto rp = resolve_problem(spec);
    namespace fs = std::filesystem;
    fs::create_directories(spec.out);
    const fs::path dir(spec.out);

    std::ofstream csv(dir / "runs.csv", std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write " + (dir / "runs.csv").string());
    const bool with_peaks = !rp.peaks.empty();
    csv << "run,generation,evaluations,best_fitness,mean_fitness" << (with_peaks ? ",peaks_found" : "")
        << '\n';

    const bool real_genome = !rp.hp;
    DEConfig de;
    de.scale_factor = spec.scale_factor;
    de.crossover_rate = spec.cr;
    de.bound_policy = parse_bound_policy(spec.bound_policy);
    NichingConfig niche;
    niche.sharing_radius = spec.sharing_radius;
    niche.sharing_alpha = spec.sharing_alpha;
    niche.tl_discount = spec.tl_discount;
    niche.sl_floor = spec.sl_floor;
    niche.metric = spec.metric == "auto"
                       ? (real_genome ? DistanceMetric::Euclidean : DistanceMetric::Hamming)
                       : (spec.metric == "euclidean" ? DistanceMetric::Euclidean
                                                     : DistanceMetric::Hamming);
    SpeciesConfig species;
    species.species_radius = spec.species_radius;
    species.explosion_copies = spec.explosion_copies;
    species.stage_switch_fraction = spec.stage_switch;
    species.random_injection_count = spec.injection;

    json summary = json::object();
    summary["algorithm"] = spec.algorithm;
    summary["problem"] = spec.problem;
    if (!spec.warnings.empty()) summary["warnings"] = spec.warnings;
    json runs = json::array();
    json timing = json::array();

    for (std::size_t r = 0; r < spec.repeats; ++r) {
      const std::uint64_t seed = spec.seed + r;
      de.seed = seed;
      const auto loop = make_run_config(spec, real_genome, seed);
      Random rng(seed);
      GenerationHook hook;
      if (with_peaks)
        hook = [&](const Population& pop, GenerationStats& st) {
          st.peaks_found = peak_metrics(pop, rp.peaks, spec.value_tol, spec.dist_tol).found;
        };

      const auto t0 = std::chrono::steady_clock::now();
      RunResult result;
      json seeds_json;
      if (spec.algorithm == "ga") {
        result = run_generational(loop, rp.problem, rng, hook);
      } else if (spec.algorithm == "de") {
        result = run_de(loop, de, rp.problem, rng, hook);
      } else if (spec.algorithm == "ease") {
        auto e = ease_run(loop, species, niche.metric, rp.problem, rng, hook);
        seeds_json = json::array();
        for (const auto& sd : e.seeds)
          seeds_json.push_back({{"genome", genome_json(sd.genome)}, {"fitness", sd.fitness}});
        result = std::move(e.run);
      } else {
        CrowdingVariant v = CrowdingVariant::Plain;
        if (spec.algorithm == "crowding-de-sl") v = CrowdingVariant::SL;
        else if (spec.algorithm == "crowding-de-tl") v = CrowdingVariant::TL;
        else if (spec.algorithm == "crowding-de-stl") v = CrowdingVariant::STL;
        result = run_crowding_de(loop, de, niche, v, rp.problem, rng, hook);
      }
      const double wall =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

      for (const auto& st : result.log) {
        csv << r << ',' << st.generation << ',' << st.evaluations << ','
            << format_double(st.best_fitness) << ',' << format_double(st.mean_fitness);
        if (with_peaks) csv << ',' << st.peaks_found.value_or(0);
        csv << '\n';
      }

      const auto& pop = result.population;
      const auto& best = pop[best_index(pop)];
      json run = json::object();
      run["run"] = r;
      run["seed"] = seed;
      run["generations"] = result.log.empty() ? 0 : result.log.back().generation;
      run["evaluations"] = result.evaluations;
      run["best_fitness"] = best.fitness;
      run["best_genome"] = genome_json(best.genome);
      if (with_peaks) {
        const auto pr = peak_metrics(pop, rp.peaks, spec.value_tol, spec.dist_tol);
        run["peaks_found"] = pr.found;
        run["known_peaks"] = rp.peaks.size();
        run["peak_ratio"] = pr.ratio;
      }
      if (!seeds_json.is_null()) run["seeds"] = seeds_json;
      if (rp.hp) {
        const auto& moves = std::get<MoveString>(best.genome).moves;
        const auto conf = hp::decode(moves, rp.encoding);
        const double e = hp::energy(conf, rp.sequence, rp.scheme);
        run["best_energy"] = e;
        run["feasible"] = conf.feasible;
        std::ofstream cf(dir / ("conformation_run" + std::to_string(r) + ".txt"), std::ios::binary);
        if (!conf.feasible) cf << "# infeasible: " << conf.collision_count << " collisions\n";
        if (rp.encoding == hp::Encoding::Absolute) cf << "# absolute encoding\n";
        hp::write_conformation(cf, moves, conf, rp.sequence, e);
      }
      runs.push_back(run);
      timing.push_back({{"run", r}, {"wall_time_seconds", wall}});
    }
    summary["runs"] = runs;

    std::ofstream(dir / "summary.json", std::ios::binary) << summary.dump(2) << '\n';
    std::ofstream(dir / "timing.json", std::ios::binary) << timing.dump(2) << '\n';
    std::ofstream(dir / "config.json", std::ios::binary) << spec_to_json(spec) << '\n';
    if (!csv) throw std::runtime_error("error while writing runs.csv");
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace evo
