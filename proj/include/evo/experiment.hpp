#pragma once

/// @file experiment.hpp
/// Config-driven experiment runner: parses flat key=value or JSON configs,
/// runs an algorithm on a benchmark or HP problem for several seeds, and
/// writes a per-generation CSV log plus a JSON summary.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "evo/de.hpp"
#include "evo/error.hpp"
#include "evo/ea.hpp"
#include "evo/multimodal.hpp"

namespace evo {

class ConfigError : public InvalidConfig {
 public:
  using InvalidConfig::InvalidConfig;
};

struct ExperimentSpec {
  std::string algorithm = "de";
  std::string problem = "bench:sphere";
  std::uint64_t seed = 1;
  std::size_t repeats = 1;
  std::uint64_t budget = 10000;
  std::string out = "out";
  int threads = 1;

  std::string termination = "evaluations";
  std::uint64_t generations = 100;
  double seconds = 60.0;
  double min_improvement = 1e-6;
  std::uint64_t min_improvement_window = 10;

  // Generational loop (ga, ease).
  std::size_t population_size = 50;
  std::size_t offspring_size = 50;
  std::size_t breeding_size = 2;
  bool overlapping = true;
  std::string parent_selection = "binary-tournament";
  std::string survival_selection = "truncation";
  std::string crossover = "auto";
  double crossover_rate = 0.9;
  double swap_probability = 0.5;
  double blend_weight = 0.5;
  std::string mutation = "auto";
  double mutation_rate = 0.05;
  double mutation_step = 0.01;
  double mutation_sigma = 0.05;
  bool fitness_sharing = false;

  // Differential evolution.
  double scale_factor = 0.5;
  double cr = 0.9;
  std::string bound_policy = "reflect";

  // Niching.
  std::string metric = "auto";
  double sharing_radius = 0.1;
  double sharing_alpha = 1.0;
  double tl_discount = 0.5;
  double sl_floor = 0.05;
  double species_radius = 0.1;
  std::size_t explosion_copies = 5;
  double stage_switch = 0.5;
  std::size_t injection = 5;

  // Problem.
  std::size_t dimension = 0;
  int energy_scheme = 1;
  std::string feasibility = "delete";
  double penalty = -1.0;  ///< negative: 2 * |E(H,H)|
  std::string encoding = "relative";
  std::size_t sequence_index = 0;
  std::size_t max_retries = 1000;
  double value_tol = 1e-4;
  double dist_tol = 0.01;

  /// Notes produced while resolving the config (e.g. algorithm degradation).
  std::vector<std::string> warnings;
};

struct ConfigKey {
  std::string name;
  std::string help;
};

/// Every accepted config key with its description.
const std::vector<ConfigKey>& config_keys();

/// Text block listing all keys with the defaults of a default-constructed
/// spec.
std::string describe_config_keys();

/// Sets one key from its textual value.
void set_config_value(ExperimentSpec& spec, std::string_view key, std::string_view value);

/// Applies a flat key=value document ('#' comments) or a JSON object onto
/// `spec`. Errors name the offending line or key.
void apply_config_text(ExperimentSpec& spec, std::string_view text);

/// Checks names and ranges and resolves algorithm/problem compatibility,
/// appending any degradation notes to `spec.warnings`.
void validate_spec(ExperimentSpec& spec);

/// Parses and validates a config document on top of the defaults.
ExperimentSpec parse_config(std::string_view text);

/// Resolved config as a JSON object text.
std::string spec_to_json(const ExperimentSpec& spec);

/// Runs `spec.repeats` runs with seeds seed, seed+1, ... and writes
/// runs.csv, summary.json, timing.json (and conformation_run<k>.txt for HP
/// problems) into `spec.out`. Returns 0 on success; errors are reported on
/// `err` with a nonzero status.
int run_experiment(const ExperimentSpec& spec, std::ostream& err);

}  // namespace evo
