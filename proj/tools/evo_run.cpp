// Experiment runner: evo_run --config exp.cfg [--seed N] [--algorithm A]
// [--problem P] [--budget N] [--out DIR] [--set key=value ...]

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evo/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Evolutionary and niching algorithms on benchmark and HP-lattice problems"};
  app.footer("Config keys (file entries and --set; value shown is the default):\n" +
             evo::describe_config_keys());

  std::string config_path;
  std::vector<std::string> sets;
  std::string seed, algorithm, problem, budget, out;
  bool print_only = false;
  app.add_option("--config", config_path, "key=value or JSON config file")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "override: base seed");
  app.add_option("--algorithm", algorithm, "override: algorithm");
  app.add_option("--problem", problem, "override: problem (bench:<name> | hp:<path>)");
  app.add_option("--budget", budget, "override: evaluation budget per run");
  app.add_option("--out", out, "override: output directory");
  app.add_option("--set", sets, "override any config key, as key=value (repeatable)");
  app.add_flag("--print-config", print_only, "print the resolved config and exit");
  CLI11_PARSE(app, argc, argv);

  evo::ExperimentSpec spec;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      std::stringstream buf;
      buf << in.rdbuf();
      evo::apply_config_text(spec, buf.str());
    }
    const std::pair<const char*, const std::string*> overrides[] = {
        {"seed", &seed}, {"algorithm", &algorithm}, {"problem", &problem},
        {"budget", &budget}, {"out", &out}};
    for (const auto& [key, value] : overrides)
      if (!value->empty()) evo::set_config_value(spec, key, *value);
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw evo::ConfigError("--set expects key=value, got '" + kv + "'");
      evo::set_config_value(spec, kv.substr(0, eq), kv.substr(eq + 1));
    }
    evo::validate_spec(spec);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }

  for (const auto& w : spec.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << evo::spec_to_json(spec) << '\n';
  if (print_only) return 0;
  return evo::run_experiment(spec, std::cerr);
}
