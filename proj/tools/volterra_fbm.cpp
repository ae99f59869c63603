#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "vfbm/cli.hpp"
#include "vfbm/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Fractional Brownian motion, Young integrals and Volterra equations"};
  app.set_help_flag("-h,--help");
  std::string subcommand, config;
  app.add_option("subcommand", subcommand, "sample | solve | verify | moments | convergence")
      ->required()
      ->check(CLI::IsMember(vfbm::subcommands()));
  app.add_option("--config", config, "flat key = value file; flags override it");

  // Flags are kept as text and applied through the same parser as the file.
  std::map<std::string, std::string> flags;
  const std::pair<const char*, const char*> names[] = {
      {"H", "Hurst parameter"}, {"alpha", "fractional order"}, {"lambda", "weight, overrides the ladder"},
      {"T", "horizon"}, {"n", "grid intervals"}, {"m", "driver components"}, {"d", "state dimension"},
      {"coeffs", "coefficient model"}, {"paths", "number of paths"}, {"seed", "master seed"},
      {"tol", "Picard tolerance"}, {"max-iter", "Picard iteration cap"}, {"workers", "threads (0 = default)"},
      {"out", "output directory"}};
  for (const auto& [name, help] : names) app.add_option(std::string("--") + name, flags[name], help);

  CLI11_PARSE(app, argc, argv);

  try {
    vfbm::ExperimentConfig c;
    if (!config.empty()) vfbm::apply_config_file(c, config);
    c.subcommand = subcommand;
    for (const auto& [name, help] : names)
      if (app.count(std::string("--") + name)) vfbm::apply_config_value(c, name, flags[name]);
    return vfbm::run_experiment(c, std::cerr);
  } catch (const vfbm::AdmissibilityError& e) {
    std::cerr << "volterra-fbm: inadmissible parameters: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "volterra-fbm: " << e.what() << "\n";
    return 2;
  }
}
