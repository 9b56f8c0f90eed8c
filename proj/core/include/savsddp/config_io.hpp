#pragma once

#include <array>
#include <string>
#include <vector>

#include "savsddp/sav_compiler.hpp"

namespace savsddp::sav {

/// Sweep lists and evaluation knobs for the experiment subcommands, with the
/// base-case defaults. Overridable through the optional "experiments" block
/// of a model configuration file.
struct ExperimentLists {
  std::vector<double> booking_rates = {0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<std::array<double, 4>> weight_sets = {
      {10, 1, 1, 1}, {1, 1, 1, 1}, {1, 10, 1, 1}};
  std::vector<double> rhos = {3.0, 4.0};
  std::vector<double> pareto_booking_rates = {0.5};
  int eval_paths = 30;
  long long scenario_cap = 4096;
};

struct LoadedConfig {
  SavInputs inputs;
  ExperimentLists experiments;
};

/// Parses a model specification document (JSON syntax). Schema violations are
/// reported as ConfigError with the offending key path. The optional
/// demand.generate block replaces explicit od lists with a seeded random
/// allocation of a total expected demand.
LoadedConfig parse_config(const std::string& text, const std::string& origin);
LoadedConfig load_config(const std::string& path);

}  // namespace savsddp::sav
