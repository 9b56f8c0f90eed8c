#pragma once

#include <cstdint>
#include <string>

namespace savsddp::experiments {

/// Command-line level knobs shared by all subcommands. Negative values keep
/// the defaults (iteration cap 1000, 3 forward paths, relative epsilon 1e-2,
/// SAA samples from the config file).
struct RunSettings {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int iterations = -1;
  int paths = -1;
  double epsilon = -1.0;
  int samples = -1;
};

/// Convergence curves per weight setting -> convergence.csv.
int run_validate(const RunSettings& settings);
/// Fleet size and infrastructure cost over the booking-rate sweep ->
/// design.csv.
int run_sensitivity(const RunSettings& settings);
/// Expected performance indexes over weights x rho x flags -> pareto.csv.
int run_pareto(const RunSettings& settings);
/// Trained objective vs the pre-booking-blind benchmark -> benchmark.csv.
int run_benchmark(const RunSettings& settings);
/// SDDP lower bound vs the extensive-form optimum -> oracle.csv; fails the
/// exit status when the relative gap exceeds 1e-3.
int run_oracle(const RunSettings& settings);

}  // namespace savsddp::experiments
