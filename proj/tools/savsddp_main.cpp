#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "savsddp/errors.hpp"
#include "savsddp/experiments.hpp"

namespace {

void add_common(CLI::App* cmd, savsddp::experiments::RunSettings& s, bool& seed_given) {
  cmd->add_option("--config", s.config_path, "Model specification file (JSON)")
      ->required();
  cmd->add_option("--seed", s.seed, "Master seed (default: the config's seed)")
      ->each([&seed_given](const std::string&) { seed_given = true; });
  cmd->add_option("--iterations", s.iterations, "Iteration cap (default 1000)");
  cmd->add_option("--paths", s.paths, "Forward sample paths per iteration (default 3)");
  cmd->add_option("--epsilon", s.epsilon, "Relative-gap convergence threshold (default 0.01)");
  cmd->add_option("--samples", s.samples, "SAA realizations per stochastic stage");
  cmd->add_option("--out", s.out_dir, "Output directory (default .)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic dual dynamic programming for shared-autonomous-vehicle "
               "network design and operations"};
  app.require_subcommand(1);

  savsddp::experiments::RunSettings settings;
  bool seed_given = false;

  auto* validate = app.add_subcommand(
      "validate", "Convergence curves per weight setting (convergence.csv)");
  auto* sensitivity = app.add_subcommand(
      "sensitivity", "Fleet size and infrastructure cost over booking rates (design.csv)");
  auto* pareto = app.add_subcommand(
      "pareto", "Expected performance over weights, rho and flags (pareto.csv)");
  auto* benchmark = app.add_subcommand(
      "benchmark", "Trained policy vs the pre-booking-blind benchmark (benchmark.csv)");
  auto* oracle = app.add_subcommand(
      "oracle", "SDDP lower bound vs the extensive-form optimum (oracle.csv)");
  for (CLI::App* cmd : {validate, sensitivity, pareto, benchmark, oracle})
    add_common(cmd, settings, seed_given);

  CLI11_PARSE(app, argc, argv);
  settings.seed_set = seed_given;

  try {
    if (validate->parsed()) return savsddp::experiments::run_validate(settings);
    if (sensitivity->parsed()) return savsddp::experiments::run_sensitivity(settings);
    if (pareto->parsed()) return savsddp::experiments::run_pareto(settings);
    if (benchmark->parsed()) return savsddp::experiments::run_benchmark(settings);
    if (oracle->parsed()) return savsddp::experiments::run_oracle(settings);
  } catch (const savsddp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
