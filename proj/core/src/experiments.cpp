#include "savsddp/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>

#include "savsddp/config_io.hpp"
#include "savsddp/csv.hpp"
#include "savsddp/sddp.hpp"

namespace savsddp::experiments {

namespace {

using sav::LoadedConfig;
using sav::SavInputs;
using sav::SavModel;

struct Prepared {
  LoadedConfig config;
  sddp::TrainOptions train;
  std::uint64_t master_seed = 0;
  std::string out_dir;
};

Prepared prepare(const RunSettings& s) {
  Prepared p;
  p.config = sav::load_config(s.config_path);
  if (s.samples > 0) p.config.inputs.options.saa_samples = s.samples;
  p.master_seed = s.seed_set ? s.seed : p.config.inputs.options.seed;
  p.config.inputs.options.seed = p.master_seed;
  p.train.max_iterations = s.iterations > 0 ? s.iterations : 1000;
  p.train.forward_paths = s.paths > 0 ? s.paths : 3;
  p.train.epsilon = s.epsilon >= 0 ? s.epsilon : 1e-2;
  p.train.seed = p.master_seed;
  p.out_dir = s.out_dir.empty() ? "." : s.out_dir;
  std::filesystem::create_directories(p.out_dir);
  return p;
}

std::string out_path(const Prepared& p, const char* file) {
  return (std::filesystem::path(p.out_dir) / file).string();
}

struct TrainedRun {
  SavModel model;
  sddp::TrainResult result;
};

/// All sweep points share seeds: the SAA draws and training streams are
/// matched across points (common random numbers), which the directional
/// comparisons between sweep points rely on.
TrainedRun train_point(const Prepared& p, const SavInputs& inputs) {
  TrainedRun run;
  run.model = sav::compile_sav_problem(inputs);
  sddp::SddpEngine engine(run.model.problem, p.train);
  run.result = engine.train();
  return run;
}

struct EvalSummary {
  double obj_mean = 0.0;
  double fleet_mean = 0.0, fleet_sd = 0.0;
  double t_mean = 0.0, d_mean = 0.0;
  double tt_pre = 0.0, tt_on = 0.0;
};

EvalSummary evaluate_point(const Prepared& p, TrainedRun& run) {
  sddp::SddpEngine engine(run.model.problem, p.train);
  sddp::EvaluationStats stats;
  const auto traces = engine.evaluate_traced(run.result.policy,
                                             p.config.experiments.eval_paths,
                                             mix_seed(p.master_seed, 0xe7a1), &stats);
  EvalSummary s;
  s.obj_mean = stats.mean;
  std::vector<double> fleets;
  for (const sddp::PathTrace& tr : traces) {
    const sav::PerformanceReport rep = sav::extract_performance(run.model, tr.stage_primal);
    fleets.push_back(rep.fleet_size);
    s.t_mean += rep.total_travel_time;
    s.d_mean += rep.total_distance;
    s.tt_pre += rep.prebooked_time_per_traveler;
    s.tt_on += rep.ondemand_time_per_traveler;
  }
  const double n = static_cast<double>(traces.size());
  s.t_mean /= n;
  s.d_mean /= n;
  s.tt_pre /= n;
  s.tt_on /= n;
  for (double f : fleets) s.fleet_mean += f;
  s.fleet_mean /= n;
  if (traces.size() > 1) {
    double var = 0.0;
    for (double f : fleets) var += (f - s.fleet_mean) * (f - s.fleet_mean);
    s.fleet_sd = std::sqrt(var / (n - 1.0));
  }
  return s;
}

double infra_cost(const SavModel& model, const std::vector<double>& stage0) {
  double c = 0.0;
  for (int e = 0; e < model.network.num_entities(); ++e)
    c += model.network.entity(e).unit_cost * stage0[model.vars[0].mu[e]];
  return c;
}

}  // namespace

int run_validate(const RunSettings& settings) {
  Prepared p = prepare(settings);
  CsvWriter csv({"alpha_T", "alpha_D", "alpha_N", "alpha_C", "iteration", "lower",
                 "upper_mean", "upper_sd", "upper", "rel_gap", "converged"});
  for (const auto& w : p.config.experiments.weight_sets) {
    SavInputs inputs = p.config.inputs;
    inputs.weights.alpha_T = w[0];
    inputs.weights.alpha_D = w[1];
    inputs.weights.alpha_N = w[2];
    inputs.weights.alpha_C = w[3];
    inputs.weights.alpha_P = 0.0;  // re-derive the penalty from the new weights
    TrainedRun run = train_point(p, inputs);
    for (const sddp::BoundRecord& r : run.result.history.records) {
      csv.add_row({CsvWriter::cell(w[0]), CsvWriter::cell(w[1]), CsvWriter::cell(w[2]),
                   CsvWriter::cell(w[3]), CsvWriter::cell(r.iteration),
                   CsvWriter::cell(r.lower), CsvWriter::cell(r.upper_mean),
                   CsvWriter::cell(r.upper_sd), CsvWriter::cell(r.upper),
                   CsvWriter::cell(r.rel_gap),
                   CsvWriter::cell(run.result.policy.converged)});
    }
    std::cout << "validate: weights (" << w[0] << "," << w[1] << "," << w[2] << ","
              << w[3] << ") finished after " << run.result.policy.iterations
              << " iterations, lower bound " << run.result.policy.lower_bound << "\n";
  }
  csv.write_atomic(out_path(p, "convergence.csv"));
  return 0;
}

int run_sensitivity(const RunSettings& settings) {
  Prepared p = prepare(settings);
  CsvWriter csv({"booking_rate", "dedicated", "fleet_N_mean", "fleet_N_sd", "infra_C",
                 "converged"});
  for (double rate : p.config.experiments.booking_rates) {
    for (bool dedicated : {true, false}) {
      SavInputs inputs = p.config.inputs;
      inputs.demand.booking_rate = rate;
      inputs.demand.dedicated = dedicated;
      TrainedRun run = train_point(p, inputs);
      const EvalSummary ev = evaluate_point(p, run);
      const double c = infra_cost(run.model, run.result.policy.first_stage_solution);
      csv.add_row({CsvWriter::cell(rate), CsvWriter::cell(dedicated),
                   CsvWriter::cell(ev.fleet_mean), CsvWriter::cell(ev.fleet_sd),
                   CsvWriter::cell(c), CsvWriter::cell(run.result.policy.converged)});
      std::cout << "sensitivity: rate " << rate << (dedicated ? " +dedicated" : "")
                << ": N " << ev.fleet_mean << ", C " << c << "\n";
    }
  }
  csv.write_atomic(out_path(p, "design.csv"));
  return 0;
}

int run_pareto(const RunSettings& settings) {
  Prepared p = prepare(settings);
  CsvWriter csv({"alpha_T", "alpha_D", "rho", "booking_rate", "dedicated", "E_T", "E_D",
                 "E_obj", "tt_per_prebooked", "tt_per_ondemand", "converged"});
  for (const auto& w : p.config.experiments.weight_sets) {
    for (double rho : p.config.experiments.rhos) {
      for (double rate : p.config.experiments.pareto_booking_rates) {
        for (bool dedicated : {false, true}) {
          SavInputs inputs = p.config.inputs;
          inputs.weights.alpha_T = w[0];
          inputs.weights.alpha_D = w[1];
          inputs.weights.alpha_N = w[2];
          inputs.weights.alpha_C = w[3];
          inputs.weights.alpha_P = 0.0;
          inputs.options.rho = rho;
          inputs.demand.booking_rate = rate;
          inputs.demand.dedicated = dedicated;
          TrainedRun run = train_point(p, inputs);
          const EvalSummary ev = evaluate_point(p, run);
          csv.add_row({CsvWriter::cell(w[0]), CsvWriter::cell(w[1]), CsvWriter::cell(rho),
                       CsvWriter::cell(rate), CsvWriter::cell(dedicated),
                       CsvWriter::cell(ev.t_mean), CsvWriter::cell(ev.d_mean),
                       CsvWriter::cell(ev.obj_mean), CsvWriter::cell(ev.tt_pre),
                       CsvWriter::cell(ev.tt_on),
                       CsvWriter::cell(run.result.policy.converged)});
          std::cout << "pareto: aT " << w[0] << " aD " << w[1] << " rho " << rho
                    << " rate " << rate << (dedicated ? " +dedicated" : "") << ": E[T] "
                    << ev.t_mean << ", E[D] " << ev.d_mean << "\n";
        }
      }
    }
  }
  csv.write_atomic(out_path(p, "pareto.csv"));
  return 0;
}

int run_benchmark(const RunSettings& settings) {
  Prepared p = prepare(settings);

  SavInputs blind = p.config.inputs;
  blind.demand.benchmark_blind = true;
  blind.demand.dedicated = false;
  TrainedRun blind_run = train_point(p, blind);
  const EvalSummary blind_ev = evaluate_point(p, blind_run);

  CsvWriter csv({"booking_rate", "obj_proposed", "obj_blind", "converged"});
  for (double rate : p.config.experiments.booking_rates) {
    SavInputs proposed = p.config.inputs;
    proposed.demand.booking_rate = rate;
    proposed.demand.dedicated = false;
    TrainedRun run = train_point(p, proposed);
    const EvalSummary ev = evaluate_point(p, run);
    const bool conv = run.result.policy.converged && blind_run.result.policy.converged;
    csv.add_row({CsvWriter::cell(rate), CsvWriter::cell(ev.obj_mean),
                 CsvWriter::cell(blind_ev.obj_mean), CsvWriter::cell(conv)});
    std::cout << "benchmark: rate " << rate << ": proposed " << ev.obj_mean
              << " vs blind " << blind_ev.obj_mean << "\n";
  }
  csv.write_atomic(out_path(p, "benchmark.csv"));
  return 0;
}

int run_oracle(const RunSettings& settings) {
  Prepared p = prepare(settings);
  SavModel model = sav::compile_sav_problem(p.config.inputs);

  const long long count = msslp::count_scenarios(model.problem, 0);
  if (count > p.config.experiments.scenario_cap) {
    std::cerr << "oracle: instance needs " << count << " scenarios, cap is "
              << p.config.experiments.scenario_cap << "\n";
    return 1;
  }
  const lp::LpProblem ef = msslp::extensive_form(model.problem,
                                                 p.config.experiments.scenario_cap);
  const lp::LpOutcome ef_out = lp::SimplexSolver().solve(ef);
  if (ef_out.status != lp::LpStatus::Optimal) {
    std::cerr << "oracle: extensive form is " << lp::to_string(ef_out.status) << "\n";
    return 1;
  }

  sddp::SddpEngine engine(model.problem, p.train);
  const sddp::TrainResult result = engine.train();
  const double gap =
      std::abs(ef_out.objective - result.policy.lower_bound) /
      std::max(std::abs(ef_out.objective), 1e-12);

  CsvWriter csv({"extensive_optimum", "sddp_lower", "rel_gap", "converged"});
  csv.add_row({CsvWriter::cell(ef_out.objective),
               CsvWriter::cell(result.policy.lower_bound), CsvWriter::cell(gap),
               CsvWriter::cell(result.policy.converged)});
  csv.write_atomic(out_path(p, "oracle.csv"));

  std::cout << "oracle: extensive-form optimum " << ef_out.objective
            << ", SDDP lower bound " << result.policy.lower_bound << ", relative gap "
            << gap << "\n";
  if (gap > 1e-3) {
    std::cerr << "oracle: relative gap " << gap << " exceeds 1e-3\n";
    return 2;
  }
  return 0;
}

}  // namespace savsddp::experiments
