#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lcvx/analysis.hpp"
#include "lcvx/errors.hpp"
#include "lcvx/harness.hpp"
#include "lcvx/oracle.hpp"
#include "lcvx/problem_io.hpp"
#include "lcvx/rng.hpp"
#include "lcvx/scenario.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int emit_error(const std::string& kind, const std::string& message, int code) {
  json j = {{"exit_code", code}, {"error", {{"kind", kind}, {"message", message}}}};
  std::cout << j.dump(2) << '\n';
  std::cerr << "lcvx: " << kind << ": " << message << '\n';
  return code;
}

std::optional<lcvx::ProblemSpec> load(const std::string& path, int& code) {
  try {
    return lcvx::read_problem_file(path);
  } catch (const std::exception& e) {
    code = emit_error("structural", e.what(), lcvx::kExitValidation);
    return std::nullopt;
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

struct SolveArgs {
  std::string problem;
  std::optional<int> steps;
  std::optional<double> horizon;
  std::optional<double> solver_tol;
  std::optional<int> max_iter;
  std::string out_dir = ".";
};

int cmd_check(const std::string& path) {
  int code = 0;
  auto spec = load(path, code);
  if (!spec) return code;
  const auto out = lcvx::run_check(*spec);
  json j = lcvx::report_json(*spec, out);
  j.erase("timing");
  j["status"] = out.exit_code == lcvx::kExitSuccess ? "Valid" : "Invalid";
  std::cout << j.dump(2) << '\n';
  return out.exit_code;
}

int cmd_solve(const SolveArgs& args) {
  int code = 0;
  auto spec = load(args.problem, code);
  if (!spec) return code;
  if (args.steps) spec->steps = *args.steps;
  if (args.horizon) spec->horizon = *args.horizon;
  if (args.solver_tol) spec->solver.tol_feas = spec->solver.tol_gap = *args.solver_tol;
  if (args.max_iter) spec->solver.max_iter = *args.max_iter;

  const auto out = lcvx::run_solve(*spec);
  const json report = lcvx::report_json(*spec, out);
  try {
    fs::create_directories(args.out_dir);
    write_text(fs::path(args.out_dir) / "report.json", report.dump(2) + "\n");
    if (!out.solution.x.empty()) {
      std::ofstream csv(fs::path(args.out_dir) / "solution.csv");
      lcvx::write_solution_csv(csv, out);
    }
  } catch (const std::exception& e) {
    return emit_error("io", e.what(), lcvx::kExitValidation);
  }
  std::cout << report.dump(2) << '\n';
  return out.exit_code;
}

int cmd_sweep(const std::string& problem, std::vector<int> n_list, int ics,
              std::uint64_t seed, double horizon, double u_max,
              const std::string& out_dir) {
  std::sort(n_list.begin(), n_list.end());
  std::vector<lcvx::ProblemSpec> specs;
  if (!problem.empty()) {
    int code = 0;
    auto spec = load(problem, code);
    if (!spec) return code;
    specs.push_back(*spec);
  } else {
    lcvx::RendezvousScenario scenario;
    scenario.u_max = u_max;
    lcvx::MonteCarloConfig cfg;
    cfg.seed = seed;
    for (int i = 0; i < ics; ++i) {
      specs.push_back(lcvx::rendezvous_problem(
          scenario, lcvx::sample_initial_state(cfg, i), horizon, n_list.front()));
    }
  }

  int worst = lcvx::kExitSuccess;
  std::ostringstream csv;
  try {
    for (std::size_t i = 0; i < specs.size(); ++i) {
      const auto rows = lcvx::run_sweep(specs[i], n_list);
      const std::optional<int> ic =
          specs.size() > 1 ? std::optional<int>(static_cast<int>(i)) : std::nullopt;
      lcvx::write_sweep_csv(csv, rows, ic, i == 0);
      for (const auto& r : rows) {
        if (r.exit_code != lcvx::kExitSuccess && worst == lcvx::kExitSuccess) {
          worst = r.exit_code;
        }
      }
    }
    fs::create_directories(out_dir);
    write_text(fs::path(out_dir) / "sweep.csv", csv.str());
  } catch (const lcvx::ArgumentError& e) {
    return emit_error("argument", e.what(), lcvx::kExitValidation);
  } catch (const std::exception& e) {
    return emit_error("io", e.what(), lcvx::kExitValidation);
  }
  std::cout << csv.str();
  return worst;
}

int cmd_montecarlo(const lcvx::MonteCarloConfig& cfg, double u_max,
                   const std::string& out_dir) {
  lcvx::RendezvousScenario scenario;
  scenario.u_max = u_max;
  try {
    const auto summary = lcvx::run_montecarlo(cfg, scenario);
    const json report = lcvx::montecarlo_json(cfg, scenario, summary);
    fs::create_directories(out_dir);
    std::ofstream csv(fs::path(out_dir) / "montecarlo.csv");
    lcvx::write_montecarlo_csv(csv, summary);
    write_text(fs::path(out_dir) / "montecarlo.json", report.dump(2) + "\n");
    std::cout << report["aggregate"].dump(2) << '\n';
    return summary.all_succeeded ? lcvx::kExitSuccess : lcvx::kExitSolverFailure;
  } catch (const std::invalid_argument& e) {
    return emit_error("argument", e.what(), lcvx::kExitValidation);
  } catch (const std::exception& e) {
    return emit_error("io", e.what(), lcvx::kExitValidation);
  }
}

json losslessness_json(const lcvx::LosslessnessReport& r) {
  return {{"lp_cost", r.lp_cost},
          {"oracle_cost", r.oracle.feasible ? json(r.oracle_cost) : json(nullptr)},
          {"gap", r.oracle.feasible ? json(r.gap) : json(nullptr)},
          {"sensitivity", r.sensitivity},
          {"eps_gap", r.eps_gap},
          {"tolerance", r.tolerance},
          {"lower_bound_holds", r.lower_bound_holds},
          {"certified", r.certified},
          {"oracle_feasible", r.oracle.feasible},
          {"oracle_terminal_error", r.oracle.terminal_error},
          {"oracle_leaves", r.oracle.leaves}};
}

int cmd_oracle_single(const std::string& path, const lcvx::OracleConfig& cfg) {
  int code = 0;
  auto spec = load(path, code);
  if (!spec) return code;
  try {
    const auto sysd = lcvx::zoh_discretize_horizon(spec->system(), spec->horizon, spec->steps);
    const auto report = lcvx::verify_losslessness(sysd, spec->input_set(), spec->x0,
                                                  spec->xf, cfg, spec->solver);
    std::cout << losslessness_json(report).dump(2) << '\n';
    if (!report.oracle.feasible) {
      return emit_error("oracle_infeasible",
                        "no discrete sequence reaches the target within terminal_tol",
                        lcvx::kExitCertification);
    }
    return report.certified ? lcvx::kExitSuccess : lcvx::kExitCertification;
  } catch (const lcvx::OracleRefused& e) {
    return emit_error("oracle_refused", e.what(), lcvx::kExitValidation);
  } catch (const lcvx::NotOptimalError& e) {
    const bool infeasible = e.status() == lcvx::SolveStatus::PrimalInfeasible;
    return emit_error(infeasible ? "infeasible" : "solver_failure", e.what(),
                      infeasible ? lcvx::kExitInfeasible : lcvx::kExitSolverFailure);
  } catch (const std::invalid_argument& e) {
    return emit_error("structural", e.what(), lcvx::kExitValidation);
  } catch (const std::runtime_error& e) {
    return emit_error("precondition", e.what(), lcvx::kExitValidation);
  }
}

int cmd_oracle_suite(const std::vector<int>& steps_list, int count, std::uint64_t seed,
                     const lcvx::OracleConfig& cfg, const lcvx::SolverOptions& opts) {
  int total = 0;
  int certified = 0;
  bool bound_everywhere = true;
  json rows = json::array();
  try {
    for (int steps : steps_list) {
      for (const auto& inst : lcvx::double_integrator_suite(steps, count, seed)) {
        const auto r = lcvx::verify_losslessness(inst.sysd, inst.set, inst.x0, inst.xf, cfg, opts);
        ++total;
        certified += r.certified ? 1 : 0;
        bound_everywhere = bound_everywhere && r.lower_bound_holds;
        json row = losslessness_json(r);
        row["N"] = steps;
        row["instance"] = inst.index;
        rows.push_back(row);
      }
    }
  } catch (const std::exception& e) {
    return emit_error("oracle_suite", e.what(), lcvx::kExitSolverFailure);
  }
  const double rate = total ? static_cast<double>(certified) / total : 0.0;
  json j = {{"instances", total},
            {"certified", certified},
            {"certified_rate", rate},
            {"lower_bound_everywhere", bound_everywhere},
            {"rows", rows}};
  std::cout << j.dump(2) << '\n';
  return bound_everywhere && rate >= 0.95 ? lcvx::kExitSuccess : lcvx::kExitCertification;
}

int cmd_scenario(std::vector<double> r0, std::vector<double> v0, double horizon, int steps,
                 double u_max, const std::string& out) {
  lcvx::RendezvousScenario scenario;
  scenario.u_max = u_max;
  Eigen::VectorXd x0(6);
  for (int i = 0; i < 3; ++i) {
    x0(i) = r0[static_cast<std::size_t>(i)];
    x0(i + 3) = v0[static_cast<std::size_t>(i)];
  }
  try {
    const auto spec = lcvx::rendezvous_problem(scenario, x0, horizon, steps);
    if (out.empty() || out == "-") {
      std::cout << lcvx::problem_to_json(spec).dump(2) << '\n';
    } else {
      lcvx::write_problem_file(out, spec);
    }
  } catch (const std::exception& e) {
    return emit_error("argument", e.what(), lcvx::kExitValidation);
  }
  return lcvx::kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fuel-optimal control with discrete-valued inputs via lossless convexification"};
  app.set_version_flag("--version", std::string(lcvx::library_version()));
  app.require_subcommand(1);

  std::string check_path;
  auto* check = app.add_subcommand("check", "Validate the input set and controllability");
  check->add_option("problem", check_path, "Problem file (JSON)")->required();

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Transcribe, solve and certify one problem");
  solve->add_option("problem", solve_args.problem, "Problem file (JSON)")->required();
  solve->add_option("--n-steps", solve_args.steps, "Override the grid size N")
      ->check(CLI::PositiveNumber);
  solve->add_option("--tf", solve_args.horizon, "Override the horizon t_f in seconds")
      ->check(CLI::PositiveNumber);
  solve->add_option("--solver-tol", solve_args.solver_tol,
                    "Feasibility and gap tolerance of the LP solver")
      ->check(CLI::PositiveNumber);
  solve->add_option("--max-iter", solve_args.max_iter, "LP iteration limit")
      ->check(CLI::PositiveNumber);
  solve->add_option("--out-dir", solve_args.out_dir, "Directory for solution.csv and report.json");

  std::string sweep_problem;
  std::vector<int> n_list{100, 200, 300, 400, 500, 600, 700, 800, 900, 1000};
  int sweep_ics = 1;
  std::uint64_t sweep_seed = 1;
  double sweep_tf = 300.0;
  double sweep_umax = 1.0;
  std::string sweep_out = ".";
  auto* sweep = app.add_subcommand("sweep", "Solve one problem over a list of grid sizes");
  sweep->add_option("problem", sweep_problem,
                    "Problem file; without it, rendezvous ICs are sampled instead");
  sweep->add_option("--n-list", n_list, "Comma-separated grid sizes")->delimiter(',');
  sweep->add_option("--ics", sweep_ics, "Number of sampled rendezvous ICs")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--seed", sweep_seed, "Seed for sampled ICs");
  sweep->add_option("--tf", sweep_tf, "Horizon for sampled ICs")->check(CLI::PositiveNumber);
  sweep->add_option("--u-max", sweep_umax, "Thrust bound for sampled ICs")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--out-dir", sweep_out, "Directory for sweep.csv");

  lcvx::MonteCarloConfig mc;
  double mc_umax = 1.0;
  std::string mc_out = ".";
  auto* montecarlo = app.add_subcommand("montecarlo", "Rendezvous Monte Carlo over the IC box");
  montecarlo->add_option("--samples", mc.samples, "Number of samples")
      ->check(CLI::PositiveNumber);
  montecarlo->add_option("--seed", mc.seed, "Sampling seed");
  montecarlo->add_option("--tf", mc.horizon, "Horizon in seconds")->check(CLI::PositiveNumber);
  montecarlo->add_option("--n-steps", mc.steps, "Grid size N")->check(CLI::PositiveNumber);
  montecarlo->add_option("--u-max", mc_umax, "Thrust bound in m/s^2")
      ->check(CLI::PositiveNumber);
  montecarlo->add_option("--r-bound", mc.r_bound, "Position box half-width in m")
      ->check(CLI::PositiveNumber);
  montecarlo->add_option("--v-bound", mc.v_bound, "Velocity box half-width in m/s")
      ->check(CLI::PositiveNumber);
  montecarlo->add_option("--jobs", mc.jobs, "Worker threads")->check(CLI::PositiveNumber);
  montecarlo->add_option("--out-dir", mc_out, "Directory for montecarlo.csv and .json");

  std::string oracle_problem;
  std::vector<int> oracle_steps{8, 12, 16};
  int oracle_count = 20;
  std::uint64_t oracle_seed = 1;
  lcvx::OracleConfig oracle_cfg;
  auto* oracle = app.add_subcommand(
      "oracle-verify", "Compare the LP against exhaustive enumeration on small instances");
  oracle->add_option("problem", oracle_problem,
                     "Problem file; without it, the double-integrator suite runs");
  oracle->add_option("--n-list", oracle_steps, "Suite grid sizes")->delimiter(',');
  oracle->add_option("--count", oracle_count, "Suite instances per grid size")
      ->check(CLI::PositiveNumber);
  oracle->add_option("--seed", oracle_seed, "Suite seed");
  oracle->add_option("--terminal-tol", oracle_cfg.terminal_tol, "Oracle terminal tolerance")
      ->check(CLI::PositiveNumber);
  oracle->add_option("--max-nodes", oracle_cfg.max_nodes, "Refuse above this many leaves");
  lcvx::SolverOptions oracle_solver;
  oracle_solver.tol_feas = oracle_solver.tol_gap = 1e-10;
  std::optional<double> oracle_tol;
  oracle->add_option("--solver-tol", oracle_tol, "LP tolerance (suite default 1e-10)")
      ->check(CLI::PositiveNumber);
  oracle->add_option("--threads", oracle_cfg.threads, "Oracle worker threads")
      ->check(CLI::PositiveNumber);

  std::vector<double> r0{-100.0, -500.0, -100.0};
  std::vector<double> v0{0.0, 0.0, 0.0};
  double scen_tf = 240.0;
  int scen_steps = 800;
  double scen_umax = 1.0;
  std::string scen_out;
  auto* scenario = app.add_subcommand("scenario", "Write a rendezvous problem file");
  scenario->add_option("--r0", r0, "Initial position (3 values, m)")->expected(3);
  scenario->add_option("--v0", v0, "Initial velocity (3 values, m/s)")->expected(3);
  scenario->add_option("--tf", scen_tf, "Horizon in seconds")->check(CLI::PositiveNumber);
  scenario->add_option("--n-steps", scen_steps, "Grid size N")->check(CLI::PositiveNumber);
  scenario->add_option("--u-max", scen_umax, "Thrust bound")->check(CLI::PositiveNumber);
  scenario->add_option("-o,--out", scen_out, "Output path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : lcvx::kExitValidation;
  }

  if (*check) return cmd_check(check_path);
  if (*solve) return cmd_solve(solve_args);
  if (*sweep) {
    return cmd_sweep(sweep_problem, n_list, sweep_ics, sweep_seed, sweep_tf, sweep_umax,
                     sweep_out);
  }
  if (*montecarlo) return cmd_montecarlo(mc, mc_umax, mc_out);
  if (*oracle) {
    if (!oracle_problem.empty()) return cmd_oracle_single(oracle_problem, oracle_cfg);
    if (oracle_tol) oracle_solver.tol_feas = oracle_solver.tol_gap = *oracle_tol;
    return cmd_oracle_suite(oracle_steps, oracle_count, oracle_seed, oracle_cfg, oracle_solver);
  }
  if (*scenario) return cmd_scenario(r0, v0, scen_tf, scen_steps, scen_umax, scen_out);
  return lcvx::kExitValidation;
}
