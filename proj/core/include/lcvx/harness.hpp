#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "lcvx/analysis.hpp"
#include "lcvx/inputset.hpp"
#include "lcvx/linsys.hpp"
#include "lcvx/lpsolve.hpp"
#include "lcvx/oracle.hpp"
#include "lcvx/problem_io.hpp"
#include "lcvx/scenario.hpp"
#include "lcvx/solution.hpp"

namespace lcvx {

enum ExitCode : int {
  kExitSuccess = 0,
  kExitValidation = 2,
  kExitInfeasible = 3,
  kExitSolverFailure = 4,
  kExitCertification = 5,
};

std::string_view library_version();

/// Everything produced by one run of the solve pipeline.
struct RunOutcome {
  int exit_code = kExitSolverFailure;
  std::string error_kind;     // empty on success
  std::string error_message;
  ValidationReport validation;
  std::optional<ControllabilityReport> controllability;
  std::optional<EdgeNormalityReport> edge_normality;  // advisory only
  Solution solution;
  std::optional<DiscretenessReport> discreteness;
  std::optional<BangBangCertificate> certificate;
  std::optional<KktReport> kkt;
  double terminal_residual = 0.0;   // ||x_N - xf||_2 from the LP states
  double propagated_residual = 0.0; // ||x_N - xf||_2 re-propagating u
  double hands_off = 0.0;
  double transcribe_time = 0.0;
  double total_time = 0.0;
  int iterations = 0;
  std::optional<DiscretizedSystem> sysd;
};

/// validate -> controllability -> transcribe -> solve -> analyze.
RunOutcome run_solve(const ProblemSpec& spec);

/// Input-set validation and controllability only; exit code 0 or 2.
RunOutcome run_check(const ProblemSpec& spec);

/// Trajectory CSV: columns t, x1..xn, u1..um, nu, d. One row per grid node
/// (N + 1 rows); the last row leaves u, nu and d empty.
void write_solution_csv(std::ostream& os, const RunOutcome& out);

nlohmann::json report_json(const ProblemSpec& spec, const RunOutcome& out);

struct SweepRecord {
  int steps = 0;
  double solve_time = 0.0;
  double d_bar = 0.0;
  double cost = 0.0;
  std::string status;
  int exit_code = 0;
};

/// Solves the same problem on each grid size; failures are recorded per row.
std::vector<SweepRecord> run_sweep(const ProblemSpec& spec,
                                   std::span<const int> n_list);

/// Columns: N, solve_time_s, d_bar, cost, status.
void write_sweep_csv(std::ostream& os, std::span<const SweepRecord> rows,
                     std::optional<int> ic_index = std::nullopt,
                     bool header = true);

struct MonteCarloConfig {
  int samples = 100;
  double r_bound = 500.0;  // m, infinity-norm box on position
  double v_bound = 5.0;    // m/s, infinity-norm box on velocity
  double horizon = 300.0;
  int steps = 400;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  SolverOptions solver;

  void check() const;
};

/// Uniform draw from the (r, v) box for one sample, a pure function of
/// (seed, sample index).
Eigen::VectorXd sample_initial_state(const MonteCarloConfig& cfg, int sample);

struct MonteCarloRecord {
  int sample = 0;
  Eigen::VectorXd x0;
  double solve_time = 0.0;
  double d_bar = 0.0;
  double cost = 0.0;
  std::string status;
  int exit_code = 0;
};

struct Histogram {
  std::vector<double> edges;
  std::vector<int> counts;
};

Histogram make_histogram(std::span<const double> values, int bins);

struct MonteCarloSummary {
  std::vector<MonteCarloRecord> records;
  double mean_solve_time = 0.0;
  double median_solve_time = 0.0;
  double max_solve_time = 0.0;
  double mean_d_bar = 0.0;
  double success_rate = 0.0;
  bool all_succeeded = false;
  Histogram solve_time_hist;
  Histogram d_bar_hist;
};

/// Overrides the sampled x0 of selected samples (for degenerate runs).
using InitialStateOverride =
    std::function<std::optional<Eigen::VectorXd>(int sample)>;

MonteCarloSummary run_montecarlo(const MonteCarloConfig& cfg,
                                 const RendezvousScenario& scenario,
                                 InitialStateOverride override_x0 = nullptr);

/// Columns: sample, solve_time_s, d_bar, cost, status.
void write_montecarlo_csv(std::ostream& os, const MonteCarloSummary& summary);
nlohmann::json montecarlo_json(const MonteCarloConfig& cfg,
                               const RendezvousScenario& scenario,
                               const MonteCarloSummary& summary);

/// Rendezvous problem on the default thruster set, target the origin.
ProblemSpec rendezvous_problem(const RendezvousScenario& scenario,
                               const Eigen::VectorXd& x0, double horizon,
                               int steps);


/// One double-integrator instance with U = {0, +-1}. The target is reached
/// by a bang-off-bang sequence: s for the first `lead` steps, 0, then -s for
/// the last `tail` steps.
struct OracleInstance {
  int index = 0;
  DiscretizedSystem sysd;
  DiscreteInputSet set;
  Eigen::VectorXd x0;
  Eigen::VectorXd xf;
  std::vector<double> generator;
};

/// Seeded, reachable boundary pairs for the losslessness check.
std::vector<OracleInstance> double_integrator_suite(int steps, int count,
                                                    std::uint64_t seed,
                                                    double dt = 0.5);

}  // namespace lcvx
