#include "lcvx/oracle.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "lcvx/analysis.hpp"
#include "lcvx/errors.hpp"
#include "lcvx/transcription.hpp"

namespace lcvx {

void OracleConfig::check() const {
  if (!(terminal_tol > 0.0)) throw ArgumentError("terminal_tol must be positive");
  if (max_nodes < 1) throw ArgumentError("max_nodes must be >= 1");
}

namespace {

std::string refusal_message(double required, std::uint64_t max_nodes) {
  std::ostringstream os;
  os << "enumeration needs " << required << " leaves, max_nodes is " << max_nodes;
  return os.str();
}

// Depth-first search over one subtree. Shared immutable data lives in the
// Search object; each worker owns its own.
class Search {
 public:
  Search(const DiscretizedSystem& sysd, const DiscreteInputSet& set,
         const Eigen::VectorXd& xf, const OracleConfig& cfg)
      : sysd_(sysd), xf_(xf), cfg_(cfg), steps_(sysd.steps) {
    const auto& pts = set.points();
    const double zero_tol = set.tol_geom();
    for (const auto& p : pts) {
      pushes_.push_back(sysd.b_d * p);
      double c = 0.0;
      if (cfg.objective == OracleObjective::Fuel) {
        c = p.lpNorm<1>();
      } else {
        c = static_cast<double>((p.array().abs() > zero_tol).count());
      }
      step_cost_.push_back(sysd.dt * c);
    }
    states_.assign(static_cast<std::size_t>(steps_) + 1,
                   Eigen::VectorXd::Zero(sysd.states()));
    path_.assign(static_cast<std::size_t>(steps_), 0);
  }

  // Runs the subtree whose first `prefix.size()` choices are fixed.
  void run(const Eigen::VectorXd& x0, const std::vector<int>& prefix) {
    states_[0] = x0;
    double cost = 0.0;
    for (std::size_t k = 0; k < prefix.size(); ++k) {
      path_[k] = prefix[k];
      states_[k + 1].noalias() = sysd_.a_d * states_[k];
      states_[k + 1] += pushes_[static_cast<std::size_t>(prefix[k])];
      cost += step_cost_[static_cast<std::size_t>(prefix[k])];
    }
    descend(static_cast<int>(prefix.size()), cost);
  }

  bool found = false;
  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<int> best_path;
  Eigen::VectorXd best_terminal;
  std::uint64_t leaves = 0;

 private:
  double eps() const { return 1e-12 * std::max(1.0, std::abs(best_cost)); }

  void descend(int depth, double cost) {
    if (depth == steps_) {
      ++leaves;
      const double err = (states_[static_cast<std::size_t>(depth)] - xf_).norm();
      if (err <= cfg_.terminal_tol && (!found || cost < best_cost - eps())) {
        found = true;
        best_cost = cost;
        best_path = path_;
        best_terminal = states_[static_cast<std::size_t>(depth)];
      }
      return;
    }
    const auto& x = states_[static_cast<std::size_t>(depth)];
    auto& next = states_[static_cast<std::size_t>(depth) + 1];
    for (std::size_t i = 0; i < pushes_.size(); ++i) {
      const double c = cost + step_cost_[i];
      if (cfg_.prune && found && c >= best_cost - eps()) continue;
      next.noalias() = sysd_.a_d * x;
      next += pushes_[i];
      path_[static_cast<std::size_t>(depth)] = static_cast<int>(i);
      descend(depth + 1, c);
    }
  }

  const DiscretizedSystem& sysd_;
  const Eigen::VectorXd& xf_;
  const OracleConfig& cfg_;
  int steps_;
  std::vector<Eigen::VectorXd> pushes_;
  std::vector<double> step_cost_;
  std::vector<Eigen::VectorXd> states_;
  std::vector<int> path_;
};

}  // namespace

OracleRefused::OracleRefused(double required_nodes, std::uint64_t max_nodes)
    : std::runtime_error(refusal_message(required_nodes, max_nodes)),
      required_(required_nodes) {}

OracleResult enumerate_optimal(const DiscretizedSystem& sysd,
                               const DiscreteInputSet& set,
                               const Eigen::VectorXd& x0,
                               const Eigen::VectorXd& xf,
                               const OracleConfig& cfg) {
  cfg.check();
  if (set.dimension() != sysd.inputs()) {
    throw StructuralError("input set dimension does not match the plant");
  }
  if (x0.size() != sysd.states() || xf.size() != sysd.states()) {
    throw StructuralError("boundary states must have the plant's dimension");
  }
  const double required =
      std::pow(static_cast<double>(set.points().size()), sysd.steps);
  if (required > static_cast<double>(cfg.max_nodes)) {
    throw OracleRefused(required, cfg.max_nodes);
  }

  const int branches = static_cast<int>(set.points().size());
  std::vector<Search> results;
  if (cfg.threads <= 1) {
    Search s(sysd, set, xf, cfg);
    s.run(x0, {});
    results.push_back(std::move(s));
  } else {
    // One task per first-step branch, merged in branch order below.
    std::vector<std::future<Search>> tasks;
    for (int b = 0; b < branches; ++b) {
      tasks.push_back(std::async(std::launch::async, [&, b] {
        Search s(sysd, set, xf, cfg);
        s.run(x0, {b});
        return s;
      }));
    }
    for (auto& t : tasks) results.push_back(t.get());
  }

  OracleResult out;
  const Search* best = nullptr;
  for (const auto& s : results) {
    out.leaves += s.leaves;
    if (!s.found) continue;
    if (!best || s.best_cost < best->best_cost -
                                   1e-12 * std::max(1.0, std::abs(best->best_cost))) {
      best = &s;
    }
  }
  if (!best) {
    out.feasible = false;
    out.cost = std::numeric_limits<double>::infinity();
    return out;
  }
  out.feasible = true;
  out.cost = best->best_cost;
  out.sequence = best->best_path;
  for (int idx : out.sequence) {
    out.controls.push_back(set.points()[static_cast<std::size_t>(idx)]);
  }
  out.terminal_state = best->best_terminal;
  out.terminal_error = (out.terminal_state - xf).norm();
  return out;
}

bool losslessness_certified(double lp_cost, double candidate_cost,
                            double eps_gap, double tol) {
  return lp_cost <= candidate_cost + tol &&
         candidate_cost - lp_cost <= eps_gap + tol;
}

LosslessnessReport verify_losslessness(const DiscretizedSystem& sysd,
                                       const DiscreteInputSet& set,
                                       const Eigen::VectorXd& x0,
                                       const Eigen::VectorXd& xf,
                                       const OracleConfig& cfg,
                                       const SolverOptions& opts) {
  LosslessnessReport report;
  const auto prob = transcribe(sysd, set, x0, xf);
  report.lp_solution = solve_transcribed(prob, opts);
  if (report.lp_solution.status != SolveStatus::Optimal) {
    throw NotOptimalError(report.lp_solution.status);
  }
  report.lp_cost = report.lp_solution.cost;

  OracleConfig fuel_cfg = cfg;
  fuel_cfg.objective = OracleObjective::Fuel;
  report.oracle = enumerate_optimal(sysd, set, x0, xf, fuel_cfg);
  report.tolerance = 1e-6 * (1.0 + std::abs(report.lp_cost));
  if (!report.oracle.feasible) {
    report.oracle_cost = std::numeric_limits<double>::infinity();
    report.gap = std::numeric_limits<double>::infinity();
    report.lower_bound_holds = true;
    report.certified = false;
    return report;
  }
  report.oracle_cost = report.oracle.cost;
  report.gap = report.oracle_cost - report.lp_cost;

  const Eigen::VectorXd shift = report.oracle.terminal_state - xf;
  if (shift.norm() > 1e-9 * (1.0 + xf.norm())) {
    const auto moved = transcribe(sysd, set, x0, report.oracle.terminal_state);
    const auto moved_sol = solve_transcribed(moved, opts);
    if (moved_sol.status != SolveStatus::Optimal) {
      throw NotOptimalError(moved_sol.status);
    }
    report.sensitivity = std::abs(moved_sol.cost - report.lp_cost) / shift.norm();
  }
  report.eps_gap = report.sensitivity * cfg.terminal_tol;
  report.lower_bound_holds =
      report.lp_cost <= report.oracle_cost + report.tolerance;
  report.certified = losslessness_certified(report.lp_cost, report.oracle_cost,
                                            report.eps_gap, report.tolerance);
  return report;
}

}  // namespace lcvx
