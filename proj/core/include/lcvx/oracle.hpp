#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "lcvx/inputset.hpp"
#include "lcvx/linsys.hpp"
#include "lcvx/lpsolve.hpp"
#include "lcvx/solution.hpp"

namespace lcvx {

enum class OracleObjective { Fuel, HandsOff };

struct OracleConfig {
  double terminal_tol = 1e-6;
  std::uint64_t max_nodes = 100'000'000;
  OracleObjective objective = OracleObjective::Fuel;
  bool prune = true;
  unsigned threads = 1;

  void check() const;
};

/// Thrown when |U|^N exceeds max_nodes.
class OracleRefused : public std::runtime_error {
 public:
  OracleRefused(double required_nodes, std::uint64_t max_nodes);
  double required_nodes() const { return required_; }

 private:
  double required_;
};

struct OracleResult {
  bool feasible = false;
  std::vector<int> sequence;  // indices into set.points()
  std::vector<Eigen::VectorXd> controls;
  double cost = 0.0;
  Eigen::VectorXd terminal_state;
  double terminal_error = 0.0;
  std::uint64_t leaves = 0;
};

/// Exhaustive search over U^N for the cheapest sequence with
/// ||x_N - xf||_2 <= terminal_tol. Depth-first in point-index order; a
/// sequence replaces the incumbent only when strictly cheaper, so among
/// equal-cost optima the lexicographically smallest index sequence wins.
/// Pruning discards a prefix whose cost already reaches the incumbent.
OracleResult enumerate_optimal(const DiscretizedSystem& sysd,
                               const DiscreteInputSet& set,
                               const Eigen::VectorXd& x0,
                               const Eigen::VectorXd& xf,
                               const OracleConfig& cfg);

struct LosslessnessReport {
  double lp_cost = 0.0;
  double oracle_cost = 0.0;
  double gap = 0.0;             // oracle_cost - lp_cost
  double sensitivity = 0.0;     // L, fuel per unit terminal displacement
  double eps_gap = 0.0;         // L * terminal_tol
  double tolerance = 0.0;       // solver slack allowed on both comparisons
  bool lower_bound_holds = false;
  bool certified = false;
  Solution lp_solution;
  OracleResult oracle;
};

/// Certification rule shared by verify_losslessness and its callers:
/// lp <= candidate + tol and candidate - lp <= eps_gap + tol.
bool losslessness_certified(double lp_cost, double candidate_cost,
                            double eps_gap, double tol);

/// Solves the relaxed LP and the enumeration oracle on the same instance.
///
/// eps_gap = L * terminal_tol, where L = |lp(x_o) - lp(xf)| / ||x_o - xf||
/// is estimated by re-solving the LP with the target moved to the oracle's
/// achieved terminal state x_o. If x_o coincides with xf (relative 1e-9) the
/// estimate is skipped and eps_gap = 0.
LosslessnessReport verify_losslessness(const DiscretizedSystem& sysd,
                                       const DiscreteInputSet& set,
                                       const Eigen::VectorXd& x0,
                                       const Eigen::VectorXd& xf,
                                       const OracleConfig& cfg,
                                       const SolverOptions& opts = {});

}  // namespace lcvx
