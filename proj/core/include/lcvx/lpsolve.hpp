#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "lcvx/program.hpp"

namespace lcvx {

enum class SolveStatus {
  Optimal,
  PrimalInfeasible,
  DualInfeasible,
  IterationLimit,
  NumericalFailure,
};

std::string_view to_string(SolveStatus status);

struct SolverOptions {
  double tol_feas = 1e-8;
  double tol_gap = 1e-8;
  int max_iter = 200;
  std::optional<double> time_limit;  // seconds

  void check() const;
};

struct IterationLog {
  int iteration = 0;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double mu = 0.0;
  double step = 0.0;
};

/// Result of solve_lp.
///
/// Dual sign convention: with y = dual_eq, lambda = dual_ineq >= 0 and
/// w = dual_bounds >= 0, stationarity reads c - E'y + G'lambda - w = 0.
/// dual_bounds has one entry per variable and is zero for free variables.
/// When status is PrimalInfeasible, the certificate_* vectors hold a Farkas
/// ray in the same convention: -E'y + G'lambda - w = 0 with
/// -e'y + g'lambda - lower'w = -1.
struct LpResult {
  SolveStatus status = SolveStatus::NumericalFailure;
  Eigen::VectorXd primal;
  Eigen::VectorXd dual_eq;
  Eigen::VectorXd dual_ineq;
  Eigen::VectorXd dual_bounds;
  Eigen::VectorXd certificate_eq;
  Eigen::VectorXd certificate_ineq;
  Eigen::VectorXd certificate_bounds;
  double objective = 0.0;
  double dual_objective = 0.0;
  int iterations = 0;
  double solve_time = 0.0;
  std::vector<IterationLog> log;

  bool has_duals() const;
};

/// Homogeneous self-dual primal-dual interior-point method with Mehrotra
/// predictor-corrector steps. The KKT system is quasi-definite after static
/// regularization, factored with a sparse LDL' and cleaned up by iterative
/// refinement against the unregularized matrix. Deterministic: no randomized
/// pivoting, no time-dependent branching unless a time limit is set.
LpResult solve_lp(const StandardFormProgram& p, const SolverOptions& opts = {});

/// Residuals recomputed from the problem data and the result vectors only.
struct KktReport {
  double primal_eq = 0.0;          // ||E z - e||_inf
  double primal_ineq = 0.0;        // max(0, max(G z - g))
  double bound_violation = 0.0;    // max(0, max(lower - z))
  double dual_residual = 0.0;      // ||c - E'y + G'lambda - w||_inf
  double dual_sign = 0.0;          // max(0, -min(lambda, w))
  double complementarity = 0.0;    // max of |lambda_i (g - G z)_i|, |w_j (z - lower)_j|
  double primal_objective = 0.0;
  double dual_objective = 0.0;     // e'y - g'lambda + lower'w (finite bounds only)
  double gap = 0.0;                // primal_objective - dual_objective

  double max_residual() const;
};

/// Throws StructuralError if the result carries no dual vectors.
KktReport kkt_report(const StandardFormProgram& p, const LpResult& r);

}  // namespace lcvx
