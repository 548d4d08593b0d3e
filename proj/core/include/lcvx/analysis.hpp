#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lcvx/errors.hpp"
#include "lcvx/inputset.hpp"
#include "lcvx/linsys.hpp"
#include "lcvx/solution.hpp"

namespace lcvx {

/// Thrown when an analysis needs an Optimal solution and gets something else.
class NotOptimalError : public PreconditionError {
 public:
  explicit NotOptimalError(SolveStatus status);
  SolveStatus status() const { return status_; }

 private:
  SolveStatus status_;
};

/// 1e-4 * max(1, u_max).
double default_tol_vertex(const DiscreteInputSet& set);

/// x_{k+1} = A_d x_k + B_d u_k; returns all N + 1 states.
std::vector<Eigen::VectorXd> propagate(const DiscretizedSystem& sysd,
                                       const Eigen::VectorXd& x0,
                                       std::span<const Eigen::VectorXd> u);

struct DiscretenessReport {
  std::vector<double> distances;          // d(u_k)
  double d_bar = 0.0;                     // mean of distances
  double fraction_on_vertices = 0.0;
  std::vector<int> off_vertex_steps;
  std::vector<Eigen::VectorXd> quantized;  // nearest member of U per step
  double quantized_terminal_error = 0.0;   // ||x_N - xf||_2 under `quantized`
};

/// Distance of each (u_k, nu_k) to the relaxed epigraph vertices.
double distance_to_augmented_vertices(const DiscreteInputSet& set,
                                      const Eigen::VectorXd& u, double nu);

DiscretenessReport discreteness_report(const DiscreteInputSet& set,
                                       const Solution& sol,
                                       const DiscretizedSystem& sysd,
                                       const Eigen::VectorXd& xf,
                                       double tol_vertex);
DiscretenessReport discreteness_report(const DiscreteInputSet& set,
                                       const Solution& sol,
                                       const DiscretizedSystem& sysd,
                                       const Eigen::VectorXd& xf);

/// dt * sum_k ||u_k||_0, counting components with |u_kj| > zero_tol.
double hands_off_measure(const Solution& sol, double zero_tol);

struct BangBangCertificate {
  bool certified = false;
  double fraction_on_vertices = 0.0;
  double max_slack_gap = 0.0;
  std::vector<int> exceptions;  // steps off ex(U_e) or with a slack gap
};

struct BangBangOptions {
  double threshold = 0.95;
  double tol_vertex = -1.0;  // negative selects default_tol_vertex
  double tol_comp = -1.0;    // negative selects default_tol_comp
};

BangBangCertificate verify_bang_bang(const DiscreteInputSet& set,
                                     const Solution& sol,
                                     const BangBangOptions& opts = {});

/// Edge direction w of conv(U) = C_m(u_max): b_i for m = 1, otherwise
/// e_i + sign * e_j with i < j.
struct EdgeDirection {
  int i = 0;
  int j = -1;  // -1 when m = 1
  int sign = 1;
  Eigen::VectorXd w;
};

/// Controllability of (A, B w) along every edge direction of the
/// cross-polytope. Uniqueness of the Hamiltonian minimizer over a polytope
/// needs all of them; (A, B) controllable alone does not give it, e.g. two
/// decoupled double integrators sharing an L1 cap.
struct EdgeNormalityReport {
  bool all_edges_controllable = false;
  std::vector<EdgeDirection> uncontrollable;
  int edges_checked = 0;
};

EdgeNormalityReport edge_normality(const LtiSystem& sys, int inputs);

/// Fuel cost dt * sum ||u_k||_1 recomputed from the control sequence.
double fuel_cost(std::span<const Eigen::VectorXd> u, double dt);

}  // namespace lcvx
