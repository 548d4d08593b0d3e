#pragma once

#include <string>

#include <Eigen/Dense>

namespace lcvx {

/// Continuous-time plant xdot = A x + B u.
///
/// Construction validates the shapes (A square, B with as many rows as A,
/// at least one state and one input) and rejects non-finite entries, so a
/// constructed LtiSystem is always well formed.
class LtiSystem {
 public:
  LtiSystem(Eigen::MatrixXd a, Eigen::MatrixXd b);

  const Eigen::MatrixXd& a() const { return a_; }
  const Eigen::MatrixXd& b() const { return b_; }
  int states() const { return static_cast<int>(a_.rows()); }
  int inputs() const { return static_cast<int>(b_.cols()); }

 private:
  Eigen::MatrixXd a_;
  Eigen::MatrixXd b_;
};

struct ControllabilityReport {
  int rank = 0;
  int states = 0;
  bool is_controllable = false;
  /// Singular values of the Kalman matrix, descending.
  Eigen::VectorXd singular_values;
  /// Threshold below which a singular value counts as zero.
  double tolerance = 0.0;
  std::string note;
};

/// Numerical rank of [B, AB, ..., A^{n-1} B].
///
/// Singular values below max(n, n + m) * eps * sigma_max are treated as zero.
/// A controllable pair is normal with respect to the convex hull of any input
/// set containing the signed axis vertices, and so is its cost-augmented
/// pair; the report note records that implication.
ControllabilityReport controllability_rank(const LtiSystem& sys);

/// exp(M) by scaling and squaring with a degree-13 Pade approximant.
Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& m);

/// Zero-order-hold discretization over a uniform grid.
struct DiscretizedSystem {
  Eigen::MatrixXd a_d;
  Eigen::MatrixXd b_d;
  double dt = 0.0;
  int steps = 1;
  LtiSystem source;

  int states() const { return source.states(); }
  int inputs() const { return source.inputs(); }
  double horizon() const { return dt * steps; }
};

/// One ZOH step of length dt. A_d = e^{A dt}, B_d = int_0^dt e^{A s} ds B,
/// both read off exp([[A, B], [0, 0]] dt).
DiscretizedSystem zoh_discretize(const LtiSystem& sys, double dt);

/// ZOH over [0, horizon] split into `steps` equal intervals.
DiscretizedSystem zoh_discretize_horizon(const LtiSystem& sys, double horizon,
                                         int steps);

/// Cost-augmented plant with x_e = (x, x_c), u_e = (u, nu) and x_c' = nu.
struct AugmentedSystem {
  Eigen::MatrixXd a_e;
  Eigen::MatrixXd b_e;
  LtiSystem base;
  ControllabilityReport base_controllability;
  ControllabilityReport controllability;
};

AugmentedSystem augment(const LtiSystem& sys);

}  // namespace lcvx
