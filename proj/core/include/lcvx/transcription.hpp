#pragma once

#include <Eigen/Dense>

#include "lcvx/inputset.hpp"
#include "lcvx/linsys.hpp"
#include "lcvx/lpsolve.hpp"
#include "lcvx/program.hpp"
#include "lcvx/solution.hpp"

namespace lcvx {

/// Variable order: the input block (u+_k, u-_k, nu_k for k = 0..N-1, each step
/// contiguous) followed by the state block (x_k for k = 0..N).
class VariableLayout {
 public:
  VariableLayout(int steps, int states, int inputs);

  int steps() const { return steps_; }
  int states() const { return states_; }
  int inputs() const { return inputs_; }

  int step_width() const { return 2 * inputs_ + 1; }
  int input_block_size() const { return steps_ * step_width(); }
  int state_block_size() const { return (steps_ + 1) * states_; }
  int total() const { return input_block_size() + state_block_size(); }

  int plus(int k) const { return k * step_width(); }
  int minus(int k) const { return k * step_width() + inputs_; }
  int slack(int k) const { return k * step_width() + 2 * inputs_; }
  int state(int k) const { return input_block_size() + k * states_; }

 private:
  int steps_;
  int states_;
  int inputs_;
};

struct TranscribedProblem {
  DiscretizedSystem sysd;
  DiscreteInputSet set;
  Eigen::VectorXd x0;
  Eigen::VectorXd xf;
  VariableLayout layout;
  StandardFormProgram program;
};

/// Linear program for the relaxed fuel-optimal problem under ZOH:
///
///   min   dt * sum_k nu_k
///   s.t.  x_{k+1} = A_d x_k + B_d (u+_k - u-_k)
///         x_0 = x0,  x_N = xf
///         sum_j (u+_k + u-_k)_j <= nu_k <= u_max
///         u+_k, u-_k, nu_k >= 0
///
/// Refuses uncontrollable plants (PreconditionError) and invalid input sets
/// (ValidationError).
TranscribedProblem transcribe(const LtiSystem& sys, const DiscreteInputSet& set,
                              const Eigen::VectorXd& x0,
                              const Eigen::VectorXd& xf, double horizon,
                              int steps);

TranscribedProblem transcribe(const DiscretizedSystem& sysd,
                              const DiscreteInputSet& set,
                              const Eigen::VectorXd& x0,
                              const Eigen::VectorXd& xf);

/// Default complementarity tolerance, 1e-6 * max(1, u_max).
double default_tol_comp(const DiscreteInputSet& set);

/// Maps a primal vector back to trajectories; u_k = u+_k - u-_k.
Solution extract_solution(const TranscribedProblem& prob,
                          const Eigen::VectorXd& z, double tol_comp);
Solution extract_solution(const TranscribedProblem& prob,
                          const Eigen::VectorXd& z);

/// Solves the program and extracts the trajectories, carrying the solver
/// status and time into the Solution.
Solution solve_transcribed(const TranscribedProblem& prob,
                           const SolverOptions& opts = {},
                           LpResult* raw = nullptr);

}  // namespace lcvx
