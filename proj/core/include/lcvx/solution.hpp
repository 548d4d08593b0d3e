#pragma once

#include <vector>

#include <Eigen/Dense>

#include "lcvx/lpsolve.hpp"

namespace lcvx {

enum class FlagKind { BothSplitsActive, SlackGap };

struct ExtractionFlag {
  FlagKind kind = FlagKind::SlackGap;
  int step = 0;
  int component = -1;  // input component for BothSplitsActive
  double value = 0.0;
};

/// Control, slack and state trajectories recovered from a solve.
struct Solution {
  std::vector<Eigen::VectorXd> u;   // N inputs
  std::vector<double> nu;           // N slacks
  std::vector<Eigen::VectorXd> x;   // N + 1 states
  double dt = 0.0;
  double cost = 0.0;                // dt * sum(nu)
  SolveStatus status = SolveStatus::NumericalFailure;
  double solve_time = 0.0;
  std::vector<ExtractionFlag> flags;
  double max_slack_gap = 0.0;       // max_k nu_k - ||u_k||_1

  int steps() const { return static_cast<int>(u.size()); }
};

}  // namespace lcvx
