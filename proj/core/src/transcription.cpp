#include "lcvx/transcription.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "lcvx/errors.hpp"

namespace lcvx {

VariableLayout::VariableLayout(int steps, int states, int inputs)
    : steps_(steps), states_(states), inputs_(inputs) {
  if (steps_ < 1 || states_ < 1 || inputs_ < 1) {
    throw ArgumentError("layout needs steps, states and inputs >= 1");
  }
  const long long total =
      static_cast<long long>(steps_) * (2LL * inputs_ + 1) +
      (static_cast<long long>(steps_) + 1) * states_;
  if (total > std::numeric_limits<int>::max()) {
    throw ArgumentError("transcription is too large for 32-bit indexing");
  }
}

namespace {

void check_boundary(const Eigen::VectorXd& v, int n, const char* name) {
  if (v.size() != n) {
    throw StructuralError(std::string(name) + " has dimension " +
                          std::to_string(v.size()) + ", expected " +
                          std::to_string(n));
  }
  if (!v.allFinite()) {
    throw StructuralError(std::string(name) + " has non-finite entries");
  }
}

}  // namespace

TranscribedProblem transcribe(const LtiSystem& sys, const DiscreteInputSet& set,
                              const Eigen::VectorXd& x0,
                              const Eigen::VectorXd& xf, double horizon,
                              int steps) {
  if (steps < 1) throw ArgumentError("number of steps must be >= 1");
  if (!(horizon > 0.0) || !std::isfinite(horizon) ||
      !(horizon / steps > 0.0)) {
    throw ArgumentError("horizon must give a positive finite step");
  }
  return transcribe(zoh_discretize_horizon(sys, horizon, steps), set, x0, xf);
}

TranscribedProblem transcribe(const DiscretizedSystem& sysd,
                              const DiscreteInputSet& set,
                              const Eigen::VectorXd& x0,
                              const Eigen::VectorXd& xf) {
  const int n = sysd.states();
  const int m = sysd.inputs();
  const int steps = sysd.steps;
  if (set.dimension() != m) {
    throw StructuralError("input set dimension " +
                          std::to_string(set.dimension()) +
                          " does not match B with " + std::to_string(m) +
                          " columns");
  }
  check_boundary(x0, n, "x0");
  check_boundary(xf, n, "xf");
  if (!(sysd.dt > 0.0)) throw ArgumentError("dt must be positive");
  require_valid(set);
  const auto ctrb = controllability_rank(sysd.source);
  if (!ctrb.is_controllable) {
    throw PreconditionError(
        "(A,B) is not controllable (rank " + std::to_string(ctrb.rank) +
        " of " + std::to_string(n) +
        "): normality of the relaxed problem is not certified");
  }

  VariableLayout layout(steps, n, m);
  StandardFormProgram prog;
  const int nvar = layout.total();

  prog.c = Eigen::VectorXd::Zero(nvar);
  for (int k = 0; k < steps; ++k) prog.c(layout.slack(k)) = sysd.dt;

  prog.lower = Eigen::VectorXd::Constant(nvar, -std::numeric_limits<double>::infinity());
  prog.lower.head(layout.input_block_size()).setZero();

  // Equalities: N*n dynamics rows, then x_0 = x0, then x_N = xf.
  const int neq = steps * n + 2 * n;
  std::vector<Eigen::Triplet<double>> eq;
  eq.reserve(static_cast<std::size_t>(steps) * n * (n + 2 * m + 1) + 2 * n);
  prog.eq_rhs = Eigen::VectorXd::Zero(neq);
  for (int k = 0; k < steps; ++k) {
    for (int i = 0; i < n; ++i) {
      const int row = k * n + i;
      eq.emplace_back(row, layout.state(k + 1) + i, 1.0);
      for (int j = 0; j < n; ++j) {
        const double a = sysd.a_d(i, j);
        if (a != 0.0) eq.emplace_back(row, layout.state(k) + j, -a);
      }
      for (int j = 0; j < m; ++j) {
        const double b = sysd.b_d(i, j);
        if (b != 0.0) {
          eq.emplace_back(row, layout.plus(k) + j, -b);
          eq.emplace_back(row, layout.minus(k) + j, b);
        }
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    eq.emplace_back(steps * n + i, layout.state(0) + i, 1.0);
    prog.eq_rhs(steps * n + i) = x0(i);
    eq.emplace_back(steps * n + n + i, layout.state(steps) + i, 1.0);
    prog.eq_rhs(steps * n + n + i) = xf(i);
  }
  prog.eq.resize(neq, nvar);
  prog.eq.setFromTriplets(eq.begin(), eq.end());
  prog.eq.makeCompressed();

  // Inequalities: N epigraph rows, then N cap rows.
  std::vector<Eigen::Triplet<double>> in;
  in.reserve(static_cast<std::size_t>(steps) * (2 * m + 2));
  prog.ineq_rhs = Eigen::VectorXd::Zero(2 * steps);
  for (int k = 0; k < steps; ++k) {
    for (int j = 0; j < m; ++j) {
      in.emplace_back(k, layout.plus(k) + j, 1.0);
      in.emplace_back(k, layout.minus(k) + j, 1.0);
    }
    in.emplace_back(k, layout.slack(k), -1.0);
    in.emplace_back(steps + k, layout.slack(k), 1.0);
    prog.ineq_rhs(steps + k) = set.u_max();
  }
  prog.ineq.resize(2 * steps, nvar);
  prog.ineq.setFromTriplets(in.begin(), in.end());
  prog.ineq.makeCompressed();

  return TranscribedProblem{sysd, set, x0, xf, layout, std::move(prog)};
}

double default_tol_comp(const DiscreteInputSet& set) {
  return 1e-6 * std::max(1.0, set.u_max());
}

Solution extract_solution(const TranscribedProblem& prob,
                          const Eigen::VectorXd& z) {
  return extract_solution(prob, z, default_tol_comp(prob.set));
}

Solution extract_solution(const TranscribedProblem& prob,
                          const Eigen::VectorXd& z, double tol_comp) {
  const auto& layout = prob.layout;
  if (z.size() != layout.total()) {
    throw StructuralError("primal vector has length " + std::to_string(z.size()) +
                          ", layout needs " + std::to_string(layout.total()));
  }
  const int steps = layout.steps();
  const int m = layout.inputs();
  const int n = layout.states();

  Solution sol;
  sol.dt = prob.sysd.dt;
  sol.u.reserve(static_cast<std::size_t>(steps));
  sol.nu.reserve(static_cast<std::size_t>(steps));
  sol.x.reserve(static_cast<std::size_t>(steps) + 1);
  double nu_sum = 0.0;
  for (int k = 0; k < steps; ++k) {
    const auto up = z.segment(layout.plus(k), m);
    const auto um = z.segment(layout.minus(k), m);
    Eigen::VectorXd u = up - um;
    const double nu = z(layout.slack(k));
    for (int j = 0; j < m; ++j) {
      const double both = std::min(up(j), um(j));
      if (both > tol_comp) {
        sol.flags.push_back({FlagKind::BothSplitsActive, k, j, both});
      }
    }
    const double gap = nu - u.lpNorm<1>();
    sol.max_slack_gap = std::max(sol.max_slack_gap, gap);
    if (gap > tol_comp) sol.flags.push_back({FlagKind::SlackGap, k, -1, gap});
    nu_sum += nu;
    sol.u.push_back(std::move(u));
    sol.nu.push_back(nu);
  }
  for (int k = 0; k <= steps; ++k) sol.x.push_back(z.segment(layout.state(k), n));
  sol.cost = sol.dt * nu_sum;
  return sol;
}

Solution solve_transcribed(const TranscribedProblem& prob,
                           const SolverOptions& opts, LpResult* raw) {
  LpResult r = solve_lp(prob.program, opts);
  Solution sol;
  if (r.primal.size() == prob.layout.total() &&
      r.status != SolveStatus::DualInfeasible) {
    sol = extract_solution(prob, r.primal);
  }
  sol.dt = prob.sysd.dt;
  sol.status = r.status;
  sol.solve_time = r.solve_time;
  if (raw) *raw = std::move(r);
  return sol;
}

}  // namespace lcvx
