#include "lcvx/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lcvx/transcription.hpp"

namespace lcvx {

NotOptimalError::NotOptimalError(SolveStatus status)
    : PreconditionError("solution status is " + std::string(to_string(status)) +
                        ", analysis needs Optimal"),
      status_(status) {}

double default_tol_vertex(const DiscreteInputSet& set) {
  return 1e-4 * std::max(1.0, set.u_max());
}

std::vector<Eigen::VectorXd> propagate(const DiscretizedSystem& sysd,
                                       const Eigen::VectorXd& x0,
                                       std::span<const Eigen::VectorXd> u) {
  if (x0.size() != sysd.states()) {
    throw ArgumentError("x0 has dimension " + std::to_string(x0.size()) +
                        ", expected " + std::to_string(sysd.states()));
  }
  std::vector<Eigen::VectorXd> x;
  x.reserve(u.size() + 1);
  x.push_back(x0);
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (u[k].size() != sysd.inputs()) {
      throw ArgumentError("u[" + std::to_string(k) + "] has dimension " +
                          std::to_string(u[k].size()) + ", expected " +
                          std::to_string(sysd.inputs()));
    }
    x.push_back(sysd.a_d * x.back() + sysd.b_d * u[k]);
  }
  return x;
}

double distance_to_augmented_vertices(const DiscreteInputSet& set,
                                      const Eigen::VectorXd& u, double nu) {
  Eigen::VectorXd point(u.size() + 1);
  point << u, nu;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : augmented_extreme_points(set).vertices) {
    best = std::min(best, (point - v).norm());
  }
  return best;
}

namespace {

void require_optimal(const Solution& sol) {
  if (sol.status != SolveStatus::Optimal) throw NotOptimalError(sol.status);
}

void require_consistent(const Solution& sol) {
  if (sol.nu.size() != sol.u.size() || sol.x.size() != sol.u.size() + 1) {
    throw StructuralError("solution trajectories have inconsistent lengths");
  }
}

}  // namespace

DiscretenessReport discreteness_report(const DiscreteInputSet& set,
                                       const Solution& sol,
                                       const DiscretizedSystem& sysd,
                                       const Eigen::VectorXd& xf) {
  return discreteness_report(set, sol, sysd, xf, default_tol_vertex(set));
}

DiscretenessReport discreteness_report(const DiscreteInputSet& set,
                                       const Solution& sol,
                                       const DiscretizedSystem& sysd,
                                       const Eigen::VectorXd& xf,
                                       double tol_vertex) {
  require_optimal(sol);
  require_consistent(sol);
  const auto vertices = augmented_extreme_points(set).vertices;

  DiscretenessReport report;
  const std::size_t steps = sol.u.size();
  report.distances.reserve(steps);
  report.quantized.reserve(steps);
  double sum = 0.0;
  std::size_t on_vertex = 0;
  for (std::size_t k = 0; k < steps; ++k) {
    const auto& u = sol.u[k];
    const std::size_t idx = nearest_point_index(set, u);
    const double d = (set.points()[idx] - u).norm();
    report.distances.push_back(d);
    report.quantized.push_back(set.points()[idx]);
    sum += d;

    Eigen::VectorXd point(u.size() + 1);
    point << u, sol.nu[k];
    double best = std::numeric_limits<double>::infinity();
    for (const auto& v : vertices) best = std::min(best, (point - v).norm());
    if (best <= tol_vertex) {
      ++on_vertex;
    } else {
      report.off_vertex_steps.push_back(static_cast<int>(k));
    }
  }
  if (steps > 0) {
    report.d_bar = sum / static_cast<double>(steps);
    report.fraction_on_vertices =
        static_cast<double>(on_vertex) / static_cast<double>(steps);
  }
  const auto xq = propagate(sysd, sol.x.front(), report.quantized);
  report.quantized_terminal_error = (xq.back() - xf).norm();
  return report;
}

double hands_off_measure(const Solution& sol, double zero_tol) {
  double active = 0.0;
  for (const auto& u : sol.u) {
    active += static_cast<double>((u.array().abs() > zero_tol).count());
  }
  return sol.dt * active;
}

BangBangCertificate verify_bang_bang(const DiscreteInputSet& set,
                                     const Solution& sol,
                                     const BangBangOptions& opts) {
  require_optimal(sol);
  require_consistent(sol);
  const double tol_vertex =
      opts.tol_vertex >= 0.0 ? opts.tol_vertex : default_tol_vertex(set);
  const double tol_comp = opts.tol_comp >= 0.0 ? opts.tol_comp : default_tol_comp(set);
  const auto vertices = augmented_extreme_points(set).vertices;

  BangBangCertificate cert;
  std::size_t on_vertex = 0;
  bool slack_ok = true;
  for (std::size_t k = 0; k < sol.u.size(); ++k) {
    Eigen::VectorXd point(sol.u[k].size() + 1);
    point << sol.u[k], sol.nu[k];
    double best = std::numeric_limits<double>::infinity();
    for (const auto& v : vertices) best = std::min(best, (point - v).norm());
    const double gap = sol.nu[k] - sol.u[k].lpNorm<1>();
    cert.max_slack_gap = std::max(cert.max_slack_gap, gap);
    const bool on = best <= tol_vertex;
    if (on) ++on_vertex;
    if (gap > tol_comp) slack_ok = false;
    if (!on || gap > tol_comp) cert.exceptions.push_back(static_cast<int>(k));
  }
  cert.fraction_on_vertices =
      sol.u.empty() ? 1.0
                    : static_cast<double>(on_vertex) / static_cast<double>(sol.u.size());
  cert.certified = cert.fraction_on_vertices >= opts.threshold && slack_ok;
  return cert;
}

double fuel_cost(std::span<const Eigen::VectorXd> u, double dt) {
  double total = 0.0;
  for (const auto& uk : u) total += uk.lpNorm<1>();
  return dt * total;
}

EdgeNormalityReport edge_normality(const LtiSystem& sys, int inputs) {
  if (inputs != sys.inputs()) {
    throw ArgumentError("edge_normality: input count " + std::to_string(inputs) +
                        " does not match B with " + std::to_string(sys.inputs()) +
                        " columns");
  }
  std::vector<EdgeDirection> edges;
  if (inputs == 1) {
    edges.push_back({0, -1, 1, Eigen::VectorXd::Ones(1)});
  } else {
    for (int i = 0; i < inputs; ++i) {
      for (int j = i + 1; j < inputs; ++j) {
        for (int sign : {1, -1}) {
          Eigen::VectorXd w = Eigen::VectorXd::Zero(inputs);
          w(i) = 1.0;
          w(j) = sign;
          edges.push_back({i, j, sign, std::move(w)});
        }
      }
    }
  }
  EdgeNormalityReport report;
  report.edges_checked = static_cast<int>(edges.size());
  for (auto& e : edges) {
    const LtiSystem single(sys.a(), sys.b() * e.w);
    if (!controllability_rank(single).is_controllable) {
      report.uncontrollable.push_back(std::move(e));
    }
  }
  report.all_edges_controllable = report.uncontrollable.empty();
  return report;
}

}  // namespace lcvx
