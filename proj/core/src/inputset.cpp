#include "lcvx/inputset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <utility>

#include "lcvx/errors.hpp"

namespace lcvx {

namespace {

Eigen::VectorXd axis_point(int m, int axis, double value) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(m);
  p(axis) = value;
  return p;
}

void require_dimension(const DiscreteInputSet& set, const Eigen::VectorXd& u) {
  if (u.size() != set.dimension()) {
    throw ArgumentError("point has dimension " + std::to_string(u.size()) +
                        ", input set has dimension " +
                        std::to_string(set.dimension()));
  }
}

}  // namespace

DiscreteInputSet::DiscreteInputSet(int m, double u_max,
                                   std::vector<Eigen::VectorXd> extra)
    : m_(m), u_max_(u_max), extra_(std::move(extra)) {
  if (m_ < 1) throw StructuralError("input dimension m must be >= 1");
  if (!(u_max_ > 0.0) || !std::isfinite(u_max_)) {
    throw StructuralError("u_max must be positive and finite");
  }
  for (std::size_t i = 0; i < extra_.size(); ++i) {
    if (extra_[i].size() != m_) {
      throw StructuralError("W[" + std::to_string(i) + "] has dimension " +
                            std::to_string(extra_[i].size()) + ", expected " +
                            std::to_string(m_));
    }
    if (!extra_[i].allFinite()) {
      throw StructuralError("W[" + std::to_string(i) +
                            "] has non-finite entries");
    }
  }

  points_.reserve(1 + 2 * static_cast<std::size_t>(m_) + extra_.size());
  points_.push_back(Eigen::VectorXd::Zero(m_));
  for (int i = 0; i < m_; ++i) {
    points_.push_back(axis_point(m_, i, u_max_));
    points_.push_back(axis_point(m_, i, -u_max_));
  }
  const double tol = tol_geom();
  for (const auto& w : extra_) {
    const bool duplicate = std::any_of(
        points_.begin(), points_.end(),
        [&](const Eigen::VectorXd& p) { return (p - w).norm() <= tol; });
    if (duplicate) {
      ++duplicates_dropped_;
    } else {
      points_.push_back(w);
    }
  }
}

double DiscreteInputSet::tol_geom() const {
  return 1e-9 * std::max(1.0, u_max_);
}

CrossPolytope::CrossPolytope(int m, double radius) : m_(m), radius_(radius) {
  if (m_ < 1) throw StructuralError("cross-polytope dimension must be >= 1");
  if (!(radius_ > 0.0) || !std::isfinite(radius_)) {
    throw StructuralError("cross-polytope radius must be positive");
  }
}

bool CrossPolytope::contains(const Eigen::VectorXd& u, double tol) const {
  return u.size() == m_ && u.lpNorm<1>() <= radius_ + tol;
}

std::vector<Eigen::VectorXd> CrossPolytope::vertices() const {
  std::vector<Eigen::VectorXd> v;
  v.reserve(2 * static_cast<std::size_t>(m_));
  for (int i = 0; i < m_; ++i) {
    v.push_back(axis_point(m_, i, radius_));
    v.push_back(axis_point(m_, i, -radius_));
  }
  return v;
}

ValidationReport validate(const DiscreteInputSet& set) {
  ValidationReport report;
  const double tol = set.tol_geom();
  const CrossPolytope ball(set.dimension(), set.u_max());
  for (std::size_t i = 0; i < set.extra().size(); ++i) {
    const auto& w = set.extra()[i];
    if (!ball.contains(w, tol)) {
      report.violations.push_back({i, w, w.lpNorm<1>()});
    }
  }

  // The constructor always inserts the axis vertices; check them anyway so the
  // report stands on the point list alone.
  report.axis_vertices_present = true;
  for (const auto& v : ball.vertices()) {
    const bool found = std::any_of(
        set.points().begin(), set.points().end(),
        [&](const Eigen::VectorXd& p) { return (p - v).norm() <= tol; });
    report.axis_vertices_present = report.axis_vertices_present && found;
  }

  report.point_count = set.points().size();
  report.duplicates_dropped = set.duplicates_dropped();
  report.valid = report.violations.empty() && report.axis_vertices_present;

  std::ostringstream msg;
  if (report.valid) {
    msg << "valid: " << report.point_count
        << " points, conv(U) is the cross-polytope of radius " << set.u_max();
  } else {
    msg << "invalid:";
    for (const auto& v : report.violations) {
      msg << " W[" << v.index << "] has ||w||_1 = " << v.norm1 << " > "
          << set.u_max() << ";";
    }
    if (!report.axis_vertices_present) msg << " missing axis vertices;";
  }
  report.summary = msg.str();
  return report;
}

void require_valid(const DiscreteInputSet& set) {
  const auto report = validate(set);
  if (!report.valid) throw ValidationError("input set " + report.summary);
}

std::vector<Eigen::VectorXd> hull_extreme_points(const DiscreteInputSet& set) {
  require_valid(set);
  return CrossPolytope(set.dimension(), set.u_max()).vertices();
}

AugmentedExtremeSet augmented_extreme_points(const DiscreteInputSet& set) {
  require_valid(set);
  const int m = set.dimension();
  AugmentedExtremeSet out;
  out.u_bar = set.u_max();
  out.vertices.push_back(Eigen::VectorXd::Zero(m + 1));
  for (const auto& v : CrossPolytope(m, set.u_max()).vertices()) {
    Eigen::VectorXd p(m + 1);
    p << v, set.u_max();
    out.vertices.push_back(std::move(p));
  }
  return out;
}

std::size_t nearest_point_index(const DiscreteInputSet& set,
                                const Eigen::VectorXd& u) {
  require_dimension(set, u);
  std::size_t best = 0;
  double best_sq = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < set.points().size(); ++i) {
    const double sq = (set.points()[i] - u).squaredNorm();
    if (sq < best_sq) {
      best_sq = sq;
      best = i;
    }
  }
  return best;
}

double distance_to_set(const DiscreteInputSet& set, const Eigen::VectorXd& u) {
  return (set.points()[nearest_point_index(set, u)] - u).norm();
}

Eigen::VectorXd project_to_set(const DiscreteInputSet& set,
                               const Eigen::VectorXd& u) {
  return set.points()[nearest_point_index(set, u)];
}

}  // namespace lcvx
