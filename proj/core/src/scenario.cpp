#include "lcvx/scenario.hpp"

#include <cmath>

#include "lcvx/errors.hpp"

namespace lcvx {

double RendezvousScenario::mean_motion() const {
  return std::sqrt(mu / (orbit_radius * orbit_radius * orbit_radius));
}

void RendezvousScenario::check() const {
  if (!(orbit_radius > 0.0) || !(mu > 0.0)) {
    throw ArgumentError("orbit radius and mu must be positive");
  }
  if (!(u_max > 0.0) || !std::isfinite(u_max)) {
    throw ArgumentError("u_max must be positive and finite");
  }
}

LtiSystem cw_system(const RendezvousScenario& s) {
  s.check();
  const double n = s.mean_motion();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(6, 6);
  a.topRightCorner(3, 3).setIdentity();
  a(3, 0) = 3.0 * n * n;
  a(3, 4) = 2.0 * n;
  a(4, 3) = -2.0 * n;
  a(5, 2) = -n * n;
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(6, 3);
  b.bottomRows(3).setIdentity();
  return LtiSystem(a, b);
}

std::vector<Eigen::VectorXd> cw_shared_thrust_points(double u_max) {
  std::vector<Eigen::VectorXd> w;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      Eigen::VectorXd p = Eigen::VectorXd::Zero(3);
      p(i) = p(j) = 0.5 * u_max;
      w.push_back(p);
      w.push_back(-p);
    }
  }
  const Eigen::VectorXd all = Eigen::VectorXd::Constant(3, u_max / 3.0);
  w.push_back(all);
  w.push_back(-all);
  return w;
}

DiscreteInputSet cw_input_set(double u_max) {
  return DiscreteInputSet(3, u_max, cw_shared_thrust_points(u_max));
}

}  // namespace lcvx
