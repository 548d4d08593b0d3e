#pragma once

#include <Eigen/Dense>

#include "lcvx/inputset.hpp"
#include "lcvx/linsys.hpp"

namespace lcvx {

/// Chief on a circular orbit; the chaser's relative motion follows the
/// Clohessy-Wiltshire equations with mean motion sqrt(mu / R^3).
struct RendezvousScenario {
  double orbit_radius = 7102.8e3;    // m
  double mu = 3.986004418e14;        // m^3/s^2
  double u_max = 1.0;                // m/s^2

  double mean_motion() const;
  void check() const;
};

/// State (r, v) in R^6, input is acceleration in R^3.
LtiSystem cw_system(const RendezvousScenario& s);

/// 15-point thruster set: 0, +-u_max e_i, +-(u_max/2)(e_i + e_j),
/// +-(u_max/3)(1, 1, 1).
DiscreteInputSet cw_input_set(double u_max);

/// Extra (non-axis) points of cw_input_set.
std::vector<Eigen::VectorXd> cw_shared_thrust_points(double u_max);

}  // namespace lcvx
