#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "lcvx/analysis.hpp"
#include "lcvx/inputset.hpp"
#include "lcvx/linsys.hpp"
#include "lcvx/rng.hpp"

namespace lcvx::testing {

struct RandomInstance {
  LtiSystem sys;
  DiscreteInputSet set;
  Eigen::VectorXd x0;
  Eigen::VectorXd xf;
  double horizon = 0.0;
  int steps = 0;
};

inline double normal(CounterRng& rng) {
  // Box-Muller on two uniforms; u1 is kept away from zero.
  const double u1 = 1.0 - rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Random W point strictly inside the 1-ball.
inline Eigen::VectorXd interior_point(CounterRng& rng, int m, double u_max) {
  Eigen::VectorXd w(m);
  double total = -std::log(1.0 - rng.uniform());
  for (int i = 0; i < m; ++i) {
    w(i) = -std::log(1.0 - rng.uniform()) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
    total += std::abs(w(i));
  }
  return w * (0.999 * u_max / total);
}

// Random controllable plant with n <= 4 states and m <= 2 inputs, a random
// valid W, and a target reached by a random U-valued control sequence, so
// the transcribed LP is always feasible.
inline RandomInstance random_instance(std::uint64_t seed, int steps = 120,
                                      double horizon = 6.0) {
  CounterRng rng(seed, 0xA11CE);
  for (int attempt = 0;; ++attempt) {
    const int n = 1 + static_cast<int>(rng.uniform() * 4.0);
    const int m = 1 + static_cast<int>(rng.uniform() * 2.0);
    Eigen::MatrixXd a(n, n);
    Eigen::MatrixXd b(n, m);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) a(i, j) = normal(rng) * 0.6 / std::sqrt(double(n));
      for (int j = 0; j < m; ++j) b(i, j) = normal(rng);
    }
    LtiSystem sys(a, b);
    if (!controllability_rank(sys).is_controllable) continue;
    const double u_max = 0.5 + 1.5 * rng.uniform();
    std::vector<Eigen::VectorXd> w;
    const int count = static_cast<int>(rng.uniform() * 5.0);
    for (int i = 0; i < count; ++i) w.push_back(interior_point(rng, m, u_max));
    DiscreteInputSet set(m, u_max, w);

    Eigen::VectorXd x0(n);
    for (int i = 0; i < n; ++i) x0(i) = 2.0 * rng.uniform() - 1.0;
    const auto sysd = zoh_discretize_horizon(sys, horizon, steps);
    std::vector<Eigen::VectorXd> u;
    const auto& pts = set.points();
    for (int k = 0; k < steps; ++k) {
      // Mostly coast so the target stays cheap to reach.
      const bool burn = rng.uniform() < 0.3;
      u.push_back(burn ? pts[static_cast<std::size_t>(rng.uniform() * pts.size()) % pts.size()]
                       : Eigen::VectorXd::Zero(m));
    }
    Eigen::VectorXd xf = propagate(sysd, x0, u).back();
    return RandomInstance{sys, set, x0, xf, horizon, steps};
  }
}

}  // namespace lcvx::testing
