#include <cmath>

#include <gtest/gtest.h>

#include "lcvx/analysis.hpp"
#include "lcvx/errors.hpp"
#include "lcvx/harness.hpp"
#include "lcvx/oracle.hpp"
#include "random_instances.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;
using lcvx::DiscreteInputSet;
using lcvx::LtiSystem;
using lcvx::OracleConfig;

namespace {

LtiSystem double_integrator() {
  MatrixXd a(2, 2);
  a << 0, 1, 0, 0;
  MatrixXd b(2, 1);
  b << 0, 1;
  return LtiSystem(a, b);
}

VectorXd v2(double x, double y) {
  VectorXd v(2);
  v << x, y;
  return v;
}

struct Brute {
  bool feasible = false;
  double cost = std::numeric_limits<double>::infinity();
  std::vector<int> sequence;
};

// Counts through every index sequence in lexicographic order, with no
// pruning and no recursion.
Brute brute_force(const lcvx::DiscretizedSystem& sysd, const DiscreteInputSet& set,
                  const VectorXd& x0, const VectorXd& xf, double tol, bool hands_off = false) {
  const auto& pts = set.points();
  const int base = static_cast<int>(pts.size());
  std::vector<int> seq(static_cast<std::size_t>(sysd.steps), 0);
  Brute best;
  for (;;) {
    VectorXd x = x0;
    double cost = 0.0;
    for (int idx : seq) {
      const auto& u = pts[static_cast<std::size_t>(idx)];
      x = sysd.a_d * x + sysd.b_d * u;
      cost += sysd.dt * (hands_off ? static_cast<double>((u.array().abs() > set.tol_geom()).count())
                                   : u.lpNorm<1>());
    }
    if ((x - xf).norm() <= tol &&
        (!best.feasible || cost < best.cost - 1e-12 * std::max(1.0, std::abs(best.cost)))) {
      best = {true, cost, seq};
    }
    int k = sysd.steps - 1;
    while (k >= 0 && ++seq[static_cast<std::size_t>(k)] == base) seq[static_cast<std::size_t>(k--)] = 0;
    if (k < 0) break;
  }
  return best;
}

}  // namespace

TEST(Oracle, StayingPutCostsNothing) {
  const auto sysd = lcvx::zoh_discretize_horizon(double_integrator(), 3.0, 3);
  const auto r = lcvx::enumerate_optimal(sysd, DiscreteInputSet(1, 1.0), v2(0, 0), v2(0, 0), {});
  ASSERT_TRUE(r.feasible);
  EXPECT_EQ(r.cost, 0.0);
  EXPECT_EQ(r.sequence, (std::vector<int>{0, 0, 0}));
  EXPECT_EQ(r.terminal_error, 0.0);
}

TEST(Oracle, UnreachableTarget) {
  const auto sysd = lcvx::zoh_discretize_horizon(double_integrator(), 2.0, 2);
  const auto r =
      lcvx::enumerate_optimal(sysd, DiscreteInputSet(1, 1.0), v2(0.5, 1.0), v2(0, 0), {});
  EXPECT_FALSE(r.feasible);
  EXPECT_TRUE(std::isinf(r.cost));
  EXPECT_EQ(r.leaves, 9u);
}

TEST(Oracle, TwoStepStop) {
  const auto sysd = lcvx::zoh_discretize_horizon(double_integrator(), 2.0, 2);
  const auto r =
      lcvx::enumerate_optimal(sysd, DiscreteInputSet(1, 1.0), v2(-1.0, 0.0), v2(0, 0), {});
  ASSERT_TRUE(r.feasible);
  ASSERT_EQ(r.controls.size(), 2u);
  EXPECT_EQ(r.controls[0](0), 1.0);
  EXPECT_EQ(r.controls[1](0), -1.0);
  EXPECT_DOUBLE_EQ(r.cost, 2.0);
}

TEST(Oracle, MatchesBruteForce) {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const auto inst = lcvx::testing::random_instance(seed, 4, 2.0);
    const auto sysd = lcvx::zoh_discretize_horizon(inst.sys, inst.horizon, inst.steps);
    OracleConfig cfg;
    const auto r = lcvx::enumerate_optimal(sysd, inst.set, inst.x0, inst.xf, cfg);
    const auto b = brute_force(sysd, inst.set, inst.x0, inst.xf, cfg.terminal_tol);
    ASSERT_TRUE(b.feasible) << seed;
    ASSERT_TRUE(r.feasible) << seed;
    EXPECT_EQ(r.cost, b.cost) << seed;
    EXPECT_EQ(r.sequence, b.sequence) << seed;

    cfg.objective = lcvx::OracleObjective::HandsOff;
    const auto rh = lcvx::enumerate_optimal(sysd, inst.set, inst.x0, inst.xf, cfg);
    const auto bh = brute_force(sysd, inst.set, inst.x0, inst.xf, cfg.terminal_tol, true);
    EXPECT_EQ(rh.cost, bh.cost) << seed;
    EXPECT_EQ(rh.sequence, bh.sequence) << seed;
  }
}

TEST(Oracle, PruningAndThreadsDoNotChangeTheAnswer) {
  for (std::uint64_t seed = 20; seed < 26; ++seed) {
    const auto inst = lcvx::testing::random_instance(seed, 5, 2.5);
    const auto sysd = lcvx::zoh_discretize_horizon(inst.sys, inst.horizon, inst.steps);
    OracleConfig cfg;
    const auto pruned = lcvx::enumerate_optimal(sysd, inst.set, inst.x0, inst.xf, cfg);
    cfg.prune = false;
    const auto full = lcvx::enumerate_optimal(sysd, inst.set, inst.x0, inst.xf, cfg);
    cfg.prune = true;
    cfg.threads = 4;
    const auto threaded = lcvx::enumerate_optimal(sysd, inst.set, inst.x0, inst.xf, cfg);
    EXPECT_EQ(pruned.cost, full.cost) << seed;
    EXPECT_EQ(pruned.sequence, full.sequence) << seed;
    EXPECT_EQ(pruned.sequence, threaded.sequence) << seed;
    EXPECT_LE(pruned.leaves, full.leaves);
    EXPECT_EQ(full.leaves,
              static_cast<std::uint64_t>(std::pow(inst.set.points().size(), inst.steps)));
  }
}

TEST(Oracle, LooserTerminalToleranceNeverCostsMore) {
  const auto inst = lcvx::testing::random_instance(31, 5, 3.0);
  const auto sysd = lcvx::zoh_discretize_horizon(inst.sys, inst.horizon, inst.steps);
  VectorXd target = inst.xf;
  target(0) += 0.05;  // off the reachable lattice point
  double prev = std::numeric_limits<double>::infinity();
  for (double tol : {0.06, 0.2, 1.0, 10.0}) {
    OracleConfig cfg;
    cfg.terminal_tol = tol;
    const auto r = lcvx::enumerate_optimal(sysd, inst.set, inst.x0, target, cfg);
    ASSERT_TRUE(r.feasible) << tol;
    EXPECT_LE(r.terminal_error, tol);
    EXPECT_LE(r.cost, prev);
    prev = r.cost;
  }
}

TEST(Oracle, RefusesHugeSearches) {
  const auto sysd = lcvx::zoh_discretize_horizon(double_integrator(), 10.0, 30);
  OracleConfig cfg;
  cfg.max_nodes = 1000;
  try {
    lcvx::enumerate_optimal(sysd, DiscreteInputSet(1, 1.0), v2(0, 0), v2(0, 0), cfg);
    FAIL() << "expected OracleRefused";
  } catch (const lcvx::OracleRefused& e) {
    EXPECT_DOUBLE_EQ(e.required_nodes(), std::pow(3.0, 30));
  }
  cfg.terminal_tol = 0.0;
  EXPECT_THROW(cfg.check(), lcvx::ArgumentError);
  EXPECT_THROW(lcvx::enumerate_optimal(sysd, DiscreteInputSet(2, 1.0), v2(0, 0), v2(0, 0), {}),
               lcvx::StructuralError);
}

TEST(Certification, Rule) {
  EXPECT_TRUE(lcvx::losslessness_certified(2.0, 2.0, 0.0, 1e-9));
  EXPECT_TRUE(lcvx::losslessness_certified(2.0, 2.05, 0.1, 1e-9));
  // A perturbed, more expensive sequence must not certify.
  EXPECT_FALSE(lcvx::losslessness_certified(2.0, 2.5, 0.1, 1e-9));
  // A candidate below the LP bound breaks the lower-bound property.
  EXPECT_FALSE(lcvx::losslessness_certified(2.0, 1.9, 0.1, 1e-9));
}

TEST(Certification, DoubleIntegratorCertifies) {
  const auto sysd = lcvx::zoh_discretize_horizon(double_integrator(), 4.0, 8);
  lcvx::SolverOptions o;
  o.tol_feas = o.tol_gap = 1e-10;
  const auto rep =
      lcvx::verify_losslessness(sysd, DiscreteInputSet(1, 1.0), v2(0, 0), v2(3, 0), {}, o);
  EXPECT_NEAR(rep.lp_cost, 2.0, 1e-8);
  EXPECT_DOUBLE_EQ(rep.oracle_cost, 2.0);
  EXPECT_TRUE(rep.lower_bound_holds);
  EXPECT_TRUE(rep.certified);
}

TEST(Certification, CoarseGridGapIsReportedNotHidden) {
  const auto sysd = lcvx::zoh_discretize_horizon(double_integrator(), 4.0, 16);
  lcvx::SolverOptions o;
  o.tol_feas = o.tol_gap = 1e-10;
  const auto rep =
      lcvx::verify_losslessness(sysd, DiscreteInputSet(1, 1.0), v2(0.5, 0), v2(0, 0), {}, o);
  EXPECT_TRUE(rep.lower_bound_holds);
  EXPECT_FALSE(rep.certified);
  EXPECT_NEAR(rep.gap, 0.5 - 4.0 / 15.0, 1e-7);
}

TEST(Certification, SuiteInstancesCertify) {
  lcvx::SolverOptions o;
  o.tol_feas = o.tol_gap = 1e-10;
  for (const auto& inst : lcvx::double_integrator_suite(8, 6, 1)) {
    const auto rep = lcvx::verify_losslessness(inst.sysd, inst.set, inst.x0, inst.xf, {}, o);
    EXPECT_TRUE(rep.lower_bound_holds) << inst.index;
    EXPECT_TRUE(rep.certified) << inst.index << " lp " << rep.lp_cost << " oracle "
                               << rep.oracle_cost;
  }
}
