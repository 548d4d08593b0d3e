// Acceptance suite: runs each criterion end to end and prints one PASS/FAIL
// line per criterion. Criteria can be selected by name on the command line
// (e.g. `lcvx_acceptance AC1 AC4`); with no arguments all of them run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dense_simplex.hpp"
#include "lcvx/analysis.hpp"
#include "lcvx/harness.hpp"
#include "lcvx/inputset.hpp"
#include "lcvx/linsys.hpp"
#include "lcvx/oracle.hpp"
#include "lcvx/rng.hpp"
#include "lcvx/scenario.hpp"
#include "lcvx/transcription.hpp"
#include "random_instances.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Verdict {
  bool pass = false;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Average ranks, ties sharing the mean of their positions.
std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * static_cast<double>(i + j) + 1.0;
    i = j + 1;
  }
  return r;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

std::string data_file(const char* name) { return std::string(LCVX_DATA_DIR) + "/" + name; }

Verdict ac1_rendezvous() {
  const auto spec = lcvx::read_problem_file(data_file("rendezvous_vi_a.json"));
  const Stopwatch clock;
  const auto out = lcvx::run_solve(spec);
  const double elapsed = clock.seconds();
  const bool optimal = out.solution.status == lcvx::SolveStatus::Optimal;
  const double d_bar = out.discreteness ? out.discreteness->d_bar : INFINITY;
  const bool certified = out.certificate && out.certificate->certified;
  const double residual_bound = 1e-6 * spec.x0.norm();
  Verdict v;
  v.pass = optimal && out.terminal_residual <= residual_bound && d_bar / spec.u_max <= 0.02 &&
           certified && elapsed <= 10.0;
  v.detail = fmt("status=%s residual=%.2e (<= %.2e) d_bar=%.5f cert=%d iters=%d time=%.3fs",
                 std::string(lcvx::to_string(out.solution.status)).c_str(), out.terminal_residual,
                 residual_bound, d_bar, certified, out.iterations, elapsed);
  return v;
}

// Ten ICs from the (r, v) box, N = 100..1000. The diminishing-returns ratio
// is taken on the d_bar curve averaged over the ICs, since a single IC's
// curve is dominated by per-point noise once d_bar is small.
Verdict ac2_grid_sweep() {
  const Stopwatch clock;
  const lcvx::RendezvousScenario scenario;
  lcvx::MonteCarloConfig cfg;
  std::vector<int> n_list;
  for (int n = 100; n <= 1000; n += 100) n_list.push_back(n);
  const std::vector<double> n_real(n_list.begin(), n_list.end());

  std::vector<double> mean_curve(n_list.size(), 0.0);
  double worst_rho = -1.0;
  bool all_solved = true;
  const int ics = 10;
  for (int ic = 0; ic < ics; ++ic) {
    const auto spec = lcvx::rendezvous_problem(scenario, lcvx::sample_initial_state(cfg, ic),
                                               cfg.horizon, n_list.front());
    const auto rows = lcvx::run_sweep(spec, n_list);
    std::vector<double> d;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      // A bang-bang certification miss still carries a valid d_bar.
      all_solved = all_solved && (rows[i].exit_code == lcvx::kExitSuccess ||
                                  rows[i].exit_code == lcvx::kExitCertification);
      d.push_back(rows[i].d_bar);
      mean_curve[i] += rows[i].d_bar / ics;
    }
    worst_rho = std::max(worst_rho, spearman(n_real, d));
  }
  const auto at = [&](int n) {
    return mean_curve[static_cast<std::size_t>(std::find(n_list.begin(), n_list.end(), n) -
                                               n_list.begin())];
  };
  const double early = at(100) - at(400);
  const double late = at(400) - at(1000);
  const double ratio = late / early;
  const double elapsed = clock.seconds();
  Verdict v;
  v.pass = all_solved && worst_rho <= -0.5 && early > 0.0 && ratio <= 0.5 && elapsed <= 900.0;
  v.detail = fmt("solved=%d worst_rho=%.3f mean_d_bar(100,400,1000)=(%.5f,%.5f,%.5f) "
                 "late/early=%.3f time=%.1fs",
                 all_solved, worst_rho, at(100), at(400), at(1000), ratio, elapsed);
  return v;
}

Verdict ac3_montecarlo() {
  const lcvx::RendezvousScenario scenario;
  lcvx::MonteCarloConfig cfg;
  cfg.samples = 100;
  cfg.horizon = 300.0;
  cfg.steps = 400;
  cfg.jobs = 1;
  const auto summary = lcvx::run_montecarlo(cfg, scenario);
  int optimal = 0;
  for (const auto& r : summary.records) optimal += r.status == "Optimal";
  const double mean_ratio = summary.mean_d_bar / scenario.u_max;
  Verdict v;
  v.pass = optimal == cfg.samples && mean_ratio <= 0.05 && summary.max_solve_time <= 1.0;
  v.detail = fmt("optimal=%d/%d mean_d_bar/u_max=%.5f max_solve=%.3fs mean_solve=%.3fs", optimal,
                 cfg.samples, mean_ratio, summary.max_solve_time, summary.mean_solve_time);
  return v;
}

struct SuiteRun {
  int total = 0;
  int bound_held = 0;
  int certified = 0;
  int hands_off_match = 0;
  double worst_lower_bound = -INFINITY;  // max(lp - oracle)
};

// Criteria 4 and 8 share the same instances and LP solves.
const SuiteRun& oracle_suite() {
  static const SuiteRun run = [] {
    SuiteRun s;
    lcvx::SolverOptions opts;
    opts.tol_feas = opts.tol_gap = 1e-10;
    for (int steps : {8, 12, 16}) {
      for (const auto& inst : lcvx::double_integrator_suite(steps, 20, 1)) {
        lcvx::OracleConfig cfg;
        const auto rep = lcvx::verify_losslessness(inst.sysd, inst.set, inst.x0, inst.xf, cfg, opts);
        ++s.total;
        s.worst_lower_bound = std::max(s.worst_lower_bound, rep.lp_cost - rep.oracle_cost);
        s.bound_held += rep.lp_cost <= rep.oracle_cost + 1e-9;
        s.certified += rep.certified;

        cfg.objective = lcvx::OracleObjective::HandsOff;
        const auto hands_off = lcvx::enumerate_optimal(inst.sysd, inst.set, inst.x0, inst.xf, cfg);
        if (hands_off.feasible && rep.lp_solution.status == lcvx::SolveStatus::Optimal) {
          const double measured =
              lcvx::hands_off_measure(rep.lp_solution, lcvx::default_tol_vertex(inst.set));
          s.hands_off_match += std::abs(measured - hands_off.cost) <= inst.sysd.dt + 1e-12;
        }
      }
    }
    return s;
  }();
  return run;
}

Verdict ac4_losslessness() {
  const Stopwatch clock;
  const auto& s = oracle_suite();
  const double elapsed = clock.seconds();
  const double rate = static_cast<double>(s.certified) / s.total;
  Verdict v;
  v.pass = s.bound_held == s.total && rate >= 0.95 && elapsed <= 300.0;
  v.detail = fmt("instances=%d lower_bound=%d/%d max(lp-oracle)=%.2e certified=%d (%.1f%%) "
                 "time=%.1fs",
                 s.total, s.bound_held, s.total, s.worst_lower_bound, s.certified, 100.0 * rate,
                 elapsed);
  return v;
}

Verdict ac5_bang_bang() {
  const int count = 200;
  int solved = 0, on_vertices = 0, near_w = 0;
  double worst_gap_ratio = 0.0;
  for (int i = 0; i < count; ++i) {
    const auto inst = lcvx::testing::random_instance(1000 + static_cast<std::uint64_t>(i));
    const auto prob = lcvx::transcribe(inst.sys, inst.set, inst.x0, inst.xf, inst.horizon,
                                       inst.steps);
    const auto sol = lcvx::solve_transcribed(prob);
    if (sol.status != lcvx::SolveStatus::Optimal) continue;
    ++solved;
    const auto cert = lcvx::verify_bang_bang(inst.set, sol);
    on_vertices += cert.fraction_on_vertices >= 0.95;
    const double u_max = inst.set.u_max();
    for (std::size_t k = 0; k < sol.u.size(); ++k) {
      worst_gap_ratio = std::max(worst_gap_ratio, (sol.nu[k] - sol.u[k].lpNorm<1>()) / u_max);
    }
    // W points of a random instance lie strictly inside the 1-ball, so none
    // of them is a vertex of the hull.
    const double tol_vertex = lcvx::default_tol_vertex(inst.set);
    for (const auto& u : sol.u) {
      for (const auto& w : inst.set.extra()) near_w += (u - w).norm() <= tol_vertex;
    }
  }
  const double rate = static_cast<double>(on_vertices) / count;
  Verdict v;
  v.pass = solved == count && rate >= 0.99 && worst_gap_ratio <= 1e-6 && near_w == 0;
  v.detail = fmt("solved=%d/%d fraction>=0.95 on %d (%.1f%%) max_slack_gap/u_max=%.2e "
                 "steps_near_W=%d",
                 solved, count, on_vertices, 100.0 * rate, worst_gap_ratio, near_w);
  return v;
}

Verdict ac6_geometry() {
  int agree_formula = 0, agree_lp = 0, points_checked = 0;
  const int count = 100;
  for (int t = 0; t < count; ++t) {
    lcvx::CounterRng rng(77, static_cast<std::uint64_t>(t));
    const int m = 1 + t % 4;
    const double u_max = 0.25 + 4.0 * rng.uniform();
    std::vector<VectorXd> w;
    const int extra = static_cast<int>(rng.uniform() * 9.0);
    for (int i = 0; i < extra; ++i) {
      if (rng.uniform() < 0.4) {
        // Point on the boundary of the 1-ball, off the axes when m > 1.
        VectorXd p = VectorXd::Zero(m);
        for (int j = 0; j < m; ++j) p(j) = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform();
        if (p.lpNorm<1>() == 0.0) p(0) = 1.0;
        w.push_back(p * (u_max / p.lpNorm<1>()));
      } else {
        w.push_back(lcvx::testing::interior_point(rng, m, u_max));
      }
    }
    const lcvx::DiscreteInputSet set(m, u_max, w);
    const auto hull = lcvx::hull_extreme_points(set);

    const auto key = [](const VectorXd& p) { return std::vector<double>(p.data(), p.data() + p.size()); };
    std::set<std::vector<double>> got, axes, by_lp;
    for (const auto& p : hull) got.insert(key(p));
    for (const auto& p : lcvx::CrossPolytope(m, u_max).vertices()) axes.insert(key(p));
    const auto& pts = set.points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      ++points_checked;
      if (lcvx::testing::is_extreme_point(pts, i)) by_lp.insert(key(pts[i]));
    }
    agree_formula += got == axes && hull.size() == axes.size();
    agree_lp += got == by_lp;
  }
  Verdict v;
  v.pass = agree_formula == count && agree_lp == count;
  v.detail = fmt("sets=%d equals_axis_vertices=%d lp_oracle_agreement=%d points_tested=%d", count,
                 agree_formula, agree_lp, points_checked);
  return v;
}

double rel(const MatrixXd& got, const MatrixXd& want) {
  return (got - want).norm() / std::max(1.0, want.norm());
}

Verdict ac7_kernels() {
  double worst_semigroup = 0.0, worst_inverse = 0.0, worst_nilpotent = 0.0, worst_diagonal = 0.0;
  const int count = 100;
  for (int t = 0; t < count; ++t) {
    lcvx::CounterRng rng(91, static_cast<std::uint64_t>(t));
    const int n = 1 + static_cast<int>(rng.uniform() * 6.0);
    const int m = 1 + static_cast<int>(rng.uniform() * 3.0);
    MatrixXd a(n, n), b(n, m);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) a(i, j) = lcvx::testing::normal(rng);
      for (int j = 0; j < m; ++j) b(i, j) = lcvx::testing::normal(rng);
    }
    // Even draws are shifted to be Hurwitz, odd draws to have an unstable mode.
    const double alpha = Eigen::EigenSolver<MatrixXd>(a).eigenvalues().real().maxCoeff();
    const double shift = t % 2 == 0 ? -(alpha + 0.1 + rng.uniform()) : (0.1 + rng.uniform()) - alpha;
    a += shift * MatrixXd::Identity(n, n);
    const double norm = a.operatorNorm();
    const double dt = (0.05 + 2.45 * rng.uniform()) / std::max(norm, 1e-12);  // ||A|| * 2dt <= 5
    const lcvx::LtiSystem sys(a, b);

    const auto one = lcvx::zoh_discretize(sys, dt);
    const auto two = lcvx::zoh_discretize(sys, 2.0 * dt);
    worst_semigroup = std::max(worst_semigroup, rel(one.a_d * one.a_d, two.a_d));
    worst_semigroup = std::max(worst_semigroup, rel(one.a_d * one.b_d + one.b_d, two.b_d));

    const MatrixXd m_t = a * (2.0 * dt);
    const MatrixXd prod = lcvx::matrix_exponential(m_t) * lcvx::matrix_exponential(-m_t);
    worst_inverse = std::max(worst_inverse, rel(prod, MatrixXd::Identity(n, n)));
  }

  // Nilpotent shift: exp(tJ) has entries t^k / k! on the k-th superdiagonal.
  for (int n = 2; n <= 6; ++n) {
    for (double tt : {0.25, 1.0, 3.0}) {
      MatrixXd j = MatrixXd::Zero(n, n);
      for (int i = 0; i + 1 < n; ++i) j(i, i + 1) = 1.0;
      MatrixXd want = MatrixXd::Zero(n, n);
      for (int r = 0; r < n; ++r) {
        for (int c = r; c < n; ++c) want(r, c) = std::pow(tt, c - r) / std::tgamma(c - r + 1.0);
      }
      worst_nilpotent = std::max(worst_nilpotent, rel(lcvx::matrix_exponential(tt * j), want));
    }
  }
  for (int t = 0; t < 20; ++t) {
    lcvx::CounterRng rng(92, static_cast<std::uint64_t>(t));
    const int n = 1 + t % 5;
    VectorXd d(n);
    for (int i = 0; i < n; ++i) d(i) = rng.uniform(-5.0, 5.0);
    const MatrixXd want = d.array().exp().matrix().asDiagonal();
    const MatrixXd got = lcvx::matrix_exponential(d.asDiagonal().toDenseMatrix());
    worst_diagonal = std::max(worst_diagonal, (got - want).cwiseAbs().maxCoeff() /
                                                  want.diagonal().cwiseAbs().maxCoeff());
  }

  const double exact = 8.0 * kEps;
  Verdict v;
  v.pass = worst_semigroup <= 1e-10 && worst_inverse <= 1e-10 && worst_nilpotent <= exact &&
           worst_diagonal <= exact;
  v.detail = fmt("semigroup=%.2e inverse=%.2e nilpotent=%.2e diagonal=%.2e (exact bound %.1e)",
                 worst_semigroup, worst_inverse, worst_nilpotent, worst_diagonal, exact);
  return v;
}

Verdict ac8_hands_off() {
  const auto& s = oracle_suite();
  const double rate = static_cast<double>(s.hands_off_match) / s.total;
  Verdict v;
  v.pass = rate >= 0.90;
  v.detail = fmt("within_dt=%d/%d (%.1f%%)", s.hands_off_match, s.total, 100.0 * rate);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"AC1", ac1_rendezvous}, {"AC2", ac2_grid_sweep}, {"AC3", ac3_montecarlo},
      {"AC4", ac4_losslessness}, {"AC5", ac5_bang_bang}, {"AC6", ac6_geometry},
      {"AC7", ac7_kernels},    {"AC8", ac8_hands_off},
  };
  std::set<std::string> selected(argv + 1, argv + argc);
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    if (!selected.empty() && !selected.contains(name)) continue;
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += !v.pass;
    std::printf("%s %s  %s\n", name.c_str(), v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
