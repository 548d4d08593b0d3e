#include "lcvx/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <thread>

#include <Eigen/Core>

#include "lcvx/errors.hpp"
#include "lcvx/rng.hpp"
#include "lcvx/transcription.hpp"

#ifndef LCVX_VERSION
#define LCVX_VERSION "unknown"
#endif

namespace lcvx {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void fail(RunOutcome& out, int code, std::string kind, std::string message) {
  out.exit_code = code;
  out.error_kind = std::move(kind);
  out.error_message = std::move(message);
}

// Shared front half of check and solve. Returns false when the outcome is
// already decided.
bool validate_spec(const ProblemSpec& spec, RunOutcome& out) {
  try {
    const LtiSystem sys = spec.system();
    const DiscreteInputSet set = spec.input_set();
    out.validation = validate(set);
    if (!out.validation.valid) {
      fail(out, kExitValidation, "validation", "input set " + out.validation.summary);
      return false;
    }
    out.controllability = controllability_rank(sys);
    if (!out.controllability->is_controllable) {
      fail(out, kExitValidation, "uncontrollable", out.controllability->note);
      return false;
    }
    out.edge_normality = edge_normality(sys, set.dimension());
  } catch (const std::invalid_argument& e) {
    fail(out, kExitValidation, "structural", e.what());
    return false;
  }
  return true;
}

double mean(std::span<const double> v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

json histogram_json(const Histogram& h) {
  return {{"edges", h.edges}, {"counts", h.counts}};
}

}  // namespace

std::string_view library_version() { return LCVX_VERSION; }

RunOutcome run_check(const ProblemSpec& spec) {
  RunOutcome out;
  if (validate_spec(spec, out)) out.exit_code = kExitSuccess;
  return out;
}

RunOutcome run_solve(const ProblemSpec& spec) {
  const auto t0 = Clock::now();
  RunOutcome out;
  if (!validate_spec(spec, out)) {
    out.total_time = seconds_since(t0);
    return out;
  }
  try {
    spec.solver.check();
    const DiscreteInputSet set = spec.input_set();
    const auto t_transcribe = Clock::now();
    const auto prob = transcribe(spec.system(), set, spec.x0, spec.xf, spec.horizon,
                                 spec.steps);
    out.transcribe_time = seconds_since(t_transcribe);
    out.sysd = prob.sysd;

    LpResult raw;
    out.solution = solve_transcribed(prob, spec.solver, &raw);
    out.iterations = raw.iterations;

    switch (out.solution.status) {
      case SolveStatus::Optimal:
        break;
      case SolveStatus::PrimalInfeasible:
        fail(out, kExitInfeasible, "infeasible",
             "the target is not reachable within the horizon (Farkas certificate found)");
        out.total_time = seconds_since(t0);
        return out;
      default:
        fail(out, kExitSolverFailure, "solver_failure",
             "solver finished with status " + std::string(to_string(out.solution.status)));
        out.total_time = seconds_since(t0);
        return out;
    }

    out.kkt = kkt_report(prob.program, raw);
    const double tol_vertex = default_tol_vertex(set);
    out.discreteness = discreteness_report(set, out.solution, prob.sysd, spec.xf, tol_vertex);
    out.certificate = verify_bang_bang(set, out.solution);
    out.hands_off = hands_off_measure(out.solution, tol_vertex);
    out.terminal_residual = (out.solution.x.back() - spec.xf).norm();
    const auto xp = propagate(prob.sysd, spec.x0, out.solution.u);
    out.propagated_residual = (xp.back() - spec.xf).norm();

    if (!out.certificate->certified) {
      std::string message =
          "recovered control is not bang-bang on ex(U_e): fraction on vertices " +
          std::to_string(out.certificate->fraction_on_vertices);
      if (out.edge_normality && !out.edge_normality->all_edges_controllable) {
        message += "; (A, B w) is uncontrollable along " +
                   std::to_string(out.edge_normality->uncontrollable.size()) +
                   " edge direction(s) of conv(U), so the optimum may lie on a face";
      }
      fail(out, kExitCertification, "certification", message);
    } else {
      out.exit_code = kExitSuccess;
    }
  } catch (const PreconditionError& e) {
    fail(out, kExitValidation, "precondition", e.what());
  } catch (const ValidationError& e) {
    fail(out, kExitValidation, "validation", e.what());
  } catch (const std::invalid_argument& e) {
    fail(out, kExitValidation, "argument", e.what());
  }
  out.total_time = seconds_since(t0);
  return out;
}

void write_solution_csv(std::ostream& os, const RunOutcome& out) {
  const Solution& sol = out.solution;
  if (sol.x.empty()) return;
  const Eigen::Index n = sol.x.front().size();
  const Eigen::Index m = sol.u.empty() ? 0 : sol.u.front().size();
  os << "t";
  for (Eigen::Index i = 0; i < n; ++i) os << ",x" << i + 1;
  for (Eigen::Index j = 0; j < m; ++j) os << ",u" << j + 1;
  os << ",nu,d\n";
  const auto old = os.precision(12);
  for (std::size_t k = 0; k < sol.x.size(); ++k) {
    os << static_cast<double>(k) * sol.dt;
    for (Eigen::Index i = 0; i < n; ++i) os << ',' << sol.x[k](i);
    if (k < sol.u.size()) {
      for (Eigen::Index j = 0; j < m; ++j) os << ',' << sol.u[k](j);
      os << ',' << sol.nu[k] << ',';
      if (out.discreteness) os << out.discreteness->distances[k];
    } else {
      for (Eigen::Index j = 0; j < m; ++j) os << ',';
      os << ",,";
    }
    os << '\n';
  }
  os.precision(old);
}

json report_json(const ProblemSpec& spec, const RunOutcome& out) {
  json r;
  r["status"] = std::string(to_string(out.solution.status));
  r["exit_code"] = out.exit_code;
  if (!out.error_kind.empty()) {
    r["error"] = {{"kind", out.error_kind}, {"message", out.error_message}};
  }
  r["validation"] = {{"valid", out.validation.valid},
                     {"point_count", out.validation.point_count},
                     {"duplicates_dropped", out.validation.duplicates_dropped},
                     {"summary", out.validation.summary}};
  if (out.controllability) {
    r["controllability"] = {{"rank", out.controllability->rank},
                            {"states", out.controllability->states},
                            {"is_controllable", out.controllability->is_controllable},
                            {"tolerance", out.controllability->tolerance},
                            {"note", out.controllability->note}};
  }
  if (out.edge_normality) {
    json edges = json::array();
    for (const auto& e : out.edge_normality->uncontrollable) {
      edges.push_back({{"i", e.i}, {"j", e.j}, {"sign", e.sign}});
    }
    r["edge_normality"] = {{"all_edges_controllable", out.edge_normality->all_edges_controllable},
                           {"edges_checked", out.edge_normality->edges_checked},
                           {"uncontrollable_edges", edges}};
  }
  r["timing"] = {{"solve_time_s", out.solution.solve_time},
                 {"transcribe_time_s", out.transcribe_time},
                 {"total_time_s", out.total_time},
                 {"iterations", out.iterations}};
  if (out.exit_code == kExitSuccess || out.exit_code == kExitCertification) {
    r["cost"] = out.solution.cost;
    r["fuel_from_controls"] = fuel_cost(out.solution.u, out.solution.dt);
    r["hands_off"] = out.hands_off;
    r["terminal_residual"] = out.terminal_residual;
    r["propagated_terminal_residual"] = out.propagated_residual;
    r["max_slack_gap"] = out.solution.max_slack_gap;
    r["extraction_flags"] = out.solution.flags.size();
  }
  if (out.discreteness) {
    r["discreteness"] = {{"d_bar", out.discreteness->d_bar},
                         {"d_bar_over_u_max", out.discreteness->d_bar / spec.u_max},
                         {"fraction_on_vertices", out.discreteness->fraction_on_vertices},
                         {"off_vertex_steps", out.discreteness->off_vertex_steps},
                         {"quantized_terminal_error",
                          out.discreteness->quantized_terminal_error}};
  }
  if (out.certificate) {
    r["bang_bang"] = {{"certified", out.certificate->certified},
                      {"fraction_on_vertices", out.certificate->fraction_on_vertices},
                      {"max_slack_gap", out.certificate->max_slack_gap},
                      {"exceptions", out.certificate->exceptions}};
  }
  if (out.kkt) {
    r["kkt"] = {{"primal_eq", out.kkt->primal_eq},
                {"primal_ineq", out.kkt->primal_ineq},
                {"bound_violation", out.kkt->bound_violation},
                {"dual_residual", out.kkt->dual_residual},
                {"dual_sign", out.kkt->dual_sign},
                {"complementarity", out.kkt->complementarity},
                {"gap", out.kkt->gap}};
  }
  r["options"] = {{"N", spec.steps},
                  {"t_f", spec.horizon},
                  {"tol_feas", spec.solver.tol_feas},
                  {"tol_gap", spec.solver.tol_gap},
                  {"max_iter", spec.solver.max_iter}};
  r["provenance"] = {{"spec_hash", problem_hash(spec)},
                     {"lcvx_version", std::string(library_version())},
                     {"eigen_version", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                           std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                           std::to_string(EIGEN_MINOR_VERSION)},
                     {"nlohmann_json_version",
                      std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                          std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                          std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                     {"compiler", __VERSION__}};
  return r;
}

std::vector<SweepRecord> run_sweep(const ProblemSpec& spec, std::span<const int> n_list) {
  if (n_list.empty()) throw ArgumentError("sweep needs at least one grid size");
  if (!std::is_sorted(n_list.begin(), n_list.end()) ||
      std::adjacent_find(n_list.begin(), n_list.end()) != n_list.end() ||
      n_list.front() < 1) {
    throw ArgumentError("sweep grid sizes must be positive and strictly ascending");
  }
  std::vector<SweepRecord> rows;
  for (int steps : n_list) {
    ProblemSpec s = spec;
    s.steps = steps;
    const RunOutcome out = run_solve(s);
    SweepRecord rec;
    rec.steps = steps;
    rec.solve_time = out.solution.solve_time;
    rec.d_bar = out.discreteness ? out.discreteness->d_bar
                                 : std::numeric_limits<double>::quiet_NaN();
    rec.cost = out.solution.status == SolveStatus::Optimal
                   ? out.solution.cost
                   : std::numeric_limits<double>::quiet_NaN();
    rec.status = out.error_kind.empty() ? std::string(to_string(out.solution.status))
                                        : out.error_kind;
    rec.exit_code = out.exit_code;
    rows.push_back(std::move(rec));
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, std::span<const SweepRecord> rows,
                     std::optional<int> ic_index, bool header) {
  if (header) {
    if (ic_index) os << "ic,";
    os << "N,solve_time_s,d_bar,cost,status\n";
  }
  const auto old = os.precision(12);
  for (const auto& r : rows) {
    if (ic_index) os << *ic_index << ',';
    os << r.steps << ',' << r.solve_time << ',' << r.d_bar << ',' << r.cost << ','
       << r.status << '\n';
  }
  os.precision(old);
}

void MonteCarloConfig::check() const {
  if (samples < 1) throw ArgumentError("Monte Carlo needs at least one sample");
  if (!(r_bound > 0.0) || !(v_bound > 0.0)) {
    throw ArgumentError("Monte Carlo box bounds must be positive");
  }
  if (!(horizon > 0.0)) throw ArgumentError("horizon must be positive");
  if (steps < 1) throw ArgumentError("steps must be >= 1");
  solver.check();
}

Eigen::VectorXd sample_initial_state(const MonteCarloConfig& cfg, int sample) {
  CounterRng rng(cfg.seed, static_cast<std::uint64_t>(sample));
  Eigen::VectorXd x0(6);
  for (int i = 0; i < 3; ++i) x0(i) = rng.uniform(-cfg.r_bound, cfg.r_bound);
  for (int i = 3; i < 6; ++i) x0(i) = rng.uniform(-cfg.v_bound, cfg.v_bound);
  return x0;
}

Histogram make_histogram(std::span<const double> values, int bins) {
  Histogram h;
  if (bins < 1) throw ArgumentError("histogram needs at least one bin");
  if (values.empty()) return h;
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  double lo = *lo_it;
  double hi = *hi_it;
  if (hi <= lo) hi = lo + 1.0;
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int i = 0; i <= bins; ++i) h.edges[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / bins;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (double v : values) {
    int b = static_cast<int>((v - lo) / (hi - lo) * bins);
    b = std::clamp(b, 0, bins - 1);
    ++h.counts[static_cast<std::size_t>(b)];
  }
  return h;
}

ProblemSpec rendezvous_problem(const RendezvousScenario& scenario,
                               const Eigen::VectorXd& x0, double horizon, int steps) {
  const LtiSystem sys = cw_system(scenario);
  ProblemSpec spec;
  spec.a = sys.a();
  spec.b = sys.b();
  spec.m = 3;
  spec.u_max = scenario.u_max;
  spec.extra = cw_shared_thrust_points(scenario.u_max);
  spec.x0 = x0;
  spec.xf = Eigen::VectorXd::Zero(6);
  spec.horizon = horizon;
  spec.steps = steps;
  return spec;
}

MonteCarloSummary run_montecarlo(const MonteCarloConfig& cfg,
                                 const RendezvousScenario& scenario,
                                 InitialStateOverride override_x0) {
  cfg.check();
  scenario.check();
  MonteCarloSummary summary;
  summary.records.resize(static_cast<std::size_t>(cfg.samples));

  auto run_one = [&](int i) {
    Eigen::VectorXd x0 = sample_initial_state(cfg, i);
    if (override_x0) {
      if (auto forced = override_x0(i)) x0 = *forced;
    }
    ProblemSpec spec = rendezvous_problem(scenario, x0, cfg.horizon, cfg.steps);
    spec.solver = cfg.solver;
    const RunOutcome out = run_solve(spec);
    MonteCarloRecord rec;
    rec.sample = i;
    rec.x0 = x0;
    rec.solve_time = out.solution.solve_time;
    rec.d_bar = out.discreteness ? out.discreteness->d_bar
                                 : std::numeric_limits<double>::quiet_NaN();
    rec.cost = out.solution.status == SolveStatus::Optimal
                   ? out.solution.cost
                   : std::numeric_limits<double>::quiet_NaN();
    rec.status = std::string(to_string(out.solution.status));
    rec.exit_code = out.exit_code;
    summary.records[static_cast<std::size_t>(i)] = std::move(rec);
  };

  const unsigned jobs = std::max(1u, cfg.jobs);
  if (jobs == 1) {
    for (int i = 0; i < cfg.samples; ++i) run_one(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) {
      pool.emplace_back([&] {
        for (int i = next++; i < cfg.samples; i = next++) run_one(i);
      });
    }
    for (auto& t : pool) t.join();
  }

  std::vector<double> times;
  std::vector<double> dbars;
  int ok = 0;
  for (const auto& r : summary.records) {
    times.push_back(r.solve_time);
    if (r.status == "Optimal") {
      ++ok;
      dbars.push_back(r.d_bar);
    }
  }
  summary.mean_solve_time = mean(times);
  summary.median_solve_time = median(times);
  summary.max_solve_time = *std::max_element(times.begin(), times.end());
  summary.mean_d_bar = mean(dbars);
  summary.success_rate = static_cast<double>(ok) / cfg.samples;
  summary.all_succeeded = ok == cfg.samples;
  summary.solve_time_hist = make_histogram(times, 20);
  summary.d_bar_hist = make_histogram(dbars, 20);
  return summary;
}

void write_montecarlo_csv(std::ostream& os, const MonteCarloSummary& summary) {
  os << "sample,solve_time_s,d_bar,cost,status\n";
  const auto old = os.precision(12);
  for (const auto& r : summary.records) {
    os << r.sample << ',' << r.solve_time << ',' << r.d_bar << ',' << r.cost << ','
       << r.status << '\n';
  }
  os.precision(old);
}

json montecarlo_json(const MonteCarloConfig& cfg, const RendezvousScenario& scenario,
                     const MonteCarloSummary& summary) {
  return {
      {"config",
       {{"samples", cfg.samples},
        {"r_bound_m", cfg.r_bound},
        {"v_bound_mps", cfg.v_bound},
        {"t_f", cfg.horizon},
        {"N", cfg.steps},
        {"seed", cfg.seed},
        {"jobs", cfg.jobs},
        {"tol_feas", cfg.solver.tol_feas},
        {"tol_gap", cfg.solver.tol_gap}}},
      {"scenario",
       {{"orbit_radius_m", scenario.orbit_radius},
        {"mu", scenario.mu},
        {"mean_motion", scenario.mean_motion()},
        {"u_max", scenario.u_max}}},
      {"aggregate",
       {{"mean_solve_time_s", summary.mean_solve_time},
        {"median_solve_time_s", summary.median_solve_time},
        {"max_solve_time_s", summary.max_solve_time},
        {"mean_d_bar", summary.mean_d_bar},
        {"mean_d_bar_over_u_max", summary.mean_d_bar / scenario.u_max},
        {"success_rate", summary.success_rate},
        {"all_succeeded", summary.all_succeeded}}},
      {"histograms",
       {{"solve_time_s", histogram_json(summary.solve_time_hist)},
        {"d_bar", histogram_json(summary.d_bar_hist)}}},
      {"provenance", {{"lcvx_version", std::string(library_version())}}},
  };
}

std::vector<OracleInstance> double_integrator_suite(int steps, int count,
                                                    std::uint64_t seed, double dt) {
  if (steps < 3) throw ArgumentError("the oracle suite needs at least 3 steps");
  if (count < 1) throw ArgumentError("the oracle suite needs at least one instance");
  Eigen::MatrixXd a(2, 2);
  a << 0.0, 1.0, 0.0, 0.0;
  Eigen::MatrixXd b(2, 1);
  b << 0.0, 1.0;
  const DiscretizedSystem sysd = zoh_discretize(LtiSystem(a, b), dt);
  const DiscreteInputSet set(1, 1.0);

  std::vector<OracleInstance> suite;
  for (int i = 0; i < count; ++i) {
    CounterRng rng(seed, (static_cast<std::uint64_t>(steps) << 32) | static_cast<std::uint64_t>(i));
    Eigen::VectorXd x0(2);
    x0 << rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0);
    const int lead = 1 + static_cast<int>(rng.uniform() * (steps - 2));
    const int tail = 1 + static_cast<int>(rng.uniform() * (steps - 1 - lead));
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    std::vector<double> gen(static_cast<std::size_t>(steps), 0.0);
    std::vector<Eigen::VectorXd> u;
    for (int k = 0; k < steps; ++k) {
      if (k < lead) gen[static_cast<std::size_t>(k)] = sign;
      if (k >= steps - tail) gen[static_cast<std::size_t>(k)] = -sign;
      u.push_back(Eigen::VectorXd::Constant(1, gen[static_cast<std::size_t>(k)]));
    }
    DiscretizedSystem instance_sys = sysd;
    instance_sys.steps = steps;
    const Eigen::VectorXd xf = propagate(instance_sys, x0, u).back();
    suite.push_back(OracleInstance{i, instance_sys, set, x0, xf, std::move(gen)});
  }
  return suite;
}

}  // namespace lcvx
