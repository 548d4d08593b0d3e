#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "lcvx/harness.hpp"
#include "lcvx/linsys.hpp"
#include "lcvx/oracle.hpp"
#include "lcvx/scenario.hpp"
#include "lcvx/transcription.hpp"

namespace {

Eigen::VectorXd rendezvous_x0() {
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(6);
  x0.head(3) << -100.0, -500.0, -100.0;
  return x0;
}

void BM_MatrixExponential(benchmark::State& state) {
  const auto n = state.range(0);
  Eigen::MatrixXd m = Eigen::MatrixXd::Random(n, n) * 2.0;
  for (auto _ : state) benchmark::DoNotOptimize(lcvx::matrix_exponential(m));
}
BENCHMARK(BM_MatrixExponential)->Arg(4)->Arg(9)->Arg(32);

void BM_Transcribe(benchmark::State& state) {
  const lcvx::RendezvousScenario scenario;
  const auto sys = lcvx::cw_system(scenario);
  const auto set = lcvx::cw_input_set(scenario.u_max);
  const Eigen::VectorXd x0 = rendezvous_x0();
  for (auto _ : state) {
    benchmark::DoNotOptimize(lcvx::transcribe(sys, set, x0, Eigen::VectorXd::Zero(6), 240.0,
                                              static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_Transcribe)->Arg(400)->Arg(800)->Unit(benchmark::kMillisecond);

// Full pipeline on the rendezvous problem: transcription, LP solve, analysis.
void BM_RendezvousSolve(benchmark::State& state) {
  const lcvx::RendezvousScenario scenario;
  const auto spec = lcvx::rendezvous_problem(scenario, rendezvous_x0(), 240.0,
                                             static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const auto out = lcvx::run_solve(spec);
    if (out.exit_code != lcvx::kExitSuccess) state.SkipWithError("solve failed");
    state.counters["iterations"] = out.iterations;
  }
}
BENCHMARK(BM_RendezvousSolve)->Arg(100)->Arg(400)->Arg(800)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_OracleEnumeration(benchmark::State& state) {
  const auto suite = lcvx::double_integrator_suite(static_cast<int>(state.range(0)), 1, 1);
  const auto& inst = suite.front();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        lcvx::enumerate_optimal(inst.sysd, inst.set, inst.x0, inst.xf, lcvx::OracleConfig{}));
  }
}
BENCHMARK(BM_OracleEnumeration)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
