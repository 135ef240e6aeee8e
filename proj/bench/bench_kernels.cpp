// Serial reference versus OpenMP kernels on the hot paths.
//
//   ./bench_kernels --benchmark_filter=MonteCarlo

#include <benchmark/benchmark.h>

#include "bell/experiment.hpp"
#include "bell/inequality.hpp"
#include "bell/lhv_models.hpp"
#include "bell/oracle.hpp"

using namespace bell;
using kernels::ExecutionPolicy;

namespace {

ExecutionPolicy policy_of(const benchmark::State& state) {
  return state.range(0) ? ExecutionPolicy::parallel : ExecutionPolicy::serial;
}

void label(benchmark::State& state) { state.SetLabel(state.range(0) ? "parallel" : "serial"); }

void MonteCarloCorrelation(benchmark::State& state) {
  const auto model = vector_model();
  const auto l = MeasurementDirection::from_degrees(0), r = MeasurementDirection::from_degrees(60);
  const auto trials = static_cast<std::uint64_t>(state.range(1));
  for (auto _ : state)
    benchmark::DoNotOptimize(lhv_correlation_mc(*model, l, r, trials, RngStream(1, 2), policy_of(state)));
  state.SetItemsProcessed(state.iterations() * state.range(1));
  label(state);
}
BENCHMARK(MonteCarloCorrelation)->ArgsProduct({{0, 1}, {100000, 1000000}})->Unit(benchmark::kMillisecond);

void Quadrature(benchmark::State& state) {
  const auto model = vector_model();
  const auto l = MeasurementDirection::from_degrees(0), r = MeasurementDirection::from_degrees(60);
  for (auto _ : state)
    benchmark::DoNotOptimize(lhv_correlation_quadrature(*model, l, r, 1000000, policy_of(state)));
  state.SetItemsProcessed(state.iterations() * 1000000);
  label(state);
}
BENCHMARK(Quadrature)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void ExperimentTrials(benchmark::State& state) {
  ExperimentConfig c;
  c.left_angles = {0};
  c.right_angles = {0, 60, 120};
  c.trials_per_setting = 100000;
  const auto source = make_source(state.range(1) ? "vector" : "quantum");
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(c, *source, policy_of(state)));
  state.SetItemsProcessed(state.iterations() * 300000);
  state.SetLabel(std::string(state.range(0) ? "parallel " : "serial ") + source->name());
}
BENCHMARK(ExperimentTrials)->ArgsProduct({{0, 1}, {0, 1}})->Unit(benchmark::kMillisecond);

void QuantumScan(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(violation_scan(quantum_correlator(), deg_to_rad(1), policy_of(state)));
  label(state);
}
BENCHMARK(QuantumScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void TripleGrid(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(certify_triple_grid(deg_to_rad(5), policy_of(state)));
  label(state);
}
BENCHMARK(TripleGrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
