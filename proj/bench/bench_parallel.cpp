#include <benchmark/benchmark.h>

#include "pam/chaos.hpp"
#include "pam/field.hpp"
#include "pam/solver.hpp"

namespace {

// Arg 0 runs the serial reference path, arg 1 the OpenMP path.

void BM_SpectralMc(benchmark::State& state) {
  pam::ChaosMomentRequest r;
  r.n = 2;
  r.params = pam::HurstParams::validate(1, 0.5, {0.75});
  r.method = pam::ChaosMethod::SpectralMonteCarlo;
  r.mc.samples = 200'000;
  r.mc.parallel = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(pam::chaos_moment(r).value);
}
BENCHMARK(BM_SpectralMc)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_TemporalMc(benchmark::State& state) {
  pam::ChaosMomentRequest r;
  r.n = 2;
  r.params = pam::HurstParams::validate(1, 0.7, {0.6});
  r.method = pam::ChaosMethod::TemporalMonteCarlo;
  r.mc.samples = 100'000;
  r.mc.parallel = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(pam::chaos_moment(r).value);
}
BENCHMARK(BM_TemporalMc)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SimplexQuadrature(benchmark::State& state) {
  pam::ChaosMomentRequest r;
  r.n = 3;
  r.params = pam::HurstParams::validate(1, 0.5, {0.6});
  r.quadrature_points = 8;
  r.mc.parallel = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(pam::chaos_moment(r).value);
}
BENCHMARK(BM_SimplexQuadrature)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_FieldBatch(benchmark::State& state) {
  pam::GridSpec g;
  g.time_points = pam::lattice(0, 16, 0.25);
  g.space_points = {pam::lattice(-16, 16, 0.25)};
  const auto p = pam::HurstParams::validate(1, 0.7, {0.3});
  for (auto _ : state)
    benchmark::DoNotOptimize(
        pam::sample_batch(g, p, pam::FieldMethod::CirculantEmbedding, 1, 200, state.range(0) != 0).size());
}
BENCHMARK(BM_FieldBatch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SolverPaths(benchmark::State& state) {
  pam::SchemeSpec s;
  s.grid = 64;
  s.dt = 1.0 / 256;
  s.paths = 256;
  s.parallel = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(pam::simulate_paths(s).slices.back().second_moment);
}
BENCHMARK(BM_SolverPaths)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
