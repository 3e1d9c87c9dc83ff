#include "prolate_squeeze/homodyne.hpp"
#include "prolate_squeeze/mode_algebra.hpp"
#include "prolate_squeeze/pswf.hpp"
#include "prolate_squeeze/squeeze.hpp"

#include <benchmark/benchmark.h>

#include <numbers>

namespace {

using namespace psq;

// Arg: Shannon number S; K = S + 4 modes, M = max(4K, 4c) rounded up.
void BM_BuildBasis(benchmark::State& state) {
  const int S = static_cast<int>(state.range(0));
  const double c = std::numbers::pi * S / 2.0;
  const int K = S + 4;
  const int M = std::max(4 * K, static_cast<int>(std::ceil(4 * c))) + 8;
  for (auto _ : state) benchmark::DoNotOptimize(build_basis(BandParameter(c), K, M));
  state.SetLabel("M=" + std::to_string(M));
}
BENCHMARK(BM_BuildBasis)->Arg(4)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_EvalPsiAll(benchmark::State& state) {
  const auto b = build_basis(BandParameter(2.0 * std::numbers::pi), 12, 96);
  std::vector<double> out(12);
  double s = 0.0;
  for (auto _ : state) {
    b.eval_psi_all(s, out);
    benchmark::DoNotOptimize(out.data());
    s += 1e-3;
    if (s > 3.0) s = 0.0;
  }
}
BENCHMARK(BM_EvalPsiAll);

// Arg: grid steps per unit length.
void BM_FourierT(benchmark::State& state) {
  const auto b = build_basis(BandParameter(2.0), 6, 64);
  const double h = 1.0 / static_cast<double>(state.range(0));
  const PlaneField f = mode_field(b, 1, ModeShape::chi, Plane::source, 8.0, h);
  for (auto _ : state) benchmark::DoNotOptimize(fourier_T(f, b.band()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.values().size()));
}
BENCHMARK(BM_FourierT)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

// Arg: number of modes K.
void BM_FullCovariance(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  const double c = 2.0 * std::numbers::pi;
  const auto b = build_basis(BandParameter(c), K, std::max(4 * K, 160));
  const auto p = SqueezingProfile::gaussian(1.0, 3.0 * c, 0.2, 1e-3);
  for (auto _ : state) benchmark::DoNotOptimize(full_covariance(b, p));
}
BENCHMARK(BM_FullCovariance)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_ModeVariances(benchmark::State& state) {
  const double c = 2.0 * std::numbers::pi;
  const auto b = build_basis(BandParameter(c), 8, 160);
  const auto p = SqueezingProfile::gaussian(1.0, 3.0 * c);
  for (auto _ : state) benchmark::DoNotOptimize(mode_variances(b, p, 3));
}
BENCHMARK(BM_ModeVariances)->Unit(benchmark::kMillisecond);

// Arg: shots.
void BM_Sample(benchmark::State& state) {
  const auto b = build_basis(BandParameter(2.0), 6, 64);
  const auto cov = full_covariance(b, SqueezingProfile::gaussian(1.0, 2.0));
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(sample(cov, {}, n, seed++));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sample)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
