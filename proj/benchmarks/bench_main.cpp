#include <benchmark/benchmark.h>

#include <vector>

#include "ultrajet/extension.hpp"
#include "ultrajet/weight_function.hpp"
#include "ultrajet/weight_matrix.hpp"
#include "ultrajet/whitney_cover.hpp"

using namespace ultrajet;

static void BM_KappaSquareRoot(benchmark::State& state) {
  const auto w = WeightFunction::power(0.5);
  const double t = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kappa_transform(w, t));
}
BENCHMARK(BM_KappaSquareRoot)->Arg(10)->Arg(1000000);

static void BM_KappaLogSquaredDivisor(benchmark::State& state) {
  const auto w = WeightFunction::log_squared_divisor();
  for (auto _ : state) benchmark::DoNotOptimize(kappa_transform(w, 1e6));
}
BENCHMARK(BM_KappaLogSquaredDivisor);

static void BM_AssociatedMatrix(benchmark::State& state) {
  const auto w = WeightFunction::power(0.5, 1.0, true);
  const auto K = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(associated_matrix(w, {0.5, 1.0, 2.0, 4.0}, K));
}
BENCHMARK(BM_AssociatedMatrix)->Arg(50)->Arg(200);

static void BM_BuildCover(benchmark::State& state) {
  const CompactSet1D E({{-1.0, 0.0}, {1.0, 1.0}});
  for (auto _ : state) benchmark::DoNotOptimize(build_cover(E, 0.5));
}
BENCHMARK(BM_BuildCover);

static void BM_ExtensionEval(benchmark::State& state) {
  auto S = associated_matrix(WeightFunction::power(0.5, 2.0, true), {0.5, 1.0, 2.0, 4.0, 8.0}, 160);
  auto reg = strong_regularization(S);
  auto V = interleave_matrix(reg.matrix);
  auto W = associated_matrix(WeightFunction::power(0.5, 1.0, true), {2.0}, 40);
  ExtensionPlan plan;
  plan.H = sandwich_H(reg.matrix, V, 2.0, 80).H;
  plan.r_cov = 0.25;
  auto F = gevrey_jet(CompactSet1D::point(0.0), {0.0}, V.row(1.0).divided, 60, 1.0, 1.0);
  auto f = assemble(F, extension_rows(reg.matrix, V, W, 1.0, 2.0), plan);
  const auto xs = region_samples(f, 64, 1);
  const auto alpha = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    for (double x : xs) benchmark::DoNotOptimize(f.derivatives(x, alpha));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(xs.size()));
}
BENCHMARK(BM_ExtensionEval)->Arg(0)->Arg(8);
BENCHMARK_MAIN();
