#include <benchmark/benchmark.h>

#include <cmath>

#include "streamkl/baselines.hpp"
#include "streamkl/engine.hpp"
#include "streamkl/harness.hpp"

using namespace streamkl;

namespace {

std::vector<StreamSample> bench_stream(long T, int dim) {
  return synthetic_stream(1.0, 0.05, T, dim, 7);
}

AlgorithmConfig engine_config(Variant variant) {
  AlgorithmConfig cfg;
  cfg.variant = variant;
  cfg.dictionary = standard_dictionary();
  cfg.eta_l = 1e-2;
  cfg.eta_g = 1e-2;
  cfg.seed = 7;
  if (variant == Variant::amkl || variant == Variant::amkl_aks) cfg.active.enabled = true;
  return cfg;
}

}  // namespace

static void BM_rf_transform(benchmark::State& state) {
  const int D = static_cast<int>(state.range(0));
  const RandomFeatureMap map({KernelFamily::gaussian, 1.0}, D, 77, 3);
  Eigen::VectorXd x = Eigen::VectorXd::Constant(77, 1.0 / std::sqrt(77.0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(map.transform(x));
  }
}
BENCHMARK(BM_rf_transform)->Arg(50)->Arg(500)->Arg(2000);

static void BM_engine_step(benchmark::State& state) {
  const auto variant = static_cast<Variant>(state.range(0));
  const auto stream = bench_stream(4096, 16);
  Engine engine(engine_config(variant), 16);
  std::size_t t = 0;
  for (auto _ : state) {
    const auto& sample = stream[t++ & 4095];
    benchmark::DoNotOptimize(engine.step(sample.x, sample.y));
  }
}
BENCHMARK(BM_engine_step)
    ->Arg(static_cast<int>(Variant::raker))
    ->Arg(static_cast<int>(Variant::omkl_aks))
    ->Arg(static_cast<int>(Variant::amkl_aks));

static void BM_expansion_step(benchmark::State& state) {
  const int budget = static_cast<int>(state.range(0));
  const auto stream = bench_stream(2048, 16);
  const ExactKernelSpec kernel{ExactKernelSpec::Kind::gaussian, 1.0, 0};
  BudgetedExpansion expansion;
  expansion.budget = budget;
  std::size_t t = 0;
  for (auto _ : state) {
    const auto& sample = stream[t++ & 2047];
    budgeted_kernel_step(expansion, kernel, sample.x, sample.y, 1e-2, 0.01);
  }
}
BENCHMARK(BM_expansion_step)->Arg(50)->Arg(500)->Arg(2000);

BENCHMARK_MAIN();
