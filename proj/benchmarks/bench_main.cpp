#include <benchmark/benchmark.h>

#include "grfkit/experiment.hpp"
#include "grfkit/generators.hpp"
#include "grfkit/series.hpp"
#include "grfkit/spectral.hpp"
#include "grfkit/walks.hpp"

namespace {

using namespace grfkit;

Graph er_graph(std::int64_t n) {
  return generate(GeneratorSpec::erdos_renyi(static_cast<std::size_t>(n), 8.0 / static_cast<double>(n), 1));
}

void BM_ExactDiffusion(benchmark::State& state) {
  const auto g = er_graph(state.range(0));
  const auto nl = normalized_laplacian(g);
  const auto spec = KernelSpec::diffusion(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(exact_kernel(nl, spec, g).matrix.data());
}
BENCHMARK(BM_ExactDiffusion)->Arg(50)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_SeriesMatrix(benchmark::State& state) {
  const auto g = er_graph(state.range(0));
  const auto nl = normalized_laplacian(g);
  const auto series = kernel_series(KernelSpec::diffusion(0.5));
  for (auto _ : state) benchmark::DoNotOptimize(series_matrix(nl.adjacency, series.coefficients).data());
}
BENCHMARK(BM_SeriesMatrix)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_SampleWalk(benchmark::State& state) {
  const auto g = generate(GeneratorSpec::ladder(50));
  const WalkTable table(g, 0.5);
  std::uint32_t w = 0;
  for (auto _ : state) {
    const WalkerDraws draws(3, {w % 100, w, Ensemble::first}, Coupling::antithetic);
    benchmark::DoNotOptimize(sample_walk(table, w % 100, draws, 500).length);
    ++w;
  }
}
BENCHMARK(BM_SampleWalk);

void BM_EstimateKernel(benchmark::State& state) {
  const auto g = er_graph(state.range(0));
  const auto mod = modulation_from_series(kernel_series(KernelSpec::diffusion(0.5)), ModulationMode::symmetric);
  const auto coupling = state.range(2) ? Coupling::antithetic : Coupling::iid;
  const WalkEnsembleConfig cfg{static_cast<std::size_t>(state.range(1)), 0.5, coupling, 7, 0};
  for (auto _ : state) benchmark::DoNotOptimize(estimate_kernel(g, mod, cfg).matrix.data());
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1) * 2);
}
BENCHMARK(BM_EstimateKernel)
    ->ArgNames({"n", "walkers", "antithetic"})
    ->Args({60, 16, 0})
    ->Args({60, 16, 1})
    ->Args({200, 16, 1})
    ->Args({200, 100, 1})
    ->Unit(benchmark::kMillisecond);

void BM_ExperimentCell(benchmark::State& state) {
  ExperimentSpec spec;
  spec.graph = GeneratorSpec::ladder(10);
  spec.walker_counts = {10, 20, 50, 100};
  spec.repeats = 10;
  spec.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(spec).rows.size());
}
BENCHMARK(BM_ExperimentCell)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
