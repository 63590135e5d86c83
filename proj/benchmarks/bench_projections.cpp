#include <benchmark/benchmark.h>

#include "dimreader/dual.hpp"
#include "dimreader/isomap.hpp"
#include "dimreader/lle.hpp"
#include "dimreader/pca.hpp"
#include "dimreader/synthetic.hpp"

namespace {

using namespace dimreader;

Matrix<double> bench_data(int n) {
  return make_s_curve(n, 99).dataset.points;
}

ProjectionConfig bench_config(ProjectionMethod method) {
  ProjectionConfig cfg;
  cfg.method = method;
  cfg.k_neighbors = 8;
  cfg.seed = 7;
  return cfg;
}

void PcaPlain(benchmark::State& state) {
  Matrix<double> data = bench_data(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto r = pca_project(data, 2, 7);
    benchmark::DoNotOptimize(r.coords.data().data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(PcaPlain)->RangeMultiplier(2)->Range(64, 512)->Complexity();

void IsomapPlain(benchmark::State& state) {
  Matrix<double> data = bench_data(static_cast<int>(state.range(0)));
  ProjectionConfig cfg = bench_config(ProjectionMethod::kIsomap);
  for (auto _ : state) {
    auto r = isomap_project(data, cfg);
    benchmark::DoNotOptimize(r.coords.data().data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(IsomapPlain)->RangeMultiplier(2)->Range(64, 256)->Complexity();

// Dual-number overhead ratio: the same Isomap run with an all-zero
// derivative seeding. Compare against IsomapPlain at equal n.
void IsomapDual(benchmark::State& state) {
  Matrix<double> data = bench_data(static_cast<int>(state.range(0)));
  Matrix<double> seeds(data.rows(), data.cols(), 0.0);
  seeds(0, 0) = 1.0;
  Matrix<Dual> lifted = seed_matrix<Dual>(data, seeds);
  ProjectionConfig cfg = bench_config(ProjectionMethod::kIsomap);
  for (auto _ : state) {
    auto r = isomap_project(lifted, cfg);
    benchmark::DoNotOptimize(r.coords.data().data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(IsomapDual)->RangeMultiplier(2)->Range(64, 256)->Complexity();

void LlePlain(benchmark::State& state) {
  Matrix<double> data = bench_data(static_cast<int>(state.range(0)));
  ProjectionConfig cfg = bench_config(ProjectionMethod::kLle);
  for (auto _ : state) {
    auto r = lle_project(data, cfg);
    benchmark::DoNotOptimize(r.coords.data().data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(LlePlain)->RangeMultiplier(2)->Range(64, 256)->Complexity();

}  // namespace

BENCHMARK_MAIN();
