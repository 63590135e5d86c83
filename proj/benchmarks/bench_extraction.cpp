#include <benchmark/benchmark.h>

#include "dimreader/extraction.hpp"
#include "dimreader/synthetic.hpp"

namespace {

using namespace dimreader;

// One-at-a-time needs n runs, randomized halves an expected log2(n).
// These two benchmarks make the run-count tradeoff visible end to end.

void ExtractOneAtATime(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  Matrix<double> data = make_s_curve(n, 3).dataset.points;
  ProjectionConfig cfg;
  cfg.method = ProjectionMethod::kIsomap;
  cfg.k_neighbors = 8;
  ProjectionDriver driver(data, cfg);
  PerturbationField field = PerturbationField::axis(n, 3, 0);
  for (auto _ : state) {
    auto vectors = extract_one_at_a_time(driver, field);
    benchmark::DoNotOptimize(vectors.vectors.data().data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(ExtractOneAtATime)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void ExtractHalves(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  Matrix<double> data = make_s_curve(n, 3).dataset.points;
  ProjectionConfig cfg;
  cfg.method = ProjectionMethod::kIsomap;
  cfg.k_neighbors = 8;
  ProjectionDriver driver(data, cfg);
  PerturbationField field = PerturbationField::axis(n, 3, 0);
  for (auto _ : state) {
    auto vectors = extract_randomized_halves(driver, field, 17);
    benchmark::DoNotOptimize(vectors.vectors.data().data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(ExtractHalves)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace
