#include <benchmark/benchmark.h>

#include "betadt/analytics.hpp"
#include "betadt/samplers.hpp"
#include "betadt/tessellation.hpp"

using namespace betadt;

namespace {

void BM_TypicalCell(benchmark::State& st) {
  const int d = static_cast<int>(st.range(0));
  const ModelParams p = st.range(1) ? ModelParams::beta_prime_model(d, 4.0) : ModelParams::beta_model(d, 1.0);
  RandomStream s(1, 0);
  for (auto _ : st) benchmark::DoNotOptimize(sample_typical_cell(p, s));
  st.SetItemsProcessed(st.iterations());
}
BENCHMARK(BM_TypicalCell)->Args({2, 0})->Args({3, 0})->Args({4, 0})->Args({3, 1});

void BM_Gamma(benchmark::State& st) {
  RandomStream s(2, 0);
  for (auto _ : st) benchmark::DoNotOptimize(sample_gamma(2.5, 1.0, s));
}
BENCHMARK(BM_Gamma);

void BM_Hull(benchmark::State& st) {
  RandomStream s(3, 0);
  std::vector<Site> sites(static_cast<std::size_t>(st.range(0)));
  for (auto& x : sites) {
    x.v = Point(2);
    x.v << s.uniform(), s.uniform();
    x.h = 0.1 * s.uniform();
  }
  for (auto _ : st) benchmark::DoNotOptimize(triangulate_sites(sites));
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_Hull)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Unit(benchmark::kMillisecond)->Complexity();

void BM_Window(benchmark::State& st) {
  WindowConfig w;
  w.target_box = Box::square(0.0, 20.0);
  std::uint64_t seed = 0;
  for (auto _ : st) benchmark::DoNotOptimize(build_tessellation(ModelParams::beta_model(3, 1.0), w, seed++));
}
BENCHMARK(BM_Window)->Unit(benchmark::kMillisecond);

void BM_AngleSum(benchmark::State& st) {
  const ModelParams p = ModelParams::beta_model(4, 3.0);
  for (auto _ : st) benchmark::DoNotOptimize(expected_angle_sum(p, 1));
}
BENCHMARK(BM_AngleSum)->Unit(benchmark::kMillisecond);

void BM_FaceIntensity(benchmark::State& st) {
  const ModelParams p = ModelParams::beta_model(3, 2.0);
  for (auto _ : st) benchmark::DoNotOptimize(face_intensity(p, 1));
}
BENCHMARK(BM_FaceIntensity);

}  // namespace
BENCHMARK_MAIN();
