#include <benchmark/benchmark.h>

#include "wban/codes.hpp"
#include "wban/dtrc.hpp"

namespace {

void BM_GenerateWalsh(benchmark::State& state) {
  const auto n = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(wban::generate_walsh(n));
}
BENCHMARK(BM_GenerateWalsh)->DenseRange(2, 10, 2);

// Full-capacity extraction from M_{2^n}; cowhc_for memoizes this search.
void BM_ExtractCowhc(benchmark::State& state) {
  const auto n = static_cast<unsigned>(state.range(0));
  const auto m = wban::generate_walsh(n);
  for (auto _ : state) benchmark::DoNotOptimize(wban::extract_cowhc(m, n + 1));
}
BENCHMARK(BM_ExtractCowhc)->DenseRange(2, 8, 2)->Unit(benchmark::kMicrosecond);

void BM_ClassifyOverlap(benchmark::State& state) {
  const wban::SuperframeGeometry g{0.005, 0.1, static_cast<std::size_t>(state.range(0))};
  double tau = -0.0123;
  for (auto _ : state) {
    benchmark::DoNotOptimize(wban::classify_overlap(tau, g));
    tau = tau < -0.045 ? -0.0123 : tau - 0.0007;
  }
}
BENCHMARK(BM_ClassifyOverlap)->Arg(4)->Arg(10);

}  // namespace
