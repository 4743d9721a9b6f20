#include <benchmark/benchmark.h>

#include "wban/sim.hpp"

namespace {

void BM_RunSimulation(benchmark::State& state) {
  wban::SimConfig cfg;
  cfg.scenario.n_wbans = static_cast<std::size_t>(state.range(0));
  cfg.horizon_superframes = 50;
  const auto proto = static_cast<wban::ProtocolKind>(state.range(1));
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(wban::run_simulation(cfg, proto, seed++));
  state.SetItemsProcessed(state.iterations() * 50);  // superframes
}
BENCHMARK(BM_RunSimulation)
    ->ArgsProduct({{2, 6}, {static_cast<long>(wban::ProtocolKind::kOcaim), static_cast<long>(wban::ProtocolKind::kOs)}})
    ->Unit(benchmark::kMillisecond);

}  // namespace
