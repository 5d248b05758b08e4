#include <benchmark/benchmark.h>

#include "dpsqkd/raman.hpp"
#include "dpsqkd/runner.hpp"

using namespace dpsqkd;

static ScenarioConfig scenario(const char* name) {
  return load_scenario(std::string(DPSQKD_SCENARIO_DIR) + "/" + name + ".json");
}

// Full L + C + CWDM channel plan through the ODN.
static void BM_OdnNoise(benchmark::State& state) {
  const ScenarioConfig cfg = scenario("w");
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        odn_noise_at_bob(cfg.channels, cfg.topology, cfg.topology.co_filter, cfg.raman));
  }
  state.counters["channels"] = static_cast<double>(cfg.channels.channels.size());
}
BENCHMARK(BM_OdnNoise);

static void BM_RamanCoefficient(benchmark::State& state) {
  const RamanProfile p = RamanProfile::silica_default();
  double pump = 1530.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(raman_coefficient(p, pump, 1310.0));
    pump = pump > 1600.0 ? 1530.0 : pump + 0.1;
  }
}
BENCHMARK(BM_RamanCoefficient);

static void BM_OracleSweep(benchmark::State& state) {
  const ScenarioConfig cfg = scenario("b2b");
  SweepSpec spec{"loss_budget_db", {}};
  for (double b = 10.0; b <= 30.0; b += 0.5) spec.values.push_back(b);
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(cfg, spec, 1).rows.size());
}
BENCHMARK(BM_OracleSweep)->Unit(benchmark::kMillisecond);
