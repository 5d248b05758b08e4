#include <benchmark/benchmark.h>

#include <algorithm>

#include "dpsqkd/dps_link.hpp"
#include "dpsqkd/rng.hpp"
#include "dpsqkd/sifting.hpp"

using namespace dpsqkd;

// One simulated second at the given budget (dB).
static void BM_SimulateTimetags(benchmark::State& state) {
  const TransmitterConfig tx;
  const DetectorModel det;
  const double budget = static_cast<double>(state.range(0));
  std::uint64_t seed = 1;
  std::size_t tags = 0;
  for (auto _ : state) {
    const auto sim = simulate_timetags(tx, {}, budget, det, 360.0, 1.0, seed++);
    tags += sim.stream.tags.size();
    benchmark::DoNotOptimize(sim.stream.tags.data());
  }
  state.counters["tags/s"] = benchmark::Counter(static_cast<double>(tags), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_SimulateTimetags)->Arg(0)->Arg(14)->Arg(21)->Arg(28)->Unit(benchmark::kMillisecond);

static void BM_ClickRateOracle(benchmark::State& state) {
  const TransmitterConfig tx;
  const DetectorModel det;
  double budget = 10.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(click_rate_oracle(tx, budget, det, 360.0, 0.3));
    budget = budget > 30.0 ? 10.0 : budget + 0.01;
  }
}
BENCHMARK(BM_ClickRateOracle);

static TimeTagStream uniform_stream(std::size_t n) {
  Rng rng(7);
  TimeTagStream s;
  s.duration_s = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    s.tags.push_back({static_cast<std::int64_t>(rng.uniform() * 1e12),
                      rng.bernoulli(0.5) ? Port::destructive : Port::constructive, TagOrigin::dark});
  }
  std::sort(s.tags.begin(), s.tags.end(),
            [](const TimeTag& a, const TimeTag& b) { return a.time_ps < b.time_ps; });
  return s;
}

static void BM_ApplyGate(benchmark::State& state) {
  const TimeTagStream s = uniform_stream(static_cast<std::size_t>(state.range(0)));
  GateConfig gate;
  gate.slot_phase_s = 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(apply_gate(s, gate).clicks.size());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ApplyGate)->Arg(100000)->Arg(1000000);

static void BM_EstimateSlotPhase(benchmark::State& state) {
  const TimeTagStream s = uniform_stream(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_slot_phase(s, 1e-9));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EstimateSlotPhase)->Arg(100000);
