#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "dpsqkd/dps_link.hpp"
#include "dpsqkd/error.hpp"
#include "dpsqkd/rng.hpp"
#include "dpsqkd/sifting.hpp"

using namespace dpsqkd;

namespace {

constexpr std::int64_t kSlotPs = 1000;

// Uniform background tags over n_slots symbol periods.
TimeTagStream uniform_tags(std::size_t count, std::int64_t n_slots, std::uint64_t seed) {
  Rng rng(seed);
  TimeTagStream s;
  s.duration_s = static_cast<double>(n_slots) * kSlotPs * 1e-12;
  for (std::size_t i = 0; i < count; ++i) {
    TimeTag t;
    t.time_ps = static_cast<std::int64_t>(rng.uniform() * static_cast<double>(n_slots * kSlotPs));
    t.port = rng.bernoulli(0.5) ? Port::destructive : Port::constructive;
    t.origin = TagOrigin::dark;
    s.tags.push_back(t);
  }
  std::sort(s.tags.begin(), s.tags.end(),
            [](const TimeTag& a, const TimeTag& b) { return a.time_ps < b.time_ps; });
  return s;
}

// One tag per slot at the pulse center plus an offset.
TimeTagStream centered_tags(const std::vector<std::uint8_t>& ports, std::int64_t offset_ps) {
  TimeTagStream s;
  s.duration_s = static_cast<double>(ports.size()) * kSlotPs * 1e-12;
  for (std::size_t k = 0; k < ports.size(); ++k) {
    TimeTag t;
    t.time_ps = static_cast<std::int64_t>(k) * kSlotPs + kSlotPs / 2 + offset_ps;
    t.port = static_cast<Port>(ports[k]);
    s.tags.push_back(t);
  }
  return s;
}

GateConfig fixed_gate(double fraction, double phase_s = 0.0) {
  GateConfig g;
  g.gate_fraction = fraction;
  g.slot_phase_s = phase_s;
  return g;
}

}  // namespace

TEST_SUITE("sifting") {
  TEST_CASE("full-width gate keeps every tag") {
    const TimeTagStream s = uniform_tags(5000, 100000, 1);
    const GateResult r = apply_gate(s, fixed_gate(1.0));
    CHECK(r.clicks.size() == s.tags.size());
    CHECK(r.rejected == 0);
    for (std::size_t i = 0; i < r.clicks.size(); ++i) {
      CHECK(r.clicks[i].slot == s.tags[i].time_ps / kSlotPs);
      CHECK(r.clicks[i].port == s.tags[i].port);
    }
  }

  TEST_CASE("gate retains its fraction of uniform background") {
    const TimeTagStream s = uniform_tags(100000, 10000000, 2);
    const GateResult r = apply_gate(s, fixed_gate(0.3));
    const double kept = static_cast<double>(r.clicks.size()) / 1e5;
    const double sigma = std::sqrt(0.3 * 0.7 / 1e5);
    CHECK(std::abs(kept - 0.3) < 4.0 * sigma);
    CHECK(std::abs(kept - 0.3) < 0.005);
    CHECK(r.clicks.size() + r.rejected == s.tags.size());
  }

  TEST_CASE("in-window tags are all kept and gating is idempotent") {
    std::mt19937_64 gen(3);
    std::uniform_int_distribution<std::int64_t> jitter(-150, 150);
    TimeTagStream s;
    s.duration_s = 2000 * kSlotPs * 1e-12;
    for (std::int64_t k = 0; k < 2000; ++k) {
      s.tags.push_back({k * kSlotPs + kSlotPs / 2 + jitter(gen), Port::constructive, TagOrigin::signal});
    }
    const GateResult r = apply_gate(s, fixed_gate(0.3));
    CHECK(r.clicks.size() == s.tags.size());

    const TimeTagStream mixed = uniform_tags(20000, 2000, 4);
    const GateResult once = apply_gate(mixed, fixed_gate(0.3));
    TimeTagStream kept;
    kept.duration_s = mixed.duration_s;
    for (const auto& t : mixed.tags) {
      const std::int64_t d = t.time_ps - (t.time_ps / kSlotPs) * kSlotPs - kSlotPs / 2;
      if (std::abs(d) <= 150) kept.tags.push_back(t);
    }
    CHECK(once.clicks.size() == kept.tags.size());
    CHECK(apply_gate(kept, fixed_gate(0.3)).clicks.size() == kept.tags.size());
  }

  TEST_CASE("window edges are inclusive") {
    const TimeTagStream edge = centered_tags({0, 1}, 150);
    CHECK(apply_gate(edge, fixed_gate(0.3)).clicks.size() == 2);
    const TimeTagStream outside = centered_tags({0, 1}, 151);
    CHECK(apply_gate(outside, fixed_gate(0.3)).clicks.empty());
  }

  TEST_CASE("gate acceptance counts whole-picosecond offsets") {
    for (double period : {1e-9, 1.001e-9, 8e-10}) {
      const auto ps = std::llround(period * 1e12);
      TimeTagStream s;
      s.duration_s = period;
      for (std::int64_t t = 0; t < ps; ++t) s.tags.push_back({t, Port::constructive, TagOrigin::dark});
      for (double g : {0.05, 0.3, 0.5, 0.77, 1.0}) {
        GateConfig gate = fixed_gate(g);
        gate.symbol_period_s = period;
        const double kept = static_cast<double>(apply_gate(s, gate).clicks.size()) / static_cast<double>(ps);
        CAPTURE(period);
        CAPTURE(g);
        CHECK(gate_acceptance(g, period) == doctest::Approx(kept));
      }
    }
    CHECK(gate_acceptance(0.3, 1e-9) == doctest::Approx(0.301));
  }

  TEST_CASE("error counting against ground truth") {
    std::vector<std::uint8_t> bits(1000, 0);
    std::vector<std::uint8_t> ports(1000, 0);
    for (std::size_t k = 0; k < 1000; ++k) {
      bits[k] = static_cast<std::uint8_t>(k % 2);
      ports[k] = bits[k];
    }
    for (std::size_t k = 0; k < 38; ++k) ports[k * 26] ^= 1;
    const TimeTagStream s = centered_tags(ports, 0);
    const QberReport r =
        sift_and_score(s, DifferentialTruth::from_bits(bits), fixed_gate(0.3));
    CHECK(r.sifted_bits == 1000);
    CHECK(r.error_bits == 38);
    CHECK(r.qber == doctest::Approx(0.038));
    CHECK(r.raw_rate == doctest::Approx(1000.0 / s.duration_s));
  }

  TEST_CASE("clicks beyond the truth are a data error") {
    const TimeTagStream s = centered_tags({0, 0, 0, 0}, 0);
    CHECK_THROWS_AS(sift_and_score(s, DifferentialTruth::from_bits({0, 0, 0}), fixed_gate(0.3)),
                    DataError);
  }

  TEST_CASE("slot phase recovery") {
    for (std::int64_t offset : {-300, -120, 0, 85, 260}) {
      std::mt19937_64 gen(static_cast<std::uint64_t>(offset + 1000));
      std::normal_distribution<double> jitter(0.0, 40.0);
      TimeTagStream s = uniform_tags(2000, 20000, 5);
      for (std::int64_t k = 0; k < 20000; ++k) {
        s.tags.push_back({k * kSlotPs + kSlotPs / 2 + offset + std::llround(jitter(gen)),
                          Port::constructive, TagOrigin::signal});
      }
      std::sort(s.tags.begin(), s.tags.end(),
                [](const TimeTag& a, const TimeTag& b) { return a.time_ps < b.time_ps; });
      const double phase = estimate_slot_phase(s, 1e-9);
      CHECK(std::abs(phase * 1e12 - static_cast<double>(offset)) < 40.0);
      GateConfig auto_gate;
      const GateResult r = apply_gate(s, auto_gate);
      CHECK(r.slot_phase_s == doctest::Approx(phase));
      CHECK(r.clicks.size() >= 20000 * 99 / 100);
    }
  }

  TEST_CASE("composition oracle") {
    CHECK(qber_composition_oracle(1000.0, 0.01, 0.0) == doctest::Approx(0.01));
    CHECK(qber_composition_oracle(0.0, 0.01, 50.0) == doctest::Approx(0.5));
    CHECK(qber_composition_oracle(2592.0, 0.0377, 108.0) ==
          doctest::Approx((2592.0 * 0.0377 + 54.0) / 2700.0));
    CHECK(qber_composition_oracle(2592.0, 0.0377, 108.0) == doctest::Approx(0.0562).epsilon(1e-3));
    CHECK_THROWS_AS(qber_composition_oracle(0.0, 0.1, 0.0), DomainError);
  }

  TEST_CASE("gate configuration checks") {
    CHECK_THROWS(fixed_gate(0.0).validate());
    CHECK_THROWS(fixed_gate(1.5).validate());
    CHECK_NOTHROW(fixed_gate(0.3).validate());
  }
}
