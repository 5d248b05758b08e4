#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "dpsqkd/dps_link.hpp"
#include "dpsqkd/error.hpp"
#include "dpsqkd/sifting.hpp"

using namespace dpsqkd;

namespace {

DetectorModel quiet_detector() {
  DetectorModel d;
  d.dark_rate_cps = 0.0;
  d.afterpulse_prob = 0.0;
  d.trap_memory_s = 0.0;
  return d;
}

QberReport score(const SimulationResult& sim, double gate_fraction = 0.3) {
  GateConfig gate;
  gate.gate_fraction = gate_fraction;
  gate.slot_phase_s = 0.0;
  return sift_and_score(sim.stream, sim.truth, gate);
}

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("dpsqkd_test_" + name);
}

}  // namespace

TEST_SUITE("dps_link") {
  TEST_CASE("phase train differential bits") {
    TransmitterConfig tx;
    const PhaseTrain a = generate_phase_train(tx, 1000, 7);
    const PhaseTrain b = generate_phase_train(tx, 1000, 7);
    REQUIRE(a.phases.size() == 1000);
    REQUIRE(a.differential_bits.size() == 999);
    CHECK(a.phases == b.phases);
    for (std::size_t k = 0; k + 1 < a.phases.size(); ++k) {
      CHECK(a.differential_bits[k] == (a.phases[k] ^ a.phases[k + 1]));
    }
    CHECK(generate_phase_train(tx, 1000, 8).phases != a.phases);
    CHECK_THROWS_AS(generate_phase_train(tx, 1, 7), ArgumentError);

    tx.explicit_phases = {0, 1, 1};
    const PhaseTrain e = generate_phase_train(tx, 7, 0);
    CHECK(e.phases == std::vector<std::uint8_t>{0, 1, 1, 0, 1, 1, 0});
  }

  TEST_CASE("seeded pattern is balanced and random access") {
    const PatternSource src = PatternSource::seeded(99);
    int ones = 0;
    for (std::int64_t k = 0; k < 100000; ++k) ones += src.phase(k);
    CHECK(std::abs(ones - 50000) < 5 * std::sqrt(25000.0));
    CHECK(src.phase(123456789) == PatternSource::seeded(99).phase(123456789));
  }

  TEST_CASE("explicit truth bits") {
    const DifferentialTruth t = DifferentialTruth::from_bits({1, 0, 1});
    CHECK(t.size() == 3);
    CHECK(t.bit(0) == 1);
    CHECK(t.bit(1) == 0);
  }

  TEST_CASE("fixed seed gives identical tags") {
    TransmitterConfig tx;
    DetectorModel det;
    const auto a = simulate_timetags(tx, {}, 14.0, det, 300.0, 0.5, 42);
    const auto b = simulate_timetags(tx, {}, 14.0, det, 300.0, 0.5, 42);
    const auto c = simulate_timetags(tx, {}, 14.0, det, 300.0, 0.5, 43);
    REQUIRE(!a.stream.tags.empty());
    CHECK(a.stream.tags == b.stream.tags);
    CHECK(a.stream.tags != c.stream.tags);
  }

  TEST_CASE("dead time separates clicks on each detector") {
    TransmitterConfig tx;
    DetectorModel det;
    det.monitored_ports = MonitoredPorts::both;
    const std::int64_t dead_ps = std::llround(det.dead_time_s * 1e12);
    for (double budget : {0.0, 10.0, 20.0}) {
      const auto sim = simulate_timetags(tx, {}, budget, det, 1000.0, 0.2, 5);
      REQUIRE(sim.stream.tags.size() > 100);
      CHECK(min_same_port_gap_ps(sim.stream) >= dead_ps);
      CHECK(std::is_sorted(sim.stream.tags.begin(), sim.stream.tags.end(),
                           [](const TimeTag& x, const TimeTag& y) { return x.time_ps < y.time_ps; }));
    }
  }

  TEST_CASE("perfect visibility without background has no errors") {
    TransmitterConfig tx;
    tx.visibility = 1.0;
    const auto sim = simulate_timetags(tx, {}, 10.0, quiet_detector(), 0.0, 1.0, 3);
    const QberReport r = score(sim);
    REQUIRE(r.sifted_bits > 1000);
    CHECK(r.error_bits == 0);
    CHECK(r.qber == 0.0);
  }

  TEST_CASE("background alone scores one half") {
    TransmitterConfig tx;
    DetectorModel det = quiet_detector();
    det.dark_rate_cps = 20000.0;
    det.monitored_ports = MonitoredPorts::both;
    const auto sim = simulate_timetags(tx, {}, 200.0, det, 0.0, 2.0, 11);
    const QberReport r = score(sim, 1.0);
    REQUIRE(r.sifted_bits > 20000);
    const double sigma = std::sqrt(0.25 / static_cast<double>(r.sifted_bits));
    CHECK(std::abs(r.qber - 0.5) < 4.0 * sigma);
  }

  TEST_CASE("interferometer delay mismatch") {
    TransmitterConfig tx;
    DetectorModel det = quiet_detector();
    DelayInterferometer di;
    di.delay_s = 2e-9;  // pulses two slots apart: no correlation with the bit
    CHECK(click_rate_oracle(tx, 10.0, det, 0.0, 0.3, di).signal_error == doctest::Approx(0.5));
    di.delay_s = 1e-9;
    CHECK(click_rate_oracle(tx, 10.0, det, 0.0, 0.3, di).signal_error ==
          doctest::Approx(tx.intrinsic_error()));
    di.delay_s = 1.05e-9;  // 50 ps timing error within a 200 ps pulse
    const double e = click_rate_oracle(tx, 10.0, det, 0.0, 0.3, di).signal_error;
    CHECK(e > tx.intrinsic_error());
    CHECK(e < 0.5);

    const auto sim = simulate_timetags(tx, DelayInterferometer{2e-9}, 10.0, det, 0.0, 0.5, 9);
    const QberReport r = score(sim);
    CHECK(std::abs(r.qber - 0.5) < 4.0 * std::sqrt(0.25 / static_cast<double>(r.sifted_bits)));
  }

  TEST_CASE("oracle without after-pulsing is the dead-time formula") {
    TransmitterConfig tx;
    DetectorModel det = quiet_detector();
    det.dark_rate_cps = 1000.0;
    const OracleRates o = click_rate_oracle(tx, 10.0, det, 500.0, 0.3);
    const double m = tx.mean_photon_number * det.efficiency *
                     std::pow(10.0, -(10.0 + det.excess_loss_db) / 10.0);
    const double p_hit = 1.0 - std::exp(-m * (1.0 + tx.visibility));
    const double p_miss = 1.0 - std::exp(-m * (1.0 - tx.visibility));
    const double signal_in = tx.symbol_rate_hz * 0.5 * (p_hit + p_miss);
    const double lambda = signal_in + 1500.0;
    const double registered = lambda / (1.0 + lambda * det.dead_time_s);
    CHECK(o.registered_rate == doctest::Approx(registered));
    const double live = 1.0 - registered * det.dead_time_s;
    CHECK(o.signal_rate == doctest::Approx(signal_in * live));
    CHECK(o.background_rate == doctest::Approx(1500.0 * live * gate_acceptance(0.3, 1e-9)));
    CHECK(o.afterpulse_rate == doctest::Approx(0.0));
    CHECK(o.total_rate == doctest::Approx(o.signal_rate + o.background_rate));
    CHECK(o.qber == doctest::Approx(qber_composition_oracle(o.signal_rate, o.signal_error,
                                                            o.background_rate)));
  }

  TEST_CASE("oracle qber has a minimum from rising after-pulsing") {
    TransmitterConfig tx;
    DetectorModel det;
    double best = 1.0;
    double best_budget = 0.0;
    for (double b = 4.0; b <= 30.0; b += 0.5) {
      const double q = click_rate_oracle(tx, b, det, 0.0, 0.3).qber;
      if (q < best) {
        best = q;
        best_budget = b;
      }
    }
    CHECK(best_budget > 4.0);
    CHECK(best_budget < 30.0);
    CHECK(click_rate_oracle(tx, 4.0, det, 0.0, 0.3).qber > best);
  }

  TEST_CASE("monte carlo agrees with the oracle") {
    TransmitterConfig tx;
    DetectorModel det;
    det.monitored_ports = MonitoredPorts::both;
    const double noise = 400.0;
    const double duration = 20.0;
    const OracleRates o = click_rate_oracle(tx, 16.0, det, noise, 0.3);
    const auto sim = simulate_timetags(tx, {}, 16.0, det, noise, duration, 2024);
    const QberReport r = score(sim);
    const double n = o.total_rate * duration;
    CHECK(std::abs(r.raw_rate - o.total_rate) < 3.0 * std::sqrt(n) / duration);
    CHECK(std::abs(r.qber - o.qber) < 3.0 * std::sqrt(o.qber * (1.0 - o.qber) / n));
  }

  TEST_CASE("tag csv round trip") {
    TransmitterConfig tx;
    const auto sim = simulate_timetags(tx, {}, 12.0, DetectorModel{}, 100.0, 0.05, 1);
    const auto path = scratch("tags.csv");
    write_tag_csv(sim.stream, path.string());
    const TimeTagStream back = read_tag_csv(path.string(), sim.stream.duration_s);
    REQUIRE(back.tags.size() == sim.stream.tags.size());
    for (std::size_t i = 0; i < back.tags.size(); ++i) {
      CHECK(back.tags[i].time_ps == sim.stream.tags[i].time_ps);
      CHECK(back.tags[i].port == sim.stream.tags[i].port);
    }
    std::filesystem::remove(path);
  }

  TEST_CASE("malformed tag files are rejected") {
    const auto path = scratch("bad_tags.csv");
    {
      std::ofstream out(path);
      out << "time_ps,port\n200,0\n100,1\n";
    }
    CHECK_THROWS_AS(read_tag_csv(path.string(), 1.0), DataError);
    {
      std::ofstream out(path);
      out << "time_ps,port\n100,7\n";
    }
    CHECK_THROWS_AS(read_tag_csv(path.string(), 1.0), DataError);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_tag_csv(path.string(), 1.0), IoError);
  }

  TEST_CASE("configuration checks") {
    TransmitterConfig tx;
    tx.visibility = 1.2;
    CHECK_THROWS(tx.validate());
    DetectorModel det;
    det.efficiency = 1.5;
    CHECK_THROWS(det.validate());
    CHECK(parse_monitored_ports("both") == MonitoredPorts::both);
    CHECK_THROWS(parse_monitored_ports("three"));
    CHECK_THROWS_AS(simulate_timetags({}, {}, 10.0, {}, 0.0, -1.0, 1), ArgumentError);
  }
}
