#include <doctest.h>

#include <cmath>

#include "dpsqkd/error.hpp"
#include "dpsqkd/raman.hpp"
#include "dpsqkd/units.hpp"

using namespace dpsqkd;

namespace {

// Simpson integration of the generation-propagation kernel.
template <class F>
double simpson(F f, double a, double b, int n = 4000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + h * i) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

FilterProfile dwdm() {
  FilterProfile f;
  f.center_nm = 1310.0;
  f.table = load_filter_table_csv(DPSQKD_SOURCE_DIR "/core/data/filters/dwdm_1310.csv");
  return f;
}

FilterProfile cwdm() {
  FilterProfile f;
  f.center_nm = 1310.0;
  f.fwhm_nm = 15.0;
  f.table = load_filter_table_csv(DPSQKD_SOURCE_DIR "/core/data/filters/cwdm_1310.csv");
  return f;
}

}  // namespace

TEST_SUITE("raman") {
  TEST_CASE("shift sign convention") {
    CHECK(raman_shift_thz(1550.0, 1310.0) < 0.0);  // anti-Stokes
    CHECK(raman_shift_thz(1310.0, 1550.0) > 0.0);
    CHECK(raman_shift_thz(1550.0, 1550.0) == doctest::Approx(0.0));
  }

  TEST_CASE("default profile shape") {
    const RamanProfile p = RamanProfile::silica_default();
    CHECK_NOTHROW(p.validate());
    CHECK(p.table.size() == 401);
    double peak = 0.0;
    double peak_shift = 0.0;
    for (const auto& s : p.table) {
      if (s.coefficient > peak) {
        peak = s.coefficient;
        peak_shift = s.shift_thz;
      }
    }
    CHECK(peak == doctest::Approx(1.0));
    CHECK(peak_shift > 12.0);
    CHECK(peak_shift < 15.0);
    // Anti-Stokes is thermally suppressed relative to the mirrored Stokes line.
    RamanProfile unit = p;
    unit.scale = 1.0;
    const double stokes = raman_coefficient(unit, 1310.0, thz_to_wavelength_nm(wavelength_nm_to_thz(1310.0) - 13.2));
    const double anti = raman_coefficient(unit, 1310.0, thz_to_wavelength_nm(wavelength_nm_to_thz(1310.0) + 13.2));
    CHECK(anti < stokes);
    CHECK(anti / stokes == doctest::Approx(std::exp(-constants::planck * 13.2e12 /
                                                    (constants::boltzmann * 300.0)))
                               .epsilon(1e-2));
  }

  TEST_CASE("coefficient outside the table throws") {
    const RamanProfile p = RamanProfile::silica_default();
    CHECK_THROWS_AS(raman_coefficient(p, 1310.0, 1700.0), RangeError);
  }

  TEST_CASE("forward and backward rates match quadrature") {
    const FiberSpan span = FiberSpan::standard(15.1);
    const double pump = 1550.12;
    const double sig = 1310.0;
    const double ap = db_per_km_to_nepers(attenuation_at(span, pump));
    const double as = db_per_km_to_nepers(attenuation_at(span, sig));
    const double L = span.length_km;
    const double k = 1e-9 * 1.3 * 2.0;  // coefficient * bandwidth * mW
    const double fwd = simpson([&](double z) { return std::exp(-ap * z - as * (L - z)); }, 0, L);
    const double bwd = simpson([&](double z) { return std::exp(-ap * z - as * z); }, 0, L);
    CHECK(forward_raman_rate(2.0, 1e-9, span, 1.3, pump, sig) ==
          doctest::Approx(photon_flux(k * fwd, sig)).epsilon(1e-10));
    CHECK(backward_raman_rate(2.0, 1e-9, span, 1.3, pump, sig) ==
          doctest::Approx(photon_flux(k * bwd, sig)).epsilon(1e-10));
  }

  TEST_CASE("forward rate versus length peaks near 1/(a_p - a_s)") {
    const double pump = 1550.12;
    const double sig = 1310.0;
    double best_len = 0.0;
    double best = 0.0;
    for (double len = 1.0; len <= 40.0; len += 0.1) {
      const double r = forward_raman_rate(1.0, 1e-9, FiberSpan::standard(len), 1.0, pump, sig);
      if (r > best) {
        best = r;
        best_len = len;
      }
    }
    const FiberSpan span = FiberSpan::standard(1.0);
    const double ap = db_per_km_to_nepers(attenuation_at(span, pump));
    const double as = db_per_km_to_nepers(attenuation_at(span, sig));
    CHECK(best_len == doctest::Approx(std::log(as / ap) / (as - ap)).epsilon(0.01));
  }

  TEST_CASE("rates are linear in pump power and bandwidth") {
    const FiberSpan span = FiberSpan::standard(10.0);
    const double r1 = forward_raman_rate(1.0, 1e-9, span, 1.0, 1550.0, 1310.0);
    CHECK(forward_raman_rate(3.0, 1e-9, span, 1.0, 1550.0, 1310.0) == doctest::Approx(3 * r1));
    CHECK(forward_raman_rate(1.0, 1e-9, span, 2.5, 1550.0, 1310.0) == doctest::Approx(2.5 * r1));
    CHECK(forward_raman_rate(0.0, 1e-9, span, 1.0, 1550.0, 1310.0) == 0.0);
    CHECK_THROWS_AS(forward_raman_rate(-1.0, 1e-9, span, 1.0, 1550.0, 1310.0), DomainError);
  }

  TEST_CASE("upstream noise halves when the split doubles") {
    ChannelPlan plan;
    WavelengthChannel ch;
    ch.center_nm = 1550.12;
    ch.launch_power_dbm = 5.0;
    ch.direction = Direction::upstream;
    plan.channels.push_back(ch);
    OdnTopology topo;
    const RamanProfile p = RamanProfile::silica_default();
    double previous = INFINITY;
    double n16 = 0.0;
    double n32 = 0.0;
    for (int n : {2, 4, 8, 16, 32}) {
      topo.splitter.ports = n;
      const double noise = odn_noise_at_bob(plan, topo, dwdm(), p).total_at_receiver;
      CHECK(noise < previous);
      previous = noise;
      if (n == 16) n16 = noise;
      if (n == 32) n32 = noise;
    }
    CHECK(n32 / n16 == doctest::Approx(0.5).epsilon(1e-9));
  }

  TEST_CASE("TDMA members count once") {
    ChannelPlan plan;
    for (double dbm : {3.0, 5.0, 4.0}) {
      WavelengthChannel ch;
      ch.center_nm = 1550.12;
      ch.launch_power_dbm = dbm;
      ch.direction = Direction::upstream;
      ch.tdma_member = true;
      plan.channels.push_back(ch);
    }
    ChannelPlan single;
    single.channels = {plan.channels[1]};
    single.channels[0].tdma_member = false;
    OdnTopology topo;
    const RamanProfile p = RamanProfile::silica_default();
    CHECK(odn_noise_at_bob(plan, topo, dwdm(), p).total_at_receiver ==
          doctest::Approx(odn_noise_at_bob(single, topo, dwdm(), p).total_at_receiver));
  }

  TEST_CASE("feeder scattering is suppressed by splitter directivity") {
    ChannelPlan plan;
    WavelengthChannel ch;
    ch.center_nm = 1550.0;
    ch.launch_power_dbm = 2.5;
    ch.direction = Direction::downstream;
    plan.channels.push_back(ch);
    OdnTopology topo;
    const RamanProfile p = RamanProfile::silica_default();
    const auto a = odn_noise_at_bob(plan, topo, dwdm(), p);
    topo.splitter.directivity_db += 10.0;
    const auto b = odn_noise_at_bob(plan, topo, dwdm(), p);
    CHECK(b.delta_f == doctest::Approx(a.delta_f / 10.0));
    CHECK(b.delta_d == doctest::Approx(a.delta_d));
    CHECK(a.total_at_receiver == doctest::Approx(a.delta_f + a.delta_d));
  }

  TEST_CASE("downstream quantum channel is rejected") {
    ChannelPlan plan;
    plan.channels.push_back({});
    plan.quantum.direction = Direction::downstream;
    CHECK_THROWS_AS(odn_noise_at_bob(plan, {}, dwdm(), RamanProfile::silica_default()),
                    ArgumentError);
  }

  TEST_CASE("bundled filter tables reject 11.9 dB") {
    CHECK(std::abs(filter_noise_rejection(cwdm(), dwdm()) - 11.9) < 1e-9);
  }

  TEST_CASE("equivalent power through the wide filter reproduces the narrow filter") {
    OdnTopology topo;
    const RamanProfile p = RamanProfile::silica_default();
    for (double dbm : {0.0, 5.0, 9.0}) {
      ChannelPlan full;
      WavelengthChannel ch;
      ch.center_nm = 1550.12;
      ch.launch_power_dbm = dbm;
      ch.direction = Direction::upstream;
      full.channels.push_back(ch);
      ChannelPlan reduced = full;
      reduced.channels[0].launch_power_dbm = equivalent_dwdm_power(dbm, cwdm(), dwdm());
      CHECK(reduced.channels[0].launch_power_dbm == doctest::Approx(dbm - 11.9).epsilon(1e-3));
      const double narrow = odn_noise_at_bob(full, topo, dwdm(), p).total_at_receiver;
      const double wide = odn_noise_at_bob(reduced, topo, cwdm(), p).total_at_receiver;
      CHECK(std::abs(wide - narrow) <= 1e-9 * narrow);
    }
  }

  TEST_CASE("profile csv round trip") {
    const RamanProfile p =
        load_raman_profile_csv(DPSQKD_SOURCE_DIR "/core/data/raman_silica_300k.csv", 2.0);
    const RamanProfile d = RamanProfile::silica_default();
    REQUIRE(p.table.size() == d.table.size());
    for (std::size_t i = 0; i < p.table.size(); i += 37) {
      CHECK(p.table[i].shift_thz == doctest::Approx(d.table[i].shift_thz));
      CHECK(p.table[i].coefficient == doctest::Approx(d.table[i].coefficient).epsilon(1e-6));
    }
    CHECK(p.scale == 2.0);
  }
}
