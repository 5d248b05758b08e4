#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "dpsqkd/error.hpp"
#include "dpsqkd/topology.hpp"
#include "dpsqkd/units.hpp"

using namespace dpsqkd;

namespace {

// Trapezoid rule for the integral of exp(-a z) over [0, L].
double trapezoid_effective_length(double length_km, double db_per_km, int steps = 20000) {
  const double a = db_per_km_to_nepers(db_per_km);
  const double h = length_km / steps;
  double sum = 0.5 * (1.0 + std::exp(-a * length_km));
  for (int i = 1; i < steps; ++i) sum += std::exp(-a * h * i);
  return sum * h;
}

}  // namespace

TEST_SUITE("topology") {
  TEST_CASE("effective length matches quadrature and its limits") {
    for (double length : {0.5, 1.0, 16.0, 40.0}) {
      for (double att : {0.21, 0.37}) {
        CHECK(effective_length(length, att) ==
              doctest::Approx(trapezoid_effective_length(length, att)).epsilon(1e-8));
      }
    }
    CHECK(effective_length(10.0, 0.0) == doctest::Approx(10.0));
    CHECK(effective_length(10.0, 1e-14) == doctest::Approx(10.0));
    CHECK(effective_length(0.0, 0.37) == 0.0);
    // Long spans saturate at 1/alpha.
    CHECK(effective_length(5000.0, 0.2) == doctest::Approx(1.0 / db_per_km_to_nepers(0.2)));
  }

  TEST_CASE("attenuation table interpolates and refuses extrapolation") {
    FiberSpan span = FiberSpan::standard(1.0);
    CHECK(attenuation_at(span, 1310.0) == doctest::Approx(0.37));
    CHECK(attenuation_at(span, 1550.0) == doctest::Approx(0.21));
    CHECK(attenuation_at(span, 1430.0) == doctest::Approx(0.37 + (0.21 - 0.37) * 120.0 / 240.0));
    CHECK_THROWS_AS(attenuation_at(span, 1200.0), RangeError);
    CHECK_THROWS_AS(attenuation_at(span, 1700.0), RangeError);
  }

  TEST_CASE("baseline upstream path loss") {
    OdnTopology topo;
    const auto path = OdnTopology::upstream_quantum_path();
    const double loss = path_loss(topo, 1310.0, std::span<const Element>(path));
    // 16.1 km at 0.37 dB/km plus an ideal 1:16 split.
    CHECK(loss == doctest::Approx(16.1 * 0.37 + 10.0 * std::log10(16.0)).epsilon(1e-12));
    CHECK(std::round(loss * 100.0) / 100.0 == doctest::Approx(18.00));
  }

  TEST_CASE("path loss is additive over elements") {
    OdnTopology topo;
    topo.onu_filter.insertion_loss_db = 1.0;
    topo.co_filter.insertion_loss_db = 2.0;
    topo.splitter.excess_loss_db = 0.7;
    const std::vector<Element> all = OdnTopology::upstream_quantum_path();
    double sum = 0.0;
    for (auto e : all) sum += element_loss(topo, e, 1310.0);
    CHECK(std::abs(path_loss(topo, 1310.0, std::span<const Element>(all)) - sum) < 1e-9);

    for (std::size_t cut = 1; cut < all.size(); ++cut) {
      std::vector<Element> head(all.begin(), all.begin() + static_cast<long>(cut));
      std::vector<Element> tail(all.begin() + static_cast<long>(cut), all.end());
      const double split = path_loss(topo, 1310.0, std::span<const Element>(head)) +
                           path_loss(topo, 1310.0, std::span<const Element>(tail));
      CHECK(std::abs(split - sum) < 1e-9);
    }
  }

  TEST_CASE("string element ids") {
    OdnTopology topo;
    const std::vector<std::string> ids = {"drop", "splitter", "feeder_up"};
    const std::vector<Element> typed = {Element::drop, Element::splitter, Element::feeder_up};
    CHECK(path_loss(topo, 1310.0, std::span<const std::string>(ids)) ==
          path_loss(topo, 1310.0, std::span<const Element>(typed)));
    const std::vector<std::string> bad = {"drop", "amplifier"};
    CHECK_THROWS_AS(path_loss(topo, 1310.0, std::span<const std::string>(bad)), LookupError);
    for (auto e : typed) CHECK(parse_element(to_string(e)) == e);
  }

  TEST_CASE("probe point rho sits after the splitter") {
    OdnTopology topo;
    const auto& rho = topo.probes.at("rho");
    const double loss = path_loss(topo, 1310.0, std::span<const Element>(rho));
    CHECK(loss == doctest::Approx(0.37 + 10.0 * std::log10(16.0)));
  }

  TEST_CASE("splitter loss") {
    Splitter s;
    for (int n : {2, 4, 8, 16, 32, 64}) {
      s.ports = n;
      CHECK(s.split_loss_db() == doctest::Approx(10.0 * std::log10(n)));
    }
    for (int bad : {0, 3, 12}) {
      s.ports = bad;
      CHECK_THROWS_AS(s.validate(), DomainError);
    }
  }

  TEST_CASE("flat filter noise bandwidth and loss") {
    FilterProfile f = FilterProfile::flat(1310.0, 13.0, 1.0);
    CHECK(f.noise_bandwidth_nm() == doctest::Approx(13.0));
    CHECK(f.loss_db(1310.0) == doctest::Approx(1.0));
    CHECK(f.loss_db(1316.0) == doctest::Approx(1.0));
    CHECK(f.loss_db(1330.0) == doctest::Approx(1.0 + f.out_of_band_rejection_db));
    CHECK(f.in_band_transmission() == doctest::Approx(db_to_linear(-1.0)));
  }

  TEST_CASE("tabulated filter noise bandwidth matches fine quadrature") {
    const auto dwdm = load_filter_table_csv(DPSQKD_SOURCE_DIR "/core/data/filters/dwdm_1310.csv");
    FilterProfile f;
    f.table = dwdm;
    // Midpoint rule on the same linear-in-dB interpolation.
    double area = 0.0;
    for (std::size_t i = 1; i < dwdm.size(); ++i) {
      const int steps = 2000;
      const double w = dwdm[i].wavelength_nm - dwdm[i - 1].wavelength_nm;
      for (int k = 0; k < steps; ++k) {
        const double t = (k + 0.5) / steps;
        const double db = dwdm[i - 1].value + t * (dwdm[i].value - dwdm[i - 1].value);
        area += db_to_linear(db) * w / steps;
      }
    }
    CHECK(f.noise_bandwidth_nm() == doctest::Approx(area).epsilon(1e-7));
    // A Gaussian of FWHM w has ENBW w * sqrt(pi / (4 ln 2)).
    CHECK(f.noise_bandwidth_nm() ==
          doctest::Approx(1.22 * std::sqrt(M_PI / (4.0 * std::log(2.0)))).epsilon(1e-3));
  }

  TEST_CASE("validation rejects bad spans and tables") {
    FiberSpan span = FiberSpan::standard(-1.0);
    CHECK_THROWS_AS(span.validate(), DomainError);
    FilterProfile f;
    f.table = {{1312.0, 0.0}, {1311.0, -3.0}};
    CHECK_THROWS(f.validate());
    CHECK_THROWS_AS(load_filter_table_csv("/nonexistent/filter.csv"), IoError);
  }
}
