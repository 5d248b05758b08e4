#include <doctest.h>

#include <cmath>

#include "dpsqkd/error.hpp"
#include "dpsqkd/keyrate.hpp"

using namespace dpsqkd;

TEST_SUITE("keyrate") {
  TEST_CASE("entropy and shrink factor spot values") {
    CHECK(std::abs(binary_entropy(0.5) - 1.0) <= 1e-12);
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(binary_entropy(0.11) == doctest::Approx(0.49991596).epsilon(1e-7));
    CHECK(binary_entropy(0.2) == doctest::Approx(binary_entropy(0.8)));
    CHECK(std::abs(dps_shrink_factor(0.0) - 1.0) <= 1e-12);
    CHECK(dps_shrink_factor(1.0 / 6.0) == 0.0);
    CHECK(dps_shrink_factor(0.3) == 0.0);
    CHECK_THROWS_AS(binary_entropy(-0.1), DomainError);
    CHECK_THROWS_AS(binary_entropy(1.1), DomainError);
  }

  TEST_CASE("shrink factor decreases with qber") {
    double previous = dps_shrink_factor(0.0);
    for (double e = 0.005; e < 0.15; e += 0.005) {
      const double t = dps_shrink_factor(e);
      CHECK(t < previous);
      CHECK(t >= 0.0);
      previous = t;
    }
  }

  TEST_CASE("baseline secure rate") {
    const KeyRateReport r = secure_rate(2700.0, 0.0377);
    CHECK(r.f_ec == 1.45);
    CHECK(r.secure_rate == doctest::Approx(2700.0 * (r.shrink_factor - 1.45 * r.h_e)));
    CHECK(r.secure_rate > 460.0);
    CHECK(r.secure_rate < 520.0);
    CHECK(r.secure_bits_per_pulse == doctest::Approx(r.secure_rate / 1e9));
    CHECK(r.ec_leakage == doctest::Approx(1.45 * binary_entropy(0.0377)));
  }

  TEST_CASE("positivity threshold") {
    const double e0 = positivity_threshold();
    CHECK(e0 > 0.045);
    CHECK(e0 < 0.055);
    CHECK(secure_rate(1000.0, e0 - 1e-4).secure_rate > 0.0);
    CHECK(secure_rate(1000.0, e0 + 1e-4).secure_rate == 0.0);
    CHECK(positivity_threshold(1.0) > e0);
  }

  TEST_CASE("secure rate is monotone and clamped") {
    double previous = INFINITY;
    for (double e = 0.0; e < 0.06; e += 0.002) {
      const double r = secure_rate(2700.0, e).secure_rate;
      CHECK(r <= previous);
      CHECK(r >= 0.0);
      previous = r;
    }
    CHECK(secure_rate(2700.0, 0.2).secure_rate == 0.0);
    CHECK(secure_rate(5400.0, 0.02).secure_rate ==
          doctest::Approx(2.0 * secure_rate(2700.0, 0.02).secure_rate));
  }
}
