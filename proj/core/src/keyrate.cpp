#include "dpsqkd/keyrate.hpp"

#include <cmath>

#include "dpsqkd/error.hpp"

namespace dpsqkd {

double binary_entropy(double e) {
  if (!(e >= 0.0 && e <= 1.0)) throw DomainError("binary entropy argument must be in [0, 1]");
  if (e == 0.0 || e == 1.0) return 0.0;
  return -e * std::log2(e) - (1.0 - e) * std::log2(1.0 - e);
}

double dps_shrink_factor(double e) {
  if (!(e >= 0.0 && e <= 1.0)) throw DomainError("QBER must be in [0, 1]");
  if (e >= 1.0 / 6.0) return 0.0;
  const double a = 1.0 - 6.0 * e;
  const double p_collision = 1.0 - e * e - a * a / 2.0;
  return -std::log2(p_collision);
}

KeyRateReport secure_rate(double raw_rate_bps, double qber, double f_ec, double symbol_rate_hz) {
  if (!(raw_rate_bps >= 0.0)) throw DomainError("raw rate must be >= 0");
  if (!(f_ec >= 1.0)) throw DomainError("f_ec must be >= 1");
  if (!(symbol_rate_hz > 0.0)) throw DomainError("symbol rate must be > 0");
  KeyRateReport r;
  r.f_ec = f_ec;
  r.h_e = binary_entropy(qber);
  r.shrink_factor = dps_shrink_factor(qber);
  r.ec_leakage = f_ec * r.h_e;
  const double per_bit = r.shrink_factor - r.ec_leakage;
  r.secure_rate = per_bit > 0.0 ? raw_rate_bps * per_bit : 0.0;
  r.secure_bits_per_pulse = r.secure_rate / symbol_rate_hz;
  return r;
}

double positivity_threshold(double f_ec) {
  if (!(f_ec >= 1.0)) throw DomainError("f_ec must be >= 1");
  auto g = [f_ec](double e) { return dps_shrink_factor(e) - f_ec * binary_entropy(e); };
  double lo = 1e-9;
  double hi = 1.0 / 6.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace dpsqkd
