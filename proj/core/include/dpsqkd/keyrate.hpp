#pragma once

namespace dpsqkd {

/// h(e) in bits; h(0) = h(1) = 0. Throws DomainError outside [0, 1].
double binary_entropy(double e);

/// Privacy-amplification shrink factor against individual attacks on DPS:
/// -log2(1 - e^2 - (1 - 6e)^2 / 2). Zero at e >= 1/6 (no key).
double dps_shrink_factor(double e);

struct KeyRateReport {
  double secure_rate = 0.0;            // bits/s
  double secure_bits_per_pulse = 0.0;  // bits per transmitted symbol
  double shrink_factor = 0.0;
  double h_e = 0.0;
  double ec_leakage = 0.0;  // f_ec * h(e)
  double f_ec = 1.45;
};

/// R = raw_rate * (tau(e) - f_ec * h(e)), clamped at 0.
KeyRateReport secure_rate(double raw_rate_bps, double qber, double f_ec = 1.45,
                          double symbol_rate_hz = 1e9);

/// Largest QBER with a positive key for the given f_ec.
double positivity_threshold(double f_ec = 1.45);

}  // namespace dpsqkd
