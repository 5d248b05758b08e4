#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dpsqkd/dps_link.hpp"

namespace dpsqkd {

/// Coincidence window around each pulse center.
struct GateConfig {
  double gate_fraction = 0.3;  // window width as a fraction of the symbol period
  double symbol_period_s = 1e-9;
  /// Offset of the pulse center from kT + T/2; estimated from the tags if unset.
  std::optional<double> slot_phase_s;

  void validate() const;
};

struct GatedClick {
  std::int64_t slot = 0;
  Port port = Port::constructive;
};

struct GateResult {
  std::vector<GatedClick> clicks;
  std::uint64_t rejected = 0;
  double slot_phase_s = 0.0;  // phase actually used
};

/// Offset in (-T/2, T/2] of the pulse center from kT + T/2, from the
/// background-subtracted circular mean of the tag phases.
double estimate_slot_phase(const TimeTagStream& stream, double symbol_period_s);

/// Keeps tags with |t - center_k| <= gate_fraction * T / 2 (closed interval).
GateResult apply_gate(const TimeTagStream& stream, const GateConfig& gate);

struct QberReport {
  double qber = 0.0;
  double raw_rate = 0.0;  // sifted clicks per second
  std::uint64_t sifted_bits = 0;
  std::uint64_t error_bits = 0;
  std::uint64_t gated_rejected = 0;
  double duration_s = 0.0;
  double slot_phase_s = 0.0;
};

/// Gate, sift and compare against the ground truth. Every gated click is a
/// sifted bit: its value is the port index. Throws DataError when a click
/// falls outside the truth span.
QberReport sift_and_score(const TimeTagStream& stream, const DifferentialTruth& truth,
                          const GateConfig& gate);

/// QBER of a mixture of signal clicks with error fraction signal_error and
/// uniformly random background clicks. Throws DomainError if both rates are 0.
double qber_composition_oracle(double signal_rate, double signal_error, double background_rate);

}  // namespace dpsqkd
