#pragma once

#include <string>
#include <vector>

#include "dpsqkd/topology.hpp"

namespace dpsqkd {

enum class Direction { downstream, upstream };
enum class Band { L, C, CWDM, other };

Direction parse_direction(const std::string& text);
std::string to_string(Direction direction);
Band parse_band(const std::string& text);
std::string to_string(Band band);

/// A classical WDM carrier sharing the ODN with the quantum channel.
struct WavelengthChannel {
  double center_nm = 1550.0;
  double launch_power_dbm = 0.0;
  Direction direction = Direction::downstream;
  Band band = Band::other;
  bool tdma_member = false;

  void validate() const;
};

struct QuantumChannel {
  double center_nm = 1310.0;
  Direction direction = Direction::upstream;
};

struct ChannelPlan {
  std::vector<WavelengthChannel> channels;
  QuantumChannel quantum;

  void validate() const;
};

/// One row of a Raman scattering table. Positive shifts are Stokes (signal
/// red of the pump), negative shifts anti-Stokes.
struct RamanSample {
  double shift_thz = 0.0;
  double coefficient = 0.0;  // relative, scaled by RamanProfile::scale
};

/// Spontaneous Raman capture coefficient versus pump-signal frequency shift.
/// coefficient(shift) * scale is in 1/(km nm): noise power per unit pump
/// power, fiber length and receiver bandwidth.
struct RamanProfile {
  std::vector<RamanSample> table;  // sorted by shift
  double scale = 1.0;

  /// Silica profile at 300 K seeded from the 13-mode intermediate-broadening
  /// fit of the fused-silica Raman gain, weighted by the phonon occupation
  /// (n + 1 Stokes, n anti-Stokes). Normalized to a Stokes peak of 1.
  static RamanProfile silica_default();

  double min_shift_thz() const { return table.front().shift_thz; }
  double max_shift_thz() const { return table.back().shift_thz; }
  void validate() const;
};

/// Reads rows "shift_THz,coefficient" (header and '#' comments allowed).
RamanProfile load_raman_profile_csv(const std::string& path, double scale = 1.0);

/// Frequency shift pump -> signal in THz (positive for Stokes).
double raman_shift_thz(double pump_nm, double signal_nm);

/// Scaled coefficient for a pump/signal pair, 1/(km nm). Throws RangeError
/// if the shift lies outside the table.
double raman_coefficient(const RamanProfile& profile, double pump_nm, double signal_nm);

/// Raman photons/s co-propagating with the pump, exiting the span output.
/// Integrates generation along the span with pump decay at pump_nm and
/// noise decay at signal_nm.
double forward_raman_rate(double pump_mw, double coefficient, const FiberSpan& span,
                          double bandwidth_nm, double pump_nm, double signal_nm);

/// Raman photons/s counter-propagating to the pump, exiting the span input.
double backward_raman_rate(double pump_mw, double coefficient, const FiberSpan& span,
                           double bandwidth_nm, double pump_nm, double signal_nm);

/// Noise reaching the quantum receiver, split by origin.
struct RamanContribution {
  double delta_f = 0.0;                 // downstream pumps, feeder forward scattering
  double delta_d = 0.0;                 // downstream pumps, drop backscattering
  double upstream_copropagating = 0.0;  // upstream pumps over drop + feeder
  double total_at_receiver = 0.0;

  RamanContribution& operator+=(const RamanContribution& other);
};

/// Noise at Bob's receiver for an upstream quantum channel. All rates are in
/// the receiver's count units: the calibrated scale absorbs detection
/// efficiency and receiver losses.
RamanContribution odn_noise_at_bob(const ChannelPlan& plan, const OdnTopology& topology,
                                   const FilterProfile& rx_filter, const RamanProfile& profile);

/// Noise rejection of filter b relative to filter a (dB), from the ratio of
/// equivalent noise bandwidths.
double filter_noise_rejection(const FilterProfile& filter_a, const FilterProfile& filter_b);

/// Launch power that makes a wide receive filter collect the noise the narrow
/// filter would collect at the original power.
double equivalent_dwdm_power(double channel_power_dbm, const FilterProfile& wide,
                             const FilterProfile& narrow);

}  // namespace dpsqkd
