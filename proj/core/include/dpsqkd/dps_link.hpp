#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace dpsqkd {

enum class Port : std::uint8_t { constructive = 0, destructive = 1 };
enum class TagOrigin : std::uint8_t { signal, dark, raman, afterpulse };
enum class MonitoredPorts { one, both };

MonitoredPorts parse_monitored_ports(const std::string& text);
std::string to_string(MonitoredPorts ports);

/// Random-access binary phase pattern (0 -> phase 0, 1 -> phase pi).
/// Seeded patterns are counter-based, so arbitrarily long runs need no storage.
class PatternSource {
public:
  static PatternSource seeded(std::uint64_t seed);
  static PatternSource explicit_phases(std::vector<std::uint8_t> phases);

  std::uint8_t phase(std::int64_t index) const;
  bool is_explicit() const { return !phases_.empty(); }
  std::uint64_t seed() const { return seed_; }

private:
  std::uint64_t seed_ = 0;
  std::vector<std::uint8_t> phases_;  // cycled when non-empty
};

struct TransmitterConfig {
  double symbol_rate_hz = 1e9;
  double mean_photon_number = 0.1;
  double carve_duty = 0.2;  // fraction of the symbol occupied by the carved pulse
  double visibility = 0.9956;
  /// Explicit phase pattern (cycled); empty means a seeded random pattern.
  std::vector<std::uint8_t> explicit_phases;

  double symbol_period_s() const { return 1.0 / symbol_rate_hz; }
  double intrinsic_error() const { return (1.0 - visibility) / 2.0; }
  void validate() const;
};

/// Free-running SPAD plus the lumped receiver loss in front of it.
///
/// After-pulsing: every registered avalanche schedules, with probability
/// afterpulse_prob * (1 + trap_load), an extra avalanche at
/// dead_time + Exp(afterpulse_decay) later. trap_load is the sum of
/// exp(-age / trap_memory) over earlier avalanches, i.e. carriers still held
/// in deep traps; it makes after-pulsing grow with count rate and drives the
/// QBER upturn of a saturating detector.
struct DetectorModel {
  double efficiency = 0.10;
  double dark_rate_cps = 520.0;  // per detector
  double dead_time_s = 10e-6;
  double afterpulse_prob = 0.02;
  double afterpulse_decay_s = 5e-6;
  double trap_memory_s = 400e-6;
  MonitoredPorts monitored_ports = MonitoredPorts::one;
  /// DI insertion, filter loss, single-port monitoring, carving and
  /// connectors, lumped and calibrated.
  double excess_loss_db = 14.87;

  int port_count() const { return monitored_ports == MonitoredPorts::one ? 1 : 2; }
  void validate() const;
};

struct DelayInterferometer {
  double delay_s = 1e-9;
  void validate() const;
};

struct PhaseTrain {
  std::vector<std::uint8_t> phases;             // 0 or 1 (pi)
  std::vector<std::uint8_t> differential_bits;  // phases[k+1] xor phases[k]
};

/// Throws ArgumentError for n_symbols < 2.
PhaseTrain generate_phase_train(const TransmitterConfig& config, std::size_t n_symbols,
                                std::uint64_t seed);

/// Ground-truth differential bit per symbol slot. Slot k holds the
/// interference of pulses k and k+1 of the pattern.
class DifferentialTruth {
public:
  DifferentialTruth() = default;
  DifferentialTruth(PatternSource source, std::uint64_t n_slots);
  static DifferentialTruth from_bits(std::vector<std::uint8_t> bits);

  std::uint64_t size() const { return n_slots_; }
  std::uint8_t bit(std::uint64_t slot) const;
  const PatternSource& source() const { return source_; }

private:
  PatternSource source_;
  std::uint64_t n_slots_ = 0;
  std::vector<std::uint8_t> bits_;
};

struct TimeTag {
  std::int64_t time_ps = 0;
  Port port = Port::constructive;
  TagOrigin origin = TagOrigin::signal;  // diagnostics only; estimators ignore it

  bool operator==(const TimeTag&) const = default;
};

struct TimeTagStream {
  std::vector<TimeTag> tags;  // sorted by time
  double duration_s = 0.0;

  double rate() const { return duration_s > 0 ? static_cast<double>(tags.size()) / duration_s : 0.0; }
};

struct SimulationResult {
  TimeTagStream stream;
  DifferentialTruth truth;
  std::uint64_t seed = 0;
};

/// Expected detector output for one operating point.
struct OracleRates {
  double signal_rate = 0.0;      // gated signal clicks/s
  double background_rate = 0.0;  // gated dark + Raman + after-pulse clicks/s
  double afterpulse_rate = 0.0;  // gated after-pulse clicks/s (part of background)
  double total_rate = 0.0;       // signal + background: the raw (sifted) rate
  double registered_rate = 0.0;  // all registered clicks/s before gating
  double signal_error = 0.0;     // error fraction of signal clicks
  double qber = 0.0;
};

/// Fraction of uniformly spread tags that a closed gate window keeps when
/// tag times are whole picoseconds (0.301 for a 0.3 gate at 1 ns).
double gate_acceptance(double gate_fraction, double symbol_period_s);

/// Closed-form click rates. Dead time is non-paralyzable; rates combine over
/// the monitored detectors. loss_budget_db excludes the receiver excess loss.
OracleRates click_rate_oracle(const TransmitterConfig& tx, double loss_budget_db,
                              const DetectorModel& det, double noise_rate_cps,
                              double gate_fraction, const DelayInterferometer& di = {});

/// Monte Carlo time-tag generation for `duration_s` of DPS transmission.
SimulationResult simulate_timetags(const TransmitterConfig& tx, const DelayInterferometer& di,
                                   double loss_budget_db, const DetectorModel& det,
                                   double noise_rate_cps, double duration_s, std::uint64_t seed);

/// Smallest gap between consecutive tags on the same port (ps); INT64_MAX if
/// no port has two tags.
std::int64_t min_same_port_gap_ps(const TimeTagStream& stream);

/// Tag stream export: CSV "time_ps,port" (port 0 constructive, 1 destructive).
void write_tag_csv(const TimeTagStream& stream, const std::string& path);
TimeTagStream read_tag_csv(const std::string& path, double duration_s);

}  // namespace dpsqkd
