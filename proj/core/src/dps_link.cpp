#include "dpsqkd/dps_link.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>

#include "dpsqkd/error.hpp"
#include "dpsqkd/rng.hpp"
#include "dpsqkd/units.hpp"

namespace dpsqkd {

MonitoredPorts parse_monitored_ports(const std::string& text) {
  if (text == "one") return MonitoredPorts::one;
  if (text == "both") return MonitoredPorts::both;
  throw LookupError("unknown monitored_ports '" + text + "' (expected one|both)");
}

std::string to_string(MonitoredPorts ports) { return ports == MonitoredPorts::one ? "one" : "both"; }

PatternSource PatternSource::seeded(std::uint64_t seed) {
  PatternSource s;
  s.seed_ = seed;
  return s;
}

PatternSource PatternSource::explicit_phases(std::vector<std::uint8_t> phases) {
  if (phases.empty()) {
    throw ArgumentError("explicit phase pattern is empty");
  }
  for (auto& p : phases) {
    if (p > 1) throw ArgumentError("phase pattern entries must be 0 or 1 (pi)");
  }
  PatternSource s;
  s.phases_ = std::move(phases);
  return s;
}

std::uint8_t PatternSource::phase(std::int64_t index) const {
  if (!phases_.empty()) {
    const auto n = static_cast<std::int64_t>(phases_.size());
    return phases_[static_cast<std::size_t>(((index % n) + n) % n)];
  }
  const auto u = static_cast<std::uint64_t>(index);
  const std::uint64_t block = splitmix64(seed_ ^ splitmix64(u >> 6));
  return static_cast<std::uint8_t>((block >> (u & 63U)) & 1U);
}

void TransmitterConfig::validate() const {
  if (!(symbol_rate_hz > 0.0)) throw DomainError("symbol_rate_hz must be > 0");
  if (!(mean_photon_number > 0.0)) throw DomainError("mean photon number must be > 0");
  if (!(carve_duty > 0.0 && carve_duty <= 1.0)) throw DomainError("carve_duty must be in (0, 1]");
  if (!(visibility > 0.0 && visibility <= 1.0)) throw DomainError("visibility must be in (0, 1]");
  for (auto p : explicit_phases) {
    if (p > 1) throw DomainError("explicit phases must be 0 or 1");
  }
}

void DetectorModel::validate() const {
  if (!(efficiency >= 0.0 && efficiency <= 1.0)) throw DomainError("efficiency must be in [0, 1]");
  if (!(dark_rate_cps >= 0.0)) throw DomainError("dark_rate_cps must be >= 0");
  if (!(dead_time_s >= 0.0)) throw DomainError("dead_time_s must be >= 0");
  if (!(afterpulse_prob >= 0.0 && afterpulse_prob <= 1.0)) {
    throw DomainError("afterpulse_prob must be in [0, 1]");
  }
  if (!(afterpulse_decay_s >= 0.0)) throw DomainError("afterpulse_decay_s must be >= 0");
  if (!(trap_memory_s >= 0.0)) throw DomainError("trap_memory_s must be >= 0");
  if (!std::isfinite(excess_loss_db)) throw DomainError("excess_loss_db must be finite");
}

void DelayInterferometer::validate() const {
  if (!(delay_s > 0.0)) throw DomainError("delay interferometer delay must be > 0");
}

PhaseTrain generate_phase_train(const TransmitterConfig& config, std::size_t n_symbols,
                                std::uint64_t seed) {
  if (n_symbols < 2) {
    throw ArgumentError("phase train needs at least 2 symbols");
  }
  const PatternSource source = config.explicit_phases.empty()
                                   ? PatternSource::seeded(derive_seed(seed, streams::pattern))
                                   : PatternSource::explicit_phases(config.explicit_phases);
  PhaseTrain train;
  train.phases.resize(n_symbols);
  for (std::size_t k = 0; k < n_symbols; ++k) {
    train.phases[k] = source.phase(static_cast<std::int64_t>(k));
  }
  train.differential_bits.resize(n_symbols - 1);
  for (std::size_t k = 0; k + 1 < n_symbols; ++k) {
    train.differential_bits[k] = train.phases[k + 1] ^ train.phases[k];
  }
  return train;
}

DifferentialTruth::DifferentialTruth(PatternSource source, std::uint64_t n_slots)
    : source_(std::move(source)), n_slots_(n_slots) {}

DifferentialTruth DifferentialTruth::from_bits(std::vector<std::uint8_t> bits) {
  DifferentialTruth t;
  t.n_slots_ = bits.size();
  t.bits_ = std::move(bits);
  return t;
}

std::uint8_t DifferentialTruth::bit(std::uint64_t slot) const {
  if (slot >= n_slots_) {
    throw DataError("slot " + std::to_string(slot) + " outside ground truth (" +
                    std::to_string(n_slots_) + " slots)");
  }
  if (!bits_.empty()) return bits_[slot];
  const auto k = static_cast<std::int64_t>(slot);
  return source_.phase(k + 1) ^ source_.phase(k);
}

namespace {

// Interference geometry of a possibly mistuned delay interferometer.
struct Demodulation {
  std::int64_t delay_slots = 1;
  double visibility = 1.0;  // effective fringe visibility
};

Demodulation demodulation(const TransmitterConfig& tx, const DelayInterferometer& di) {
  const double delay_in_symbols = di.delay_s * tx.symbol_rate_hz;
  Demodulation d;
  d.delay_slots = std::llround(delay_in_symbols);
  const double misalignment = std::abs(delay_in_symbols - static_cast<double>(d.delay_slots));
  const double overlap = std::max(0.0, 1.0 - misalignment / tx.carve_duty);
  d.visibility = d.delay_slots == 0 ? 0.0 : tx.visibility * overlap;
  return d;
}

// Mean photon number per slot reaching the monitored detectors in total.
double mean_detected_photons(const TransmitterConfig& tx, double loss_budget_db,
                             const DetectorModel& det) {
  return tx.mean_photon_number * det.efficiency *
         db_to_linear(-(loss_budget_db + det.excess_loss_db));
}

// Per-port means for slots where the port is / is not the demodulated one.
// With a single monitored port the lumped excess loss already carries the
// 3 dB of the unobserved output, so the observed port gets twice the share.
std::pair<double, double> port_means(double mean_photons, double visibility,
                                     MonitoredPorts monitored) {
  const double share = monitored == MonitoredPorts::one ? 1.0 : 0.5;
  return {mean_photons * share * (1.0 + visibility), mean_photons * share * (1.0 - visibility)};
}

// Mean trap load seen by a click: the sum over earlier clicks of
// exp(-age / memory). Between clicks the load evolves as
// L' = (L + 1) exp(-I / memory), where the interval I is the dead time plus
// the first of a primary (rate lambda) and, with probability p0 (1 + L), an
// after-pulse. Both moment equations are linear in p, so E[L] and E[L^2]
// follow by iteration with a Gaussian closure for E[L^3].
double mean_trap_load(double lambda, const DetectorModel& det) {
  if (det.trap_memory_s <= 0.0 || det.afterpulse_prob <= 0.0) return 0.0;
  const double td = det.dead_time_s;
  const double decay = det.afterpulse_decay_s;
  const double p0 = det.afterpulse_prob;
  // E[exp(-k I / memory)] = e_k (a_k + p (b_k - a_k)).
  auto coeffs = [&](double k) {
    const double s = k / det.trap_memory_s;
    const double a = lambda / (lambda + s);
    const double b = decay > 0.0 ? (lambda + 1.0 / decay) / (lambda + 1.0 / decay + s) : 1.0;
    return std::array<double, 3>{std::exp(-s * td), a, b};
  };
  const auto [e1, a1, b1] = coeffs(1.0);
  const auto [e2, a2, b2] = coeffs(2.0);
  const double c0 = e1 * (a1 + p0 * (b1 - a1));
  const double c1 = e1 * p0 * (b1 - a1);
  const double d0 = e2 * (a2 + p0 * (b2 - a2));
  const double d1 = e2 * p0 * (b2 - a2);

  double m1 = 0.0;
  double m2 = 0.0;
  for (int it = 0; it < 100000; ++it) {
    const double var = std::max(0.0, m2 - m1 * m1);
    const double m3 = m1 * m1 * m1 + 3.0 * m1 * var;
    const double m1_next = c0 + (c0 + c1) * m1 + c1 * m2;
    const double m2_next = d0 * (m2 + 2.0 * m1 + 1.0) + d1 * (m3 + 2.0 * m2 + m1);
    if (!std::isfinite(m1_next) || m1_next > 1.0 / p0) {
      return std::numeric_limits<double>::infinity();  // after-pulse runaway
    }
    const bool settled = std::abs(m1_next - m1) <= 1e-14 * (1.0 + m1) &&
                         std::abs(m2_next - m2) <= 1e-14 * (1.0 + m2);
    m1 = 0.5 * (m1 + m1_next);
    m2 = 0.5 * (m2 + m2_next);
    if (settled) break;
  }
  return m1;
}

struct DetectorOracle {
  double signal_registered = 0.0;
  double signal_errors = 0.0;
  double background_registered = 0.0;
  double afterpulse_registered = 0.0;
  double registered = 0.0;
};

DetectorOracle detector_oracle(double signal_in, double signal_wrong_in, double background_in,
                               const DetectorModel& det) {
  DetectorOracle out;
  const double lambda = signal_in + background_in;
  if (lambda <= 0.0) return out;
  const double td = det.dead_time_s;
  const double decay = det.afterpulse_decay_s;
  // An after-pulse is lost when a primary registers first and its dead time
  // covers the after-pulse.
  const double ld = lambda * decay;
  const double survival =
      decay > 0.0 ? 1.0 - (1.0 - std::exp(-td / decay)) * ld / (1.0 + ld) : 1.0;

  const double p_mean = std::min(1.0, det.afterpulse_prob * (1.0 + mean_trap_load(lambda, det)));
  const double denom = 1.0 - p_mean * survival + lambda * td;
  double registered = denom > 0.0 ? lambda / denom : std::numeric_limits<double>::infinity();
  if (!std::isfinite(registered) || registered * td > 1.0) {
    // After-pulse runaway: the detector is permanently re-triggered.
    registered = td > 0.0 ? 1.0 / td : lambda;
  }
  const double live = std::max(0.0, 1.0 - registered * td);
  const double primary = lambda * live;
  out.registered = registered;
  out.signal_registered = signal_in * live;
  out.signal_errors = signal_wrong_in * live;
  out.background_registered = background_in * live;
  out.afterpulse_registered = std::max(0.0, registered - primary);
  return out;
}

}  // namespace

double gate_acceptance(double gate_fraction, double symbol_period_s) {
  const auto period = static_cast<double>(std::llround(symbol_period_s * 1e12));
  if (!(period >= 1.0)) throw DomainError("symbol period must be >= 1 ps");
  // Integer offsets w in [0, period) with |2w - period| <= gate_fraction * period.
  const double half = gate_fraction * period;
  const double lo = std::max(0.0, std::ceil((period - half) / 2.0));
  const double hi = std::min(period - 1.0, std::floor((period + half) / 2.0));
  return std::max(0.0, hi - lo + 1.0) / period;
}

OracleRates click_rate_oracle(const TransmitterConfig& tx, double loss_budget_db,
                              const DetectorModel& det, double noise_rate_cps,
                              double gate_fraction, const DelayInterferometer& di) {
  if (loss_budget_db < 0.0) throw DomainError("loss budget must be >= 0 dB");
  if (!(gate_fraction > 0.0 && gate_fraction <= 1.0)) {
    throw DomainError("gate fraction must be in (0, 1]");
  }
  if (noise_rate_cps < 0.0) throw DomainError("noise rate must be >= 0");

  const Demodulation demod = demodulation(tx, di);
  const double m = mean_detected_photons(tx, loss_budget_db, det);
  const auto [m_hit, m_miss] = port_means(m, demod.visibility, det.monitored_ports);
  const double p_hit = -std::expm1(-m_hit);
  const double p_miss = -std::expm1(-m_miss);

  // Each port sees a "hit" slot half of the time.
  const double signal_in = tx.symbol_rate_hz * 0.5 * (p_hit + p_miss);
  const double wrong_in =
      demod.delay_slots == 1 ? tx.symbol_rate_hz * 0.5 * p_miss : 0.5 * signal_in;
  const double background_in = det.dark_rate_cps + noise_rate_cps;

  const DetectorOracle one = detector_oracle(signal_in, wrong_in, background_in, det);
  const double ports = det.port_count();
  const double signal_gate = std::min(1.0, gate_fraction / tx.carve_duty);

  OracleRates r;
  r.signal_rate = ports * one.signal_registered * signal_gate;
  const double acceptance = gate_acceptance(gate_fraction, tx.symbol_period_s());
  r.afterpulse_rate = ports * one.afterpulse_registered * acceptance;
  r.background_rate = ports * one.background_registered * acceptance + r.afterpulse_rate;
  r.total_rate = r.signal_rate + r.background_rate;
  r.registered_rate = ports * one.registered;
  r.signal_error = one.signal_registered > 0.0 ? one.signal_errors / one.signal_registered : 0.0;
  r.qber = r.total_rate > 0.0
               ? (r.signal_error * r.signal_rate + 0.5 * r.background_rate) / r.total_rate
               : 0.0;
  return r;
}

namespace {

struct Event {
  std::int64_t time_ps;
  TagOrigin origin;
};

struct LaterFirst {
  bool operator()(const Event& a, const Event& b) const { return a.time_ps > b.time_ps; }
};

std::vector<Event> signal_events(const TransmitterConfig& tx, const Demodulation& demod,
                                 const PatternSource& pattern, std::uint64_t n_slots,
                                 double m_hit, double m_miss, std::uint8_t port, Rng& rng) {
  std::vector<Event> out;
  const double p_hit = -std::expm1(-m_hit);
  const double p_miss = -std::expm1(-m_miss);
  const double p_max = std::max(p_hit, p_miss);
  if (p_max <= 0.0) return out;
  const double period_ps = 1e12 / tx.symbol_rate_hz;
  std::uint64_t slot = 0;
  bool first = true;
  while (true) {
    const std::uint64_t skip = rng.geometric(p_max);
    if (skip >= n_slots) break;
    slot = first ? skip : slot + 1 + skip;
    first = false;
    if (slot >= n_slots) break;
    const auto k = static_cast<std::int64_t>(slot);
    const std::uint8_t demodulated = pattern.phase(k + 1) ^ pattern.phase(k + 1 - demod.delay_slots);
    const double p = demodulated == port ? p_hit : p_miss;
    const double accept = rng.uniform();
    const double jitter = rng.uniform();
    if (accept * p_max >= p) continue;
    const double t = (static_cast<double>(slot) + 0.5 + (jitter - 0.5) * tx.carve_duty) * period_ps;
    out.push_back({std::llround(t), TagOrigin::signal});
  }
  return out;
}

std::vector<Event> background_events(double dark_cps, double noise_cps, double duration_s,
                                     Rng& rng) {
  std::vector<Event> out;
  const double rate = dark_cps + noise_cps;
  if (rate <= 0.0) return out;
  const double dark_share = dark_cps / rate;
  double t = 0.0;
  while (true) {
    t += rng.exponential(1.0 / rate);
    if (t >= duration_s) break;
    const TagOrigin origin = rng.uniform() < dark_share ? TagOrigin::dark : TagOrigin::raman;
    out.push_back({std::llround(t * 1e12), origin});
  }
  return out;
}

// Dead time, after-pulsing and trap memory of one free-running detector.
std::vector<TimeTag> detect(const std::vector<Event>& signal, const std::vector<Event>& background,
                            const DetectorModel& det, Port port, double duration_s, Rng& rng) {
  const std::int64_t dead_ps = std::llround(det.dead_time_s * 1e12);
  const auto end_ps = static_cast<std::int64_t>(std::llround(duration_s * 1e12));
  std::priority_queue<Event, std::vector<Event>, LaterFirst> afterpulses;
  std::vector<TimeTag> tags;
  tags.reserve(signal.size() + background.size());

  std::size_t i = 0;
  std::size_t j = 0;
  bool armed_once = false;
  std::int64_t last = 0;
  double trap_load = 0.0;

  while (i < signal.size() || j < background.size() || !afterpulses.empty()) {
    Event ev{};
    const bool have_sig = i < signal.size();
    const bool have_bg = j < background.size();
    const std::int64_t t_sig = have_sig ? signal[i].time_ps : std::numeric_limits<std::int64_t>::max();
    const std::int64_t t_bg = have_bg ? background[j].time_ps : std::numeric_limits<std::int64_t>::max();
    const std::int64_t t_ap =
        afterpulses.empty() ? std::numeric_limits<std::int64_t>::max() : afterpulses.top().time_ps;
    if (t_ap <= t_sig && t_ap <= t_bg) {
      ev = afterpulses.top();
      afterpulses.pop();
    } else if (t_sig <= t_bg) {
      ev = signal[i++];
    } else {
      ev = background[j++];
    }
    if (armed_once && ev.time_ps - last < dead_ps) continue;

    if (armed_once && det.trap_memory_s > 0.0) {
      trap_load *= std::exp(-static_cast<double>(ev.time_ps - last) * 1e-12 / det.trap_memory_s);
    }
    tags.push_back({ev.time_ps, port, ev.origin});
    const double p_after = std::min(1.0, det.afterpulse_prob * (1.0 + trap_load));
    if (det.trap_memory_s > 0.0) trap_load += 1.0;
    last = ev.time_ps;
    armed_once = true;
    if (p_after > 0.0 && rng.bernoulli(p_after)) {
      const double delay_s = det.dead_time_s + rng.exponential(det.afterpulse_decay_s);
      const std::int64_t t = ev.time_ps + std::llround(delay_s * 1e12);
      if (t < end_ps) afterpulses.push({t, TagOrigin::afterpulse});
    }
  }
  return tags;
}

}  // namespace

SimulationResult simulate_timetags(const TransmitterConfig& tx, const DelayInterferometer& di,
                                   double loss_budget_db, const DetectorModel& det,
                                   double noise_rate_cps, double duration_s, std::uint64_t seed) {
  if (!(duration_s > 0.0)) throw ArgumentError("simulation duration must be > 0 s");
  if (noise_rate_cps < 0.0) throw DomainError("noise rate must be >= 0");
  tx.validate();
  det.validate();
  di.validate();

  const auto n_slots = static_cast<std::uint64_t>(std::floor(duration_s * tx.symbol_rate_hz));
  const PatternSource pattern = tx.explicit_phases.empty()
                                    ? PatternSource::seeded(derive_seed(seed, streams::pattern))
                                    : PatternSource::explicit_phases(tx.explicit_phases);
  const Demodulation demod = demodulation(tx, di);
  const double m = mean_detected_photons(tx, loss_budget_db, det);
  const auto [m_hit, m_miss] = port_means(m, demod.visibility, det.monitored_ports);

  SimulationResult result;
  result.seed = seed;
  result.truth = DifferentialTruth(pattern, n_slots);
  result.stream.duration_s = duration_s;

  for (int p = 0; p < det.port_count(); ++p) {
    const auto port = static_cast<std::uint8_t>(p);
    Rng sig_rng(derive_seed(seed, streams::detector_base + 3 * port));
    Rng bg_rng(derive_seed(seed, streams::detector_base + 3 * port + 1));
    Rng det_rng(derive_seed(seed, streams::detector_base + 3 * port + 2));
    const auto sig = signal_events(tx, demod, pattern, n_slots, m_hit, m_miss, port, sig_rng);
    const auto bg = background_events(det.dark_rate_cps, noise_rate_cps, duration_s, bg_rng);
    auto tags = detect(sig, bg, det, static_cast<Port>(port), duration_s, det_rng);
    result.stream.tags.insert(result.stream.tags.end(), tags.begin(), tags.end());
  }
  std::stable_sort(result.stream.tags.begin(), result.stream.tags.end(),
                   [](const TimeTag& a, const TimeTag& b) {
                     return a.time_ps != b.time_ps ? a.time_ps < b.time_ps : a.port < b.port;
                   });
  return result;
}

std::int64_t min_same_port_gap_ps(const TimeTagStream& stream) {
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  std::int64_t last[2] = {0, 0};
  bool seen[2] = {false, false};
  for (const auto& tag : stream.tags) {
    const auto p = static_cast<std::size_t>(tag.port);
    if (seen[p]) best = std::min(best, tag.time_ps - last[p]);
    last[p] = tag.time_ps;
    seen[p] = true;
  }
  return best;
}

void write_tag_csv(const TimeTagStream& stream, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write tag file: " + path);
  out << "time_ps,port\n";
  for (const auto& tag : stream.tags) {
    out << tag.time_ps << ',' << static_cast<int>(tag.port) << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

TimeTagStream read_tag_csv(const std::string& path, double duration_s) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open tag file: " + path);
  TimeTagStream stream;
  stream.duration_s = duration_s;
  std::string line;
  int line_no = 0;
  std::int64_t previous = std::numeric_limits<std::int64_t>::min();
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "time_ps,port") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw DataError(path + ":" + std::to_string(line_no) + ": expected time_ps,port");
    }
    TimeTag tag;
    try {
      tag.time_ps = std::stoll(line.substr(0, comma));
      const int port = std::stoi(line.substr(comma + 1));
      if (port != 0 && port != 1) throw DataError("port must be 0 or 1");
      tag.port = static_cast<Port>(port);
    } catch (const std::logic_error&) {
      throw DataError(path + ":" + std::to_string(line_no) + ": malformed tag row");
    }
    if (tag.time_ps < previous) {
      throw DataError(path + ":" + std::to_string(line_no) + ": tags must be time-ordered");
    }
    previous = tag.time_ps;
    stream.tags.push_back(tag);
  }
  return stream;
}

}  // namespace dpsqkd
