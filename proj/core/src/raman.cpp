#include "dpsqkd/raman.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dpsqkd/error.hpp"
#include "dpsqkd/units.hpp"

namespace dpsqkd {

Direction parse_direction(const std::string& text) {
  if (text == "downstream") return Direction::downstream;
  if (text == "upstream") return Direction::upstream;
  throw LookupError("unknown direction '" + text + "' (expected downstream|upstream)");
}

std::string to_string(Direction direction) {
  return direction == Direction::upstream ? "upstream" : "downstream";
}

Band parse_band(const std::string& text) {
  if (text == "L") return Band::L;
  if (text == "C") return Band::C;
  if (text == "CWDM") return Band::CWDM;
  if (text == "other") return Band::other;
  throw LookupError("unknown band tag '" + text + "' (expected L|C|CWDM|other)");
}

std::string to_string(Band band) {
  switch (band) {
    case Band::L: return "L";
    case Band::C: return "C";
    case Band::CWDM: return "CWDM";
    case Band::other: return "other";
  }
  return "other";
}

void WavelengthChannel::validate() const {
  if (!(center_nm >= 1260.0 && center_nm <= 1625.0)) {
    throw DomainError("classical channel at " + std::to_string(center_nm) +
                      " nm outside 1260-1625 nm");
  }
  if (!std::isfinite(launch_power_dbm)) {
    throw DomainError("classical channel launch power must be finite");
  }
}

void ChannelPlan::validate() const {
  for (const auto& ch : channels) ch.validate();
}

void RamanProfile::validate() const {
  if (table.size() < 2) {
    throw DomainError("Raman profile needs at least two rows");
  }
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (!(table[i].coefficient >= 0.0)) {
      throw DomainError("Raman coefficients must be >= 0");
    }
    if (i > 0 && !(table[i].shift_thz > table[i - 1].shift_thz)) {
      throw DomainError("Raman profile shifts must be strictly increasing");
    }
  }
  if (!(scale >= 0.0) || !std::isfinite(scale)) {
    throw DomainError("Raman scale must be finite and >= 0");
  }
}

RamanProfile load_raman_profile_csv(const std::string& path, double scale) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open Raman profile: " + path);
  }
  RamanProfile profile;
  profile.scale = scale;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    RamanSample row;
    if (!(fields >> row.shift_thz >> row.coefficient)) {
      if (profile.table.empty()) continue;  // header row
      throw DataError(path + ":" + std::to_string(line_no) + ": expected shift_thz,coefficient");
    }
    profile.table.push_back(row);
  }
  profile.validate();
  return profile;
}

double raman_shift_thz(double pump_nm, double signal_nm) {
  return wavelength_nm_to_thz(pump_nm) - wavelength_nm_to_thz(signal_nm);
}

double raman_coefficient(const RamanProfile& profile, double pump_nm, double signal_nm) {
  const double shift = raman_shift_thz(pump_nm, signal_nm);
  const auto& t = profile.table;
  if (t.empty() || shift < t.front().shift_thz || shift > t.back().shift_thz) {
    std::ostringstream msg;
    msg << "Raman shift " << shift << " THz (pump " << pump_nm << " nm, signal " << signal_nm
        << " nm) outside profile table";
    throw RangeError(msg.str());
  }
  auto upper = std::lower_bound(t.begin(), t.end(), shift,
                                [](const RamanSample& s, double v) { return s.shift_thz < v; });
  double value = upper->coefficient;
  if (upper->shift_thz != shift) {
    const auto lower = upper - 1;
    const double w = (shift - lower->shift_thz) / (upper->shift_thz - lower->shift_thz);
    value = lower->coefficient + w * (upper->coefficient - lower->coefficient);
  }
  return profile.scale * value;
}

namespace {

void check_rate_inputs(double pump_mw, double coefficient, double bandwidth_nm) {
  if (pump_mw < 0.0 || coefficient < 0.0 || bandwidth_nm < 0.0) {
    throw DomainError("Raman rate inputs must be non-negative");
  }
}

// (1 - exp(-x)) / x, stable for small x.
double one_minus_exp_over(double x) {
  return std::abs(x) < 1e-12 ? 1.0 - x / 2.0 : -std::expm1(-x) / x;
}

}  // namespace

double forward_raman_rate(double pump_mw, double coefficient, const FiberSpan& span,
                          double bandwidth_nm, double pump_nm, double signal_nm) {
  check_rate_inputs(pump_mw, coefficient, bandwidth_nm);
  const double length = span.length_km;
  if (length == 0.0 || pump_mw == 0.0) return 0.0;
  const double ap = db_per_km_to_nepers(attenuation_at(span, pump_nm));
  const double as = db_per_km_to_nepers(attenuation_at(span, signal_nm));
  // Scattering at z decays exp(-ap z) on the way in and exp(-as (L - z)) on the way out:
  // integral = exp(-as L) * L * (exp((as - ap) L) - 1) / ((as - ap) L).
  const double d = (as - ap) * length;
  const double path = std::abs(d) < 1e-12
                          ? length * std::exp(-as * length)
                          : std::exp(-ap * length) * length * (-std::expm1(-d)) / d;
  const double noise_mw = pump_mw * coefficient * bandwidth_nm * path;
  return photon_flux(noise_mw, signal_nm);
}

double backward_raman_rate(double pump_mw, double coefficient, const FiberSpan& span,
                           double bandwidth_nm, double pump_nm, double signal_nm) {
  check_rate_inputs(pump_mw, coefficient, bandwidth_nm);
  const double length = span.length_km;
  if (length == 0.0 || pump_mw == 0.0) return 0.0;
  const double ap = db_per_km_to_nepers(attenuation_at(span, pump_nm));
  const double as = db_per_km_to_nepers(attenuation_at(span, signal_nm));
  const double alpha = 0.5 * (ap + as);
  const double path = length * one_minus_exp_over(2.0 * alpha * length);
  const double noise_mw = pump_mw * coefficient * bandwidth_nm * path;
  return photon_flux(noise_mw, signal_nm);
}

RamanContribution& RamanContribution::operator+=(const RamanContribution& other) {
  delta_f += other.delta_f;
  delta_d += other.delta_d;
  upstream_copropagating += other.upstream_copropagating;
  total_at_receiver += other.total_at_receiver;
  return *this;
}

RamanContribution odn_noise_at_bob(const ChannelPlan& plan, const OdnTopology& topology,
                                   const FilterProfile& rx_filter, const RamanProfile& profile) {
  RamanContribution out;
  if (plan.channels.empty()) return out;
  if (plan.quantum.direction != Direction::upstream) {
    throw ArgumentError("ODN noise accounting is defined for an upstream quantum channel");
  }

  const double lq = plan.quantum.center_nm;
  const double bandwidth = rx_filter.noise_bandwidth_nm();
  const double rx = rx_filter.in_band_transmission();
  const double split_db = topology.splitter.loss_db();
  const double ports = static_cast<double>(topology.splitter.ports);
  const double feeder_up_q = db_to_linear(-topology.feeder_up.loss_db(lq));

  // TDMA upstream members time-share the fiber: one continuous emitter at the
  // strongest member's power.
  const WavelengthChannel* tdma_representative = nullptr;
  for (const auto& ch : plan.channels) {
    if (ch.direction == Direction::upstream && ch.tdma_member &&
        (tdma_representative == nullptr ||
         ch.launch_power_dbm > tdma_representative->launch_power_dbm)) {
      tdma_representative = &ch;
    }
  }

  for (const auto& ch : plan.channels) {
    const double pump = ch.center_nm;
    const double p_mw = dbm_to_mw(ch.launch_power_dbm);
    const double c = raman_coefficient(profile, pump, lq);

    if (ch.direction == Direction::upstream) {
      if (ch.tdma_member && &ch != tdma_representative) continue;
      // Generated in the drop, then one splitter pass and the feeder at lq.
      const double from_drop = forward_raman_rate(p_mw, c, topology.drop, bandwidth, pump, lq) *
                               db_to_linear(-split_db) * feeder_up_q;
      // Pump enters the feeder after the drop and one splitter pass.
      const double feeder_pump = p_mw * db_to_linear(-(topology.drop.loss_db(pump) + split_db));
      const double from_feeder =
          forward_raman_rate(feeder_pump, c, topology.feeder_up, bandwidth, pump, lq);
      out.upstream_copropagating += (from_drop + from_feeder) * rx;
    } else {
      // Backscatter in each of the N drops; the N-fold sum cancels one of the
      // two splitter passes.
      const double drop_pump =
          p_mw * db_to_linear(-(topology.feeder_down.loss_db(pump) + split_db));
      const double per_drop = backward_raman_rate(drop_pump, c, topology.drop, bandwidth, pump, lq);
      out.delta_d += ports * per_drop * db_to_linear(-split_db) * feeder_up_q * rx;
      // Feeder forward scattering reaches the upstream feeder only through the
      // splitter's same-side isolation.
      const double feeder =
          forward_raman_rate(p_mw, c, topology.feeder_down, bandwidth, pump, lq);
      out.delta_f +=
          feeder * db_to_linear(-topology.splitter.directivity_db) * feeder_up_q * rx;
    }
  }
  out.total_at_receiver = out.delta_f + out.delta_d + out.upstream_copropagating;
  return out;
}

double filter_noise_rejection(const FilterProfile& filter_a, const FilterProfile& filter_b) {
  return linear_to_db(filter_a.noise_bandwidth_nm() / filter_b.noise_bandwidth_nm());
}

double equivalent_dwdm_power(double channel_power_dbm, const FilterProfile& wide,
                             const FilterProfile& narrow) {
  return channel_power_dbm - filter_noise_rejection(wide, narrow);
}

}  // namespace dpsqkd
