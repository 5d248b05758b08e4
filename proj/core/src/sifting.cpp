#include "dpsqkd/sifting.hpp"

#include <algorithm>
#include <vector>
#include <cmath>
#include <numbers>

#include "dpsqkd/error.hpp"

namespace dpsqkd {

namespace {

constexpr int kPhaseBins = 1024;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t to_ps(double seconds) { return std::llround(seconds * 1e12); }

}  // namespace

void GateConfig::validate() const {
  if (!(gate_fraction > 0.0 && gate_fraction <= 1.0)) {
    throw DomainError("gate_fraction must be in (0, 1]");
  }
  if (!(symbol_period_s > 0.0)) throw DomainError("symbol period must be > 0");
  if (slot_phase_s && !std::isfinite(*slot_phase_s)) {
    throw DomainError("slot phase must be finite");
  }
}

double estimate_slot_phase(const TimeTagStream& stream, double symbol_period_s) {
  const std::int64_t period = to_ps(symbol_period_s);
  if (period <= 0) throw DomainError("symbol period must be >= 1 ps");
  if (stream.tags.empty()) return 0.0;

  // Histogram of tag time modulo T. Uniform background is removed at the
  // median bin level; the rest is the pulse, located by its circular mean.
  std::vector<double> hist(kPhaseBins, 0.0);
  for (const auto& tag : stream.tags) {
    const std::int64_t r = tag.time_ps - floor_div(tag.time_ps, period) * period;
    const auto bin = static_cast<int>(r * kPhaseBins / period);
    hist[static_cast<std::size_t>(std::clamp(bin, 0, kPhaseBins - 1))] += 1.0;
  }
  std::vector<double> sorted = hist;
  std::nth_element(sorted.begin(), sorted.begin() + kPhaseBins / 2, sorted.end());
  const double baseline = sorted[kPhaseBins / 2];
  double c = 0.0;
  double s = 0.0;
  for (int i = 0; i < kPhaseBins; ++i) {
    const double w = hist[static_cast<std::size_t>(i)] - baseline;
    if (w <= 0.0) continue;
    const double angle = 2.0 * std::numbers::pi * (i + 0.5) / kPhaseBins;
    c += w * std::cos(angle);
    s += w * std::sin(angle);
  }
  if (c == 0.0 && s == 0.0) return 0.0;
  // Angle pi is the nominal center T/2.
  double offset = std::atan2(-s, -c) / (2.0 * std::numbers::pi) * symbol_period_s;
  if (offset <= -symbol_period_s / 2.0) offset += symbol_period_s;
  return offset;
}

GateResult apply_gate(const TimeTagStream& stream, const GateConfig& gate) {
  gate.validate();
  GateResult out;
  out.slot_phase_s = gate.slot_phase_s
                         ? *gate.slot_phase_s
                         : estimate_slot_phase(stream, gate.symbol_period_s);
  const std::int64_t period = to_ps(gate.symbol_period_s);
  if (period <= 0) throw DomainError("symbol period must be >= 1 ps");
  const std::int64_t phase = to_ps(out.slot_phase_s);
  const double half_window = gate.gate_fraction * static_cast<double>(period) / 2.0;
  out.clicks.reserve(stream.tags.size());
  for (const auto& tag : stream.tags) {
    // Offset from the start of the (phase-shifted) slot, centered at T/2.
    const std::int64_t shifted = tag.time_ps - phase;
    const std::int64_t slot = floor_div(shifted, period);
    const std::int64_t within = shifted - slot * period;
    const double from_center = std::abs(2.0 * static_cast<double>(within) - static_cast<double>(period)) / 2.0;
    if (from_center <= half_window) {
      out.clicks.push_back({slot, tag.port});
    } else {
      ++out.rejected;
    }
  }
  return out;
}

QberReport sift_and_score(const TimeTagStream& stream, const DifferentialTruth& truth,
                          const GateConfig& gate) {
  const GateResult gated = apply_gate(stream, gate);
  QberReport report;
  report.duration_s = stream.duration_s;
  report.gated_rejected = gated.rejected;
  report.slot_phase_s = gated.slot_phase_s;
  for (const auto& click : gated.clicks) {
    if (click.slot < 0 || static_cast<std::uint64_t>(click.slot) >= truth.size()) {
      throw DataError("click in slot " + std::to_string(click.slot) +
                      " lies outside the ground-truth span of " + std::to_string(truth.size()) +
                      " slots");
    }
    const auto bob = static_cast<std::uint8_t>(click.port);
    ++report.sifted_bits;
    if (bob != truth.bit(static_cast<std::uint64_t>(click.slot))) ++report.error_bits;
  }
  if (report.sifted_bits > 0) {
    report.qber = static_cast<double>(report.error_bits) / static_cast<double>(report.sifted_bits);
  }
  if (report.duration_s > 0.0) {
    report.raw_rate = static_cast<double>(report.sifted_bits) / report.duration_s;
  }
  return report;
}

double qber_composition_oracle(double signal_rate, double signal_error, double background_rate) {
  if (signal_rate < 0.0 || background_rate < 0.0) throw DomainError("rates must be >= 0");
  if (!(signal_error >= 0.0 && signal_error <= 1.0)) {
    throw DomainError("signal error fraction must be in [0, 1]");
  }
  const double total = signal_rate + background_rate;
  if (total <= 0.0) throw DomainError("QBER undefined: no signal and no background clicks");
  return (signal_error * signal_rate + 0.5 * background_rate) / total;
}

}  // namespace dpsqkd
