#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dpsqkd/dps_link.hpp"
#include "dpsqkd/keyrate.hpp"
#include "dpsqkd/raman.hpp"
#include "dpsqkd/scenario.hpp"
#include "dpsqkd/sifting.hpp"

namespace dpsqkd {

struct ScenarioResult {
  std::string scenario;
  RunMode mode = RunMode::oracle;
  std::uint64_t seed = 0;
  double duration_s = 0.0;
  std::uint64_t config_hash = 0;

  double path_loss_db = 0.0;
  RamanContribution raman;     // counts/s per detector, before gating
  double dark_counts_s = 0.0;  // per detector
  OracleRates oracle;
  std::optional<QberReport> measured;  // Monte Carlo only

  double raw_rate_bs = 0.0;  // measured in Monte Carlo mode, else oracle
  double qber = 0.0;
  KeyRateReport key;

  std::optional<SimulationResult> simulation;  // kept on request
};

struct RunOptions {
  bool keep_tags = false;
};

/// topology -> Raman noise -> link (oracle or Monte Carlo) -> sifting -> key rate.
ScenarioResult run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

struct SweepSpec {
  /// Named axis (see sweep_axes()) or a dotted scenario path such as
  /// "detector.dark_rate_cps".
  std::string axis;
  std::vector<double> values;
};

struct SweepRow {
  double axis_value = 0.0;
  double path_loss_db = 0.0;
  double raman_counts_s = 0.0;
  double dark_counts_s = 0.0;
  double raw_rate_bs = 0.0;
  double qber = 0.0;
  double secure_rate_bs = 0.0;
  double secure_bits_per_pulse = 0.0;
};

struct SweepResult {
  SweepSpec spec;
  std::uint64_t config_hash = 0;
  RunMode mode = RunMode::oracle;
  std::vector<SweepRow> rows;  // in the order of spec.values
};

/// Named axes: loss_budget_db, splitter_ports, reach_km, upstream_channels,
/// raman_scale, excess_loss_db, visibility.
std::vector<std::string> sweep_axes();

/// Config with one axis set. reach_km moves the upstream feeder length and
/// scales the downstream feeder with it. Throws ConfigError if the axis does
/// not resolve or the value is invalid for it.
ScenarioConfig apply_axis(const ScenarioConfig& config, const std::string& axis, double value);

/// Points run on `threads` workers (0: hardware concurrency). Point i of a
/// Monte Carlo sweep is seeded with derive_seed(seed, streams::sweep_base + i).
SweepResult run_sweep(const ScenarioConfig& config, const SweepSpec& spec, unsigned threads = 0);

enum class FreeParameter { raman_scale, excess_loss, visibility };
enum class Observable { raman_counts_s, raw_rate_bs, qber, secure_rate_bs, path_loss_db };

FreeParameter parse_free_parameter(const std::string& text);
std::string to_string(FreeParameter parameter);
Observable parse_observable(const std::string& text);
std::string to_string(Observable observable);

void set_parameter(ScenarioConfig& config, FreeParameter parameter, double value);
double get_parameter(const ScenarioConfig& config, FreeParameter parameter);
/// Observable of an oracle-mode run of the config.
double observe(const ScenarioConfig& config, Observable observable);

struct Anchor {
  std::string label;
  ScenarioConfig scenario;
  Observable observable = Observable::raw_rate_bs;
  double target = 0.0;
};

struct CalibrationResult {
  FreeParameter parameter = FreeParameter::raman_scale;
  double value = 0.0;
  double residual = 0.0;  // anchor units (RMS over anchors when several)
  std::vector<std::string> anchors;
  int iterations = 0;
  std::string method;
};

struct CalibrationOptions {
  std::optional<std::pair<double, double>> bracket;
  int max_iterations = 100;
  double relative_tolerance = 0.005;
};

/// One anchor: bracketed root find with a bisection fallback. Several
/// anchors: bounded least squares on relative residuals. Throws
/// CalibrationError with bracket diagnostics on failure.
CalibrationResult calibrate(std::vector<Anchor> anchors, FreeParameter parameter,
                            const CalibrationOptions& options = {});

struct CalibrationStep {
  FreeParameter parameter = FreeParameter::raman_scale;
  std::vector<Anchor> anchors;
};

/// Runs the steps in order, feeding each fitted value into every later
/// anchor, and repeats until the parameters stop moving.
std::vector<CalibrationResult> calibrate_steps(std::vector<CalibrationStep> steps,
                                               int max_rounds = 50);

/// Anchors file: {"schema": 1, "steps": [{"parameter": ..., "anchors":
/// [{"scenario": file, "observable": ..., "target": ...}]}]}. Scenario files
/// resolve relative to the anchors file.
std::vector<CalibrationStep> load_calibration_steps(const std::filesystem::path& path);

}  // namespace dpsqkd
