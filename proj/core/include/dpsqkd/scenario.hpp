#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dpsqkd/dps_link.hpp"
#include "dpsqkd/raman.hpp"
#include "dpsqkd/sifting.hpp"
#include "dpsqkd/topology.hpp"

namespace dpsqkd {

enum class RunMode { oracle, monte_carlo };

RunMode parse_run_mode(const std::string& text);
std::string to_string(RunMode mode);

struct RunConfig {
  RunMode mode = RunMode::oracle;
  double duration_s = 30.0;  // Monte Carlo only
  std::uint64_t seed = 1;    // Monte Carlo only
};

struct KeyrateConfig {
  double f_ec = 1.45;
};

/// Everything needed to run one operating point.
struct ScenarioConfig {
  static constexpr int schema = 1;

  std::string name;
  std::string description;

  OdnTopology topology;
  /// Fixed attenuator replacing the ODN quantum path (back-to-back runs).
  std::optional<double> loss_budget_db;
  /// Source files of tabulated data; empty when built in.
  std::filesystem::path onu_filter_table;
  std::filesystem::path co_filter_table;
  std::filesystem::path raman_profile_csv;

  ChannelPlan channels;
  TransmitterConfig transmitter;
  DelayInterferometer di;
  DetectorModel detector;
  RamanProfile raman = RamanProfile::silica_default();
  double gate_fraction = 0.3;
  std::optional<double> slot_phase_s;
  KeyrateConfig keyrate;
  RunConfig run;

  /// Directory relative paths in the source file were resolved against.
  std::filesystem::path base_dir;

  /// Quantum path loss: the attenuator if set, else the ODN upstream path.
  double quantum_path_loss_db() const;
  GateConfig gate() const;
};

/// Parses a scenario document. Relative file references resolve against
/// base_dir. Throws ConfigError listing every problem found.
ScenarioConfig parse_scenario(std::string_view json_text, const std::filesystem::path& base_dir);

/// Throws IoError if the file cannot be read, ConfigError if it is invalid.
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Canonical JSON (sorted keys). File references are written relative to
/// relative_to when given.
std::string scenario_to_json(const ScenarioConfig& config,
                             const std::filesystem::path& relative_to = {});
void save_scenario(const ScenarioConfig& config, const std::filesystem::path& path);

/// Semantic checks on a typed config; one message per failing field.
std::vector<std::string> validate_scenario(const ScenarioConfig& config);

/// FNV-1a 64 of the canonical JSON, with referenced tables hashed by content.
std::uint64_t config_hash(const ScenarioConfig& config);
std::string hash_hex(std::uint64_t hash);

/// Upstream carrier plan: count channels on a 100 GHz grid around 1550.12 nm.
std::vector<WavelengthChannel> upstream_comb(int count, double power_dbm);

}  // namespace dpsqkd
