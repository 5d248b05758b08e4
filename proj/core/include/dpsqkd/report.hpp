#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dpsqkd/runner.hpp"

namespace dpsqkd {

enum class ReportFormat { json, csv };

ReportFormat parse_report_format(const std::string& text);
std::string toolkit_version();

/// Column order shared by sweep tables.
inline constexpr const char* kSweepColumns =
    "axis_value,path_loss_db,raman_counts_s,dark_counts_s,raw_rate_bs,qber,secure_rate_bs,"
    "secure_bits_per_pulse";

std::string render(const ScenarioResult& result, ReportFormat format);
std::string render(const SweepResult& result, ReportFormat format);
std::string render(const std::vector<CalibrationResult>& results, std::uint64_t config_hash);

/// Writes content to path, or to stdout when path is empty or "-".
/// Throws IoError if the destination cannot be written.
void write_output(const std::filesystem::path& path, const std::string& content);

/// Checks a JSON report (run, sweep or calibration) against the report
/// schema. Returns one message per problem; empty when valid.
std::vector<std::string> validate_report_json(std::string_view text);

/// Ground-truth key for an exported tag file.
struct TagSidecar {
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  double duration_s = 0.0;
  double symbol_rate_hz = 0.0;
  std::uint64_t n_slots = 0;
  std::string scenario;
};

/// "<tags>.json" next to the tag CSV.
std::filesystem::path sidecar_path(const std::filesystem::path& tag_csv);
void write_tag_sidecar(const std::filesystem::path& path, const TagSidecar& sidecar);
TagSidecar read_tag_sidecar(const std::filesystem::path& path);

}  // namespace dpsqkd
