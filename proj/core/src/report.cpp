#include "dpsqkd/report.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "dpsqkd/error.hpp"

#ifndef DPSQKD_VERSION
#define DPSQKD_VERSION "0.0.0"
#endif

namespace dpsqkd {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kReportSchema = 1;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

ordered_json envelope(const char* kind, std::uint64_t hash) {
  ordered_json j;
  j["schema"] = kReportSchema;
  j["kind"] = kind;
  j["toolkit_version"] = toolkit_version();
  j["config_hash"] = hash_hex(hash);
  return j;
}

ordered_json qber_json(const QberReport& q) {
  return {{"qber", q.qber},
          {"raw_rate", q.raw_rate},
          {"sifted_bits", q.sifted_bits},
          {"error_bits", q.error_bits},
          {"gated_rejected", q.gated_rejected},
          {"duration_s", q.duration_s},
          {"slot_phase_s", q.slot_phase_s}};
}

}  // namespace

ReportFormat parse_report_format(const std::string& text) {
  if (text == "json") return ReportFormat::json;
  if (text == "csv") return ReportFormat::csv;
  throw LookupError("unknown format '" + text + "' (expected json|csv)");
}

std::string toolkit_version() { return DPSQKD_VERSION; }

std::string render(const ScenarioResult& r, ReportFormat format) {
  if (format == ReportFormat::csv) {
    std::ostringstream os;
    os << "scenario,mode,seed,path_loss_db,raman_counts_s,dark_counts_s,raw_rate_bs,qber,"
          "secure_rate_bs,secure_bits_per_pulse,config_hash\n";
    os << r.scenario << ',' << to_string(r.mode) << ',' << r.seed << ',' << num(r.path_loss_db)
       << ',' << num(r.raman.total_at_receiver) << ',' << num(r.dark_counts_s) << ','
       << num(r.raw_rate_bs) << ',' << num(r.qber) << ',' << num(r.key.secure_rate) << ','
       << num(r.key.secure_bits_per_pulse) << ',' << hash_hex(r.config_hash) << '\n';
    return os.str();
  }
  ordered_json j = envelope("run", r.config_hash);
  j["scenario"] = r.scenario;
  j["mode"] = to_string(r.mode);
  j["seed"] = r.seed;
  j["duration_s"] = r.duration_s;
  j["topology"] = {{"path_loss_db", r.path_loss_db}};
  j["raman"] = {{"delta_f", r.raman.delta_f},
                {"delta_d", r.raman.delta_d},
                {"upstream_copropagating", r.raman.upstream_copropagating},
                {"total_at_receiver", r.raman.total_at_receiver}};
  j["detector"] = {{"dark_counts_s", r.dark_counts_s}};
  j["oracle"] = {{"signal_rate", r.oracle.signal_rate},
                 {"background_rate", r.oracle.background_rate},
                 {"afterpulse_rate", r.oracle.afterpulse_rate},
                 {"total_rate", r.oracle.total_rate},
                 {"registered_rate", r.oracle.registered_rate},
                 {"signal_error", r.oracle.signal_error},
                 {"qber", r.oracle.qber}};
  if (r.measured) j["measured"] = qber_json(*r.measured);
  j["result"] = {{"raw_rate_bs", r.raw_rate_bs}, {"qber", r.qber}};
  j["keyrate"] = {{"secure_rate", r.key.secure_rate},
                  {"secure_bits_per_pulse", r.key.secure_bits_per_pulse},
                  {"shrink_factor", r.key.shrink_factor},
                  {"h_e", r.key.h_e},
                  {"ec_leakage", r.key.ec_leakage},
                  {"f_ec", r.key.f_ec}};
  return j.dump(2) + "\n";
}

std::string render(const SweepResult& r, ReportFormat format) {
  if (format == ReportFormat::csv) {
    std::ostringstream os;
    os << kSweepColumns << '\n';
    for (const auto& row : r.rows) {
      os << num(row.axis_value) << ',' << num(row.path_loss_db) << ',' << num(row.raman_counts_s)
         << ',' << num(row.dark_counts_s) << ',' << num(row.raw_rate_bs) << ',' << num(row.qber)
         << ',' << num(row.secure_rate_bs) << ',' << num(row.secure_bits_per_pulse) << '\n';
    }
    return os.str();
  }
  ordered_json j = envelope("sweep", r.config_hash);
  j["mode"] = to_string(r.mode);
  j["axis"] = r.spec.axis;
  ordered_json rows = ordered_json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"axis_value", row.axis_value},
                    {"path_loss_db", row.path_loss_db},
                    {"raman_counts_s", row.raman_counts_s},
                    {"dark_counts_s", row.dark_counts_s},
                    {"raw_rate_bs", row.raw_rate_bs},
                    {"qber", row.qber},
                    {"secure_rate_bs", row.secure_rate_bs},
                    {"secure_bits_per_pulse", row.secure_bits_per_pulse}});
  }
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

std::string render(const std::vector<CalibrationResult>& results, std::uint64_t config_hash) {
  ordered_json j = envelope("calibration", config_hash);
  ordered_json list = ordered_json::array();
  for (const auto& c : results) {
    list.push_back({{"parameter", to_string(c.parameter)},
                    {"value", c.value},
                    {"residual", c.residual},
                    {"anchors", c.anchors},
                    {"iterations", c.iterations},
                    {"method", c.method}});
  }
  j["results"] = list;
  return j.dump(2) + "\n";
}

void write_output(const fs::path& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("write failed: " + path.string());
}

namespace {

void require(const ordered_json& obj, const char* key, bool (ordered_json::*is)() const noexcept,
             const std::string& where, std::vector<std::string>& issues) {
  if (!obj.is_object() || !obj.contains(key)) {
    issues.push_back(where + key + ": missing");
  } else if (!(obj[key].*is)()) {
    issues.push_back(where + key + ": wrong type");
  }
}

}  // namespace

std::vector<std::string> validate_report_json(std::string_view text) {
  std::vector<std::string> issues;
  ordered_json j;
  try {
    j = ordered_json::parse(text.begin(), text.end());
  } catch (const ordered_json::parse_error& e) {
    return {std::string("malformed JSON: ") + e.what()};
  }
  if (!j.is_object()) return {"report must be a JSON object"};
  const auto num_t = &ordered_json::is_number;
  const auto str_t = &ordered_json::is_string;
  const auto obj_t = &ordered_json::is_object;
  const auto arr_t = &ordered_json::is_array;
  require(j, "schema", num_t, "", issues);
  if (j.contains("schema") && j["schema"] != kReportSchema) issues.push_back("schema: expected 1");
  require(j, "kind", str_t, "", issues);
  require(j, "toolkit_version", str_t, "", issues);
  require(j, "config_hash", str_t, "", issues);
  if (j.contains("config_hash") && j["config_hash"].is_string() &&
      j["config_hash"].get<std::string>().size() != 16) {
    issues.push_back("config_hash: expected 16 hex digits");
  }
  const std::string kind = j.value("kind", "");
  if (kind == "run") {
    require(j, "scenario", str_t, "", issues);
    require(j, "mode", str_t, "", issues);
    for (const char* section : {"topology", "raman", "detector", "oracle", "result", "keyrate"}) {
      require(j, section, obj_t, "", issues);
    }
    if (j.contains("result") && j["result"].is_object()) {
      require(j["result"], "raw_rate_bs", num_t, "result.", issues);
      require(j["result"], "qber", num_t, "result.", issues);
      const double q = j["result"].value("qber", -1.0);
      if (q < 0.0 || q > 1.0) issues.push_back("result.qber: outside [0, 1]");
    }
    if (j.contains("keyrate") && j["keyrate"].is_object()) {
      for (const char* key : {"secure_rate", "secure_bits_per_pulse", "shrink_factor", "h_e",
                              "ec_leakage", "f_ec"}) {
        require(j["keyrate"], key, num_t, "keyrate.", issues);
      }
    }
    if (j.contains("measured")) {
      const auto& m = j["measured"];
      for (const char* key : {"qber", "raw_rate", "sifted_bits", "error_bits", "gated_rejected",
                              "duration_s"}) {
        require(m, key, num_t, "measured.", issues);
      }
      if (issues.empty() && m["sifted_bits"].get<double>() > 0) {
        const double ratio = m["error_bits"].get<double>() / m["sifted_bits"].get<double>();
        if (std::abs(ratio - m["qber"].get<double>()) > 1e-12) {
          issues.push_back("measured.qber: differs from error_bits/sifted_bits");
        }
      }
    }
  } else if (kind == "sweep") {
    require(j, "axis", str_t, "", issues);
    require(j, "rows", arr_t, "", issues);
    if (j.contains("rows") && j["rows"].is_array()) {
      for (std::size_t i = 0; i < j["rows"].size(); ++i) {
        const std::string where = "rows[" + std::to_string(i) + "].";
        for (const char* key : {"axis_value", "path_loss_db", "raman_counts_s", "dark_counts_s",
                                "raw_rate_bs", "qber", "secure_rate_bs", "secure_bits_per_pulse"}) {
          require(j["rows"][i], key, num_t, where, issues);
        }
      }
    }
  } else if (kind == "calibration") {
    require(j, "results", arr_t, "", issues);
    if (j.contains("results") && j["results"].is_array()) {
      for (std::size_t i = 0; i < j["results"].size(); ++i) {
        const std::string where = "results[" + std::to_string(i) + "].";
        require(j["results"][i], "parameter", str_t, where, issues);
        require(j["results"][i], "value", num_t, where, issues);
        require(j["results"][i], "residual", num_t, where, issues);
      }
    }
  } else {
    issues.push_back("kind: expected run|sweep|calibration");
  }
  return issues;
}

fs::path sidecar_path(const fs::path& tag_csv) {
  fs::path p = tag_csv;
  p += ".json";
  return p;
}

void write_tag_sidecar(const fs::path& path, const TagSidecar& s) {
  ordered_json j;
  j["schema"] = kReportSchema;
  j["kind"] = "tags";
  j["toolkit_version"] = toolkit_version();
  j["scenario"] = s.scenario;
  j["seed"] = s.seed;
  j["config_hash"] = hash_hex(s.config_hash);
  j["duration_s"] = s.duration_s;
  j["symbol_rate_hz"] = s.symbol_rate_hz;
  j["n_slots"] = s.n_slots;
  write_output(path, j.dump(2) + "\n");
}

TagSidecar read_tag_sidecar(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read tag sidecar: " + path.string());
  try {
    const ordered_json j = ordered_json::parse(in);
    TagSidecar s;
    s.scenario = j.value("scenario", "");
    s.seed = j.at("seed").get<std::uint64_t>();
    s.config_hash = std::stoull(j.at("config_hash").get<std::string>(), nullptr, 16);
    s.duration_s = j.at("duration_s").get<double>();
    s.symbol_rate_hz = j.at("symbol_rate_hz").get<double>();
    s.n_slots = j.at("n_slots").get<std::uint64_t>();
    return s;
  } catch (const std::exception& e) {
    throw DataError(path.string() + ": invalid tag sidecar: " + e.what());
  }
}

}  // namespace dpsqkd
