#include "dpsqkd/scenario.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dpsqkd/error.hpp"
#include "dpsqkd/units.hpp"

namespace dpsqkd {

using nlohmann::json;
namespace fs = std::filesystem;

ConfigError::ConfigError(std::vector<std::string> issues)
    : Error([&] {
        std::string msg = "invalid configuration:";
        for (const auto& issue : issues) msg += "\n  - " + issue;
        return msg;
      }()),
      issues_(std::move(issues)) {}

ConfigError::ConfigError(const std::string& single) : ConfigError(std::vector<std::string>{single}) {}

RunMode parse_run_mode(const std::string& text) {
  if (text == "oracle") return RunMode::oracle;
  if (text == "monte_carlo" || text == "mc") return RunMode::monte_carlo;
  throw LookupError("unknown run mode '" + text + "' (expected oracle|monte_carlo)");
}

std::string to_string(RunMode mode) { return mode == RunMode::oracle ? "oracle" : "monte_carlo"; }

double ScenarioConfig::quantum_path_loss_db() const {
  if (loss_budget_db) return *loss_budget_db;
  const auto path = OdnTopology::upstream_quantum_path();
  return path_loss(topology, channels.quantum.center_nm, std::span<const Element>(path));
}

GateConfig ScenarioConfig::gate() const {
  GateConfig g;
  g.gate_fraction = gate_fraction;
  g.symbol_period_s = transmitter.symbol_period_s();
  g.slot_phase_s = slot_phase_s;
  return g;
}

std::vector<WavelengthChannel> upstream_comb(int count, double power_dbm) {
  constexpr double kAnchorThz = 193.4;  // 1550.12 nm
  std::vector<WavelengthChannel> out;
  for (int k = 0; k < count; ++k) {
    // 0, +1, -1, +2, -2, ... grid steps of 100 GHz
    const int step = (k + 1) / 2 * (k % 2 == 1 ? 1 : -1);
    WavelengthChannel ch;
    ch.center_nm = thz_to_wavelength_nm(kAnchorThz + 0.1 * step);
    ch.launch_power_dbm = power_dbm;
    ch.direction = Direction::upstream;
    ch.band = Band::C;
    out.push_back(ch);
  }
  return out;
}

namespace {

// Collects every problem instead of stopping at the first one.
class Reader {
public:
  std::vector<std::string> issues;

  void unknown_keys(const json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) {
    std::set<std::string> known(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items()) {
      if (!known.count(key)) issues.push_back(where + key + ": unknown field");
    }
  }

  const json* object(const json& parent, const char* key, const std::string& where) {
    auto it = parent.find(key);
    if (it == parent.end()) return nullptr;
    if (!it->is_object()) {
      issues.push_back(where + key + ": expected an object");
      return nullptr;
    }
    return &*it;
  }

  void number(const json& obj, const char* key, const std::string& where, double& out) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    if (!it->is_number()) {
      issues.push_back(where + key + ": expected a number");
      return;
    }
    out = it->get<double>();
  }

  void number(const json& obj, const char* key, const std::string& where,
              std::optional<double>& out) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return;
    double v = 0.0;
    number(obj, key, where, v);
    out = v;
  }

  void integer(const json& obj, const char* key, const std::string& where, int& out) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    if (!it->is_number_integer()) {
      issues.push_back(where + key + ": expected an integer");
      return;
    }
    out = it->get<int>();
  }

  void seed(const json& obj, const char* key, const std::string& where, std::uint64_t& out) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    if (it->is_number_unsigned() || (it->is_number_integer() && it->get<std::int64_t>() >= 0)) {
      out = it->get<std::uint64_t>();
    } else {
      issues.push_back(where + key + ": expected a non-negative integer");
    }
  }

  void string(const json& obj, const char* key, const std::string& where, std::string& out) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    if (!it->is_string()) {
      issues.push_back(where + key + ": expected a string");
      return;
    }
    out = it->get<std::string>();
  }

  template <class Parse, class T>
  void enumeration(const json& obj, const char* key, const std::string& where, Parse parse,
                   T& out) {
    std::string text;
    if (!obj.contains(key)) return;
    string(obj, key, where, text);
    if (text.empty()) return;
    try {
      out = parse(text);
    } catch (const Error& e) {
      issues.push_back(where + key + ": " + e.what());
    }
  }

  void check(bool ok, const std::string& what) {
    if (!ok) issues.push_back(what);
  }
};

fs::path resolve(const fs::path& base, const std::string& file) {
  fs::path p(file);
  return p.is_absolute() ? p : (base / p).lexically_normal();
}

void read_span(Reader& r, const json& topo, const char* key, FiberSpan& span) {
  r.number(topo, key, "topology.", span.length_km);
}

void read_filter(Reader& r, const json& topo, const char* key, const fs::path& base,
                 FilterProfile& filter, fs::path& table_path) {
  const std::string where = std::string("topology.") + key + ".";
  const json* f = r.object(topo, key, "topology.");
  if (!f) return;
  r.unknown_keys(*f, where,
                 {"center_nm", "fwhm_nm", "insertion_loss_db", "out_of_band_rejection_db", "table_csv"});
  r.number(*f, "center_nm", where, filter.center_nm);
  r.number(*f, "fwhm_nm", where, filter.fwhm_nm);
  r.number(*f, "insertion_loss_db", where, filter.insertion_loss_db);
  r.number(*f, "out_of_band_rejection_db", where, filter.out_of_band_rejection_db);
  std::string csv;
  r.string(*f, "table_csv", where, csv);
  if (!csv.empty()) {
    table_path = resolve(base, csv);
    try {
      filter.table = load_filter_table_csv(table_path.string());
    } catch (const Error& e) {
      r.issues.push_back(where + "table_csv: " + e.what());
    }
  }
}

void read_topology(Reader& r, const json& root, const fs::path& base, ScenarioConfig& cfg) {
  const json* t = r.object(root, "topology", "");
  if (!t) return;
  r.unknown_keys(*t, "topology.",
                 {"feeder_down_km", "feeder_up_km", "drop_km", "attenuation", "splitter",
                  "onu_filter", "co_filter", "loss_budget_db", "probes"});
  read_span(r, *t, "feeder_down_km", cfg.topology.feeder_down);
  read_span(r, *t, "feeder_up_km", cfg.topology.feeder_up);
  read_span(r, *t, "drop_km", cfg.topology.drop);
  if (auto it = t->find("attenuation"); it != t->end()) {
    std::vector<SpectralPoint> table;
    if (!it->is_array()) {
      r.issues.push_back("topology.attenuation: expected [[wavelength_nm, dB_per_km], ...]");
    } else {
      for (const auto& row : *it) {
        if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number()) {
          r.issues.push_back("topology.attenuation: rows must be [wavelength_nm, dB_per_km]");
          break;
        }
        table.push_back({row[0].get<double>(), row[1].get<double>()});
      }
      cfg.topology.feeder_down.attenuation = table;
      cfg.topology.feeder_up.attenuation = table;
      cfg.topology.drop.attenuation = table;
    }
  }
  if (const json* s = r.object(*t, "splitter", "topology.")) {
    r.unknown_keys(*s, "topology.splitter.", {"ports", "excess_loss_db", "directivity_db"});
    r.integer(*s, "ports", "topology.splitter.", cfg.topology.splitter.ports);
    r.number(*s, "excess_loss_db", "topology.splitter.", cfg.topology.splitter.excess_loss_db);
    r.number(*s, "directivity_db", "topology.splitter.", cfg.topology.splitter.directivity_db);
  }
  read_filter(r, *t, "onu_filter", base, cfg.topology.onu_filter, cfg.onu_filter_table);
  read_filter(r, *t, "co_filter", base, cfg.topology.co_filter, cfg.co_filter_table);
  r.number(*t, "loss_budget_db", "topology.", cfg.loss_budget_db);
  if (const json* p = r.object(*t, "probes", "topology.")) {
    cfg.topology.probes.clear();
    for (const auto& [name, ids] : p->items()) {
      std::vector<Element> path;
      if (!ids.is_array()) {
        r.issues.push_back("topology.probes." + name + ": expected a list of element ids");
        continue;
      }
      for (const auto& id : ids) {
        try {
          path.push_back(parse_element(id.is_string() ? id.get<std::string>() : std::string{}));
        } catch (const Error& e) {
          r.issues.push_back("topology.probes." + name + ": " + e.what());
        }
      }
      cfg.topology.probes[name] = path;
    }
  }
}

WavelengthChannel read_channel(Reader& r, const json& j, const std::string& where) {
  WavelengthChannel ch;
  r.unknown_keys(j, where,
                 {"center_nm", "frequency_thz", "power_dbm", "direction", "band", "tdma"});
  std::optional<double> nm;
  std::optional<double> thz;
  r.number(j, "center_nm", where, nm);
  r.number(j, "frequency_thz", where, thz);
  if (nm && thz) r.issues.push_back(where + "give center_nm or frequency_thz, not both");
  if (nm) ch.center_nm = *nm;
  if (thz) {
    if (*thz > 0.0) {
      ch.center_nm = thz_to_wavelength_nm(*thz);
    } else {
      r.issues.push_back(where + "frequency_thz: must be > 0");
    }
  }
  if (!nm && !thz) r.issues.push_back(where + "center_nm: required");
  if (!j.contains("power_dbm")) r.issues.push_back(where + "power_dbm: required");
  r.number(j, "power_dbm", where, ch.launch_power_dbm);
  r.enumeration(j, "direction", where, parse_direction, ch.direction);
  r.enumeration(j, "band", where, parse_band, ch.band);
  if (auto it = j.find("tdma"); it != j.end()) {
    if (it->is_boolean()) {
      ch.tdma_member = it->get<bool>();
    } else {
      r.issues.push_back(where + "tdma: expected true/false");
    }
  }
  return ch;
}

void read_channels(Reader& r, const json& root, ScenarioConfig& cfg) {
  const json* c = r.object(root, "channels", "");
  if (!c) return;
  r.unknown_keys(*c, "channels.", {"quantum", "carriers", "combs", "upstream"});
  if (const json* q = r.object(*c, "quantum", "channels.")) {
    r.unknown_keys(*q, "channels.quantum.", {"center_nm", "direction"});
    r.number(*q, "center_nm", "channels.quantum.", cfg.channels.quantum.center_nm);
    r.enumeration(*q, "direction", "channels.quantum.", parse_direction,
                  cfg.channels.quantum.direction);
  }
  if (auto it = c->find("carriers"); it != c->end()) {
    if (!it->is_array()) {
      r.issues.push_back("channels.carriers: expected a list");
    } else {
      for (std::size_t i = 0; i < it->size(); ++i) {
        const std::string where = "channels.carriers[" + std::to_string(i) + "].";
        if (!(*it)[i].is_object()) {
          r.issues.push_back(where + ": expected an object");
          continue;
        }
        cfg.channels.channels.push_back(read_channel(r, (*it)[i], where));
      }
    }
  }
  // Comb shorthand: count carriers from start_thz in step_thz increments.
  if (auto it = c->find("combs"); it != c->end()) {
    if (!it->is_array()) {
      r.issues.push_back("channels.combs: expected a list");
    } else {
      for (std::size_t i = 0; i < it->size(); ++i) {
        const json& comb = (*it)[i];
        const std::string where = "channels.combs[" + std::to_string(i) + "].";
        if (!comb.is_object()) {
          r.issues.push_back(where + ": expected an object");
          continue;
        }
        r.unknown_keys(comb, where,
                       {"start_thz", "step_thz", "count", "power_dbm", "direction", "band", "tdma"});
        double start = 0.0;
        double step = 0.0;
        int count = 0;
        r.number(comb, "start_thz", where, start);
        r.number(comb, "step_thz", where, step);
        r.integer(comb, "count", where, count);
        r.check(start > 0.0, where + "start_thz: must be > 0");
        r.check(count > 0, where + "count: must be > 0");
        json proto = json::object();
        for (const char* key : {"power_dbm", "direction", "band", "tdma"}) {
          if (comb.contains(key)) proto[key] = comb[key];
        }
        for (int k = 0; k < count && start > 0.0; ++k) {
          proto["frequency_thz"] = start + step * k;
          cfg.channels.channels.push_back(read_channel(r, proto, where));
        }
      }
    }
  }
  // Upstream shorthand: count continuous carriers on the 100 GHz grid.
  if (const json* u = r.object(*c, "upstream", "channels.")) {
    r.unknown_keys(*u, "channels.upstream.", {"count", "power_dbm"});
    int count = 0;
    double power = 5.0;
    r.integer(*u, "count", "channels.upstream.", count);
    r.number(*u, "power_dbm", "channels.upstream.", power);
    r.check(count >= 0, "channels.upstream.count: must be >= 0");
    if (count > 0) {
      auto comb = upstream_comb(count, power);
      cfg.channels.channels.insert(cfg.channels.channels.end(), comb.begin(), comb.end());
    }
  }
}

void read_transmitter(Reader& r, const json& root, ScenarioConfig& cfg) {
  const json* t = r.object(root, "transmitter", "");
  if (!t) return;
  const std::string w = "transmitter.";
  r.unknown_keys(*t, w,
                 {"symbol_rate_hz", "mean_photon_number", "carve_duty", "visibility",
                  "explicit_phases"});
  auto& tx = cfg.transmitter;
  r.number(*t, "symbol_rate_hz", w, tx.symbol_rate_hz);
  r.number(*t, "mean_photon_number", w, tx.mean_photon_number);
  r.number(*t, "carve_duty", w, tx.carve_duty);
  r.number(*t, "visibility", w, tx.visibility);
  if (auto it = t->find("explicit_phases"); it != t->end()) {
    bool ok = it->is_array();
    if (ok) {
      for (const auto& v : *it) {
        if (!v.is_number_integer() || (v.get<int>() != 0 && v.get<int>() != 1)) {
          ok = false;
          break;
        }
        tx.explicit_phases.push_back(static_cast<std::uint8_t>(v.get<int>()));
      }
    }
    if (!ok) r.issues.push_back(w + "explicit_phases: expected a list of 0/1");
  }
}

void read_detector(Reader& r, const json& root, ScenarioConfig& cfg) {
  const json* d = r.object(root, "detector", "");
  if (!d) return;
  const std::string w = "detector.";
  r.unknown_keys(*d, w,
                 {"efficiency", "dark_rate_cps", "dead_time_s", "afterpulse_prob",
                  "afterpulse_decay_s", "trap_memory_s", "monitored_ports", "excess_loss_db",
                  "di_delay_s"});
  auto& det = cfg.detector;
  r.number(*d, "efficiency", w, det.efficiency);
  r.number(*d, "dark_rate_cps", w, det.dark_rate_cps);
  r.number(*d, "dead_time_s", w, det.dead_time_s);
  r.number(*d, "afterpulse_prob", w, det.afterpulse_prob);
  r.number(*d, "afterpulse_decay_s", w, det.afterpulse_decay_s);
  r.number(*d, "trap_memory_s", w, det.trap_memory_s);
  r.enumeration(*d, "monitored_ports", w, parse_monitored_ports, det.monitored_ports);
  r.number(*d, "excess_loss_db", w, det.excess_loss_db);
  r.number(*d, "di_delay_s", w, cfg.di.delay_s);
}

void read_raman(Reader& r, const json& root, const fs::path& base, ScenarioConfig& cfg) {
  const json* s = r.object(root, "raman", "");
  if (!s) return;
  r.unknown_keys(*s, "raman.", {"profile_csv", "scale"});
  double scale = cfg.raman.scale;
  r.number(*s, "scale", "raman.", scale);
  std::string csv;
  r.string(*s, "profile_csv", "raman.", csv);
  if (!csv.empty()) {
    cfg.raman_profile_csv = resolve(base, csv);
    try {
      cfg.raman = load_raman_profile_csv(cfg.raman_profile_csv.string());
    } catch (const Error& e) {
      r.issues.push_back(std::string("raman.profile_csv: ") + e.what());
    }
  }
  cfg.raman.scale = scale;
}

void read_sections(Reader& r, const json& root, const fs::path& base, ScenarioConfig& cfg) {
  r.unknown_keys(root, "",
                 {"schema", "name", "description", "topology", "channels", "transmitter",
                  "detector", "raman", "gate", "keyrate", "run"});
  if (!root.contains("schema")) {
    r.issues.push_back("schema: required (expected 1)");
  } else if (!root["schema"].is_number_integer() || root["schema"].get<int>() != 1) {
    r.issues.push_back("schema: unsupported version (expected 1)");
  }
  r.string(root, "name", "", cfg.name);
  r.string(root, "description", "", cfg.description);
  read_topology(r, root, base, cfg);
  read_channels(r, root, cfg);
  read_transmitter(r, root, cfg);
  read_detector(r, root, cfg);
  read_raman(r, root, base, cfg);
  if (const json* g = r.object(root, "gate", "")) {
    r.unknown_keys(*g, "gate.", {"gate_fraction", "slot_phase_s"});
    r.number(*g, "gate_fraction", "gate.", cfg.gate_fraction);
    r.number(*g, "slot_phase_s", "gate.", cfg.slot_phase_s);
  }
  if (const json* k = r.object(root, "keyrate", "")) {
    r.unknown_keys(*k, "keyrate.", {"f_ec"});
    r.number(*k, "f_ec", "keyrate.", cfg.keyrate.f_ec);
  }
  if (const json* run = r.object(root, "run", "")) {
    r.unknown_keys(*run, "run.", {"mode", "duration_s", "seed"});
    r.enumeration(*run, "mode", "run.", parse_run_mode, cfg.run.mode);
    r.number(*run, "duration_s", "run.", cfg.run.duration_s);
    r.seed(*run, "seed", "run.", cfg.run.seed);
  }
}

template <class F>
void collect(std::vector<std::string>& issues, const std::string& where, F&& check) {
  try {
    check();
  } catch (const Error& e) {
    issues.push_back(where + ": " + e.what());
  }
}

std::string relative_path(const fs::path& file, const fs::path& relative_to) {
  if (file.empty()) return {};
  if (relative_to.empty()) return file.generic_string();
  const fs::path rel = file.lexically_relative(relative_to);
  return rel.empty() ? file.generic_string() : rel.generic_string();
}

json filter_json(const FilterProfile& f, const fs::path& table, const fs::path& relative_to) {
  json j = {{"center_nm", f.center_nm},
            {"fwhm_nm", f.fwhm_nm},
            {"insertion_loss_db", f.insertion_loss_db},
            {"out_of_band_rejection_db", f.out_of_band_rejection_db}};
  if (!table.empty()) j["table_csv"] = relative_path(table, relative_to);
  return j;
}

bool same_attenuation(const std::vector<SpectralPoint>& a, const std::vector<SpectralPoint>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].wavelength_nm != b[i].wavelength_nm || a[i].value != b[i].value) return false;
  }
  return true;
}

json to_json(const ScenarioConfig& cfg, const fs::path& relative_to) {
  json root;
  root["schema"] = ScenarioConfig::schema;
  root["name"] = cfg.name;
  if (!cfg.description.empty()) root["description"] = cfg.description;

  const auto& topo = cfg.topology;
  json t = {{"feeder_down_km", topo.feeder_down.length_km},
            {"feeder_up_km", topo.feeder_up.length_km},
            {"drop_km", topo.drop.length_km},
            {"splitter",
             {{"ports", topo.splitter.ports},
              {"excess_loss_db", topo.splitter.excess_loss_db},
              {"directivity_db", topo.splitter.directivity_db}}},
            {"onu_filter", filter_json(topo.onu_filter, cfg.onu_filter_table, relative_to)},
            {"co_filter", filter_json(topo.co_filter, cfg.co_filter_table, relative_to)}};
  if (!same_attenuation(topo.feeder_up.attenuation, FiberSpan::default_attenuation())) {
    json rows = json::array();
    for (const auto& p : topo.feeder_up.attenuation) rows.push_back({p.wavelength_nm, p.value});
    t["attenuation"] = rows;
  }
  if (cfg.loss_budget_db) t["loss_budget_db"] = *cfg.loss_budget_db;
  json probes = json::object();
  for (const auto& [name, path] : topo.probes) {
    json ids = json::array();
    for (auto e : path) ids.push_back(std::string(to_string(e)));
    probes[name] = ids;
  }
  t["probes"] = probes;
  root["topology"] = t;

  json carriers = json::array();
  for (const auto& ch : cfg.channels.channels) {
    carriers.push_back({{"center_nm", ch.center_nm},
                        {"power_dbm", ch.launch_power_dbm},
                        {"direction", to_string(ch.direction)},
                        {"band", to_string(ch.band)},
                        {"tdma", ch.tdma_member}});
  }
  root["channels"] = {{"quantum",
                       {{"center_nm", cfg.channels.quantum.center_nm},
                        {"direction", to_string(cfg.channels.quantum.direction)}}},
                      {"carriers", carriers}};

  const auto& tx = cfg.transmitter;
  json txj = {{"symbol_rate_hz", tx.symbol_rate_hz},
              {"mean_photon_number", tx.mean_photon_number},
              {"carve_duty", tx.carve_duty},
              {"visibility", tx.visibility}};
  if (!tx.explicit_phases.empty()) {
    json phases = json::array();
    for (auto p : tx.explicit_phases) phases.push_back(static_cast<int>(p));
    txj["explicit_phases"] = phases;
  }
  root["transmitter"] = txj;

  const auto& det = cfg.detector;
  root["detector"] = {{"efficiency", det.efficiency},
                      {"dark_rate_cps", det.dark_rate_cps},
                      {"dead_time_s", det.dead_time_s},
                      {"afterpulse_prob", det.afterpulse_prob},
                      {"afterpulse_decay_s", det.afterpulse_decay_s},
                      {"trap_memory_s", det.trap_memory_s},
                      {"monitored_ports", to_string(det.monitored_ports)},
                      {"excess_loss_db", det.excess_loss_db},
                      {"di_delay_s", cfg.di.delay_s}};

  json raman = {{"scale", cfg.raman.scale}};
  if (!cfg.raman_profile_csv.empty()) {
    raman["profile_csv"] = relative_path(cfg.raman_profile_csv, relative_to);
  }
  root["raman"] = raman;

  json gate = {{"gate_fraction", cfg.gate_fraction}};
  if (cfg.slot_phase_s) gate["slot_phase_s"] = *cfg.slot_phase_s;
  root["gate"] = gate;
  root["keyrate"] = {{"f_ec", cfg.keyrate.f_ec}};
  root["run"] = {{"mode", to_string(cfg.run.mode)},
                 {"duration_s", cfg.run.duration_s},
                 {"seed", cfg.run.seed}};
  return root;
}

}  // namespace

ScenarioConfig parse_scenario(std::string_view json_text, const fs::path& base_dir) {
  json root;
  try {
    root = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("scenario document must be a JSON object");

  ScenarioConfig cfg;
  cfg.base_dir = base_dir.empty() ? fs::current_path() : fs::absolute(base_dir);
  Reader reader;
  read_sections(reader, root, cfg.base_dir, cfg);
  auto semantic = validate_scenario(cfg);
  reader.issues.insert(reader.issues.end(), semantic.begin(), semantic.end());
  if (!reader.issues.empty()) throw ConfigError(std::move(reader.issues));
  return cfg;
}

ScenarioConfig load_scenario(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read scenario: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  auto cfg = parse_scenario(buffer.str(), path.parent_path());
  if (cfg.name.empty()) cfg.name = path.stem().string();
  return cfg;
}

std::string scenario_to_json(const ScenarioConfig& config, const fs::path& relative_to) {
  return to_json(config, relative_to).dump(2) + "\n";
}

void save_scenario(const ScenarioConfig& config, const fs::path& path) {
  const fs::path dir = fs::absolute(path).parent_path();
  std::ofstream out(path);
  if (!out) throw IoError("cannot write scenario: " + path.string());
  out << scenario_to_json(config, dir);
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<std::string> validate_scenario(const ScenarioConfig& cfg) {
  std::vector<std::string> issues;
  collect(issues, "topology.feeder_down_km", [&] { cfg.topology.feeder_down.validate(); });
  collect(issues, "topology.feeder_up_km", [&] { cfg.topology.feeder_up.validate(); });
  collect(issues, "topology.drop_km", [&] { cfg.topology.drop.validate(); });
  collect(issues, "topology.splitter", [&] { cfg.topology.splitter.validate(); });
  collect(issues, "topology.onu_filter", [&] { cfg.topology.onu_filter.validate(); });
  collect(issues, "topology.co_filter", [&] { cfg.topology.co_filter.validate(); });
  if (cfg.loss_budget_db && !(*cfg.loss_budget_db >= 0.0)) {
    issues.push_back("topology.loss_budget_db: must be >= 0");
  }
  for (std::size_t i = 0; i < cfg.channels.channels.size(); ++i) {
    collect(issues, "channels.carriers[" + std::to_string(i) + "]",
            [&] { cfg.channels.channels[i].validate(); });
  }
  if (!(cfg.channels.quantum.center_nm > 0.0)) {
    issues.push_back("channels.quantum.center_nm: must be > 0");
  }
  if (!cfg.channels.channels.empty() && cfg.channels.quantum.direction != Direction::upstream) {
    issues.push_back("channels.quantum.direction: noise accounting requires an upstream quantum channel");
  }
  collect(issues, "transmitter", [&] { cfg.transmitter.validate(); });
  collect(issues, "detector", [&] { cfg.detector.validate(); });
  collect(issues, "detector.di_delay_s", [&] { cfg.di.validate(); });
  collect(issues, "raman", [&] { cfg.raman.validate(); });
  if (!(cfg.raman.scale >= 0.0) || !std::isfinite(cfg.raman.scale)) {
    issues.push_back("raman.scale: must be finite and >= 0");
  }
  if (!(cfg.gate_fraction > 0.0 && cfg.gate_fraction <= 1.0)) {
    issues.push_back("gate.gate_fraction: must be in (0, 1]");
  }
  if (cfg.slot_phase_s && !std::isfinite(*cfg.slot_phase_s)) {
    issues.push_back("gate.slot_phase_s: must be finite");
  }
  if (!(cfg.keyrate.f_ec >= 1.0)) issues.push_back("keyrate.f_ec: must be >= 1");
  if (cfg.run.mode == RunMode::monte_carlo && !(cfg.run.duration_s > 0.0)) {
    issues.push_back("run.duration_s: must be > 0 in monte_carlo mode");
  }
  // Every carrier must map into the Raman table.
  if (issues.empty()) {
    for (std::size_t i = 0; i < cfg.channels.channels.size(); ++i) {
      collect(issues, "channels.carriers[" + std::to_string(i) + "]", [&] {
        raman_coefficient(cfg.raman, cfg.channels.channels[i].center_nm,
                          cfg.channels.quantum.center_nm);
      });
    }
    collect(issues, "topology", [&] { (void)cfg.quantum_path_loss_db(); });
  }
  return issues;
}

std::uint64_t config_hash(const ScenarioConfig& config) {
  // Tables are hashed by content so that moving a scenario keeps its hash.
  json j = to_json(config, {});
  auto inline_table = [](json& filter, const FilterProfile& f) {
    if (!filter.contains("table_csv")) return;
    json rows = json::array();
    for (const auto& p : f.table) rows.push_back({p.wavelength_nm, p.value});
    filter.erase("table_csv");
    filter["table"] = std::move(rows);
  };
  inline_table(j["topology"]["onu_filter"], config.topology.onu_filter);
  inline_table(j["topology"]["co_filter"], config.topology.co_filter);
  if (j["raman"].contains("profile_csv")) {
    json rows = json::array();
    for (const auto& s : config.raman.table) rows.push_back({s.shift_thz, s.coefficient});
    j["raman"].erase("profile_csv");
    j["raman"]["table"] = std::move(rows);
  }
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t hash) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[hash & 0xF];
    hash >>= 4;
  }
  return out;
}

}  // namespace dpsqkd
