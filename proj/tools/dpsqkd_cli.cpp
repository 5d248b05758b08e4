// dpsqkd: run, sweep and calibrate DPS-QKD coexistence scenarios.

#include <cstdlib>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dpsqkd/error.hpp"
#include "dpsqkd/report.hpp"
#include "dpsqkd/rng.hpp"
#include "dpsqkd/runner.hpp"
#include "dpsqkd/scenario.hpp"
#include "dpsqkd/sifting.hpp"

namespace fs = std::filesystem;
using namespace dpsqkd;

namespace {

enum Exit { ok = 0, failure = 1, config_error = 2, calibration_failure = 3, io_error = 4 };

fs::path scenario_dir() {
  if (const char* env = std::getenv("DPSQKD_SCENARIOS")) return env;
  return DPSQKD_SCENARIO_DIR;
}

// A path, or the name of a bundled scenario.
fs::path resolve_config(const std::string& arg) {
  fs::path p(arg);
  if (fs::exists(p)) return p;
  fs::path bundled = scenario_dir() / (arg + ".json");
  if (!p.has_extension() && fs::exists(bundled)) return bundled;
  throw IoError("scenario not found: " + arg);
}

std::vector<double> parse_values(const std::string& list, const std::string& range) {
  std::vector<double> values;
  if (!range.empty()) {
    double start = 0, stop = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(range);
    if (!(in >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0 ||
        stop < start) {
      throw ConfigError("--range expects start:stop:step with step > 0");
    }
    const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (long i = 0; i < n; ++i) values.push_back(start + step * static_cast<double>(i));
  }
  std::istringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("--values: '" + item + "' is not a number");
    }
  }
  if (values.empty()) throw ConfigError("sweep needs --values or --range");
  return values;
}

struct Common {
  std::string config;
  std::string mode;
  std::optional<std::uint64_t> seed;
  std::optional<double> duration;
  std::string out;
  std::string format = "json";
};

void add_common(CLI::App* cmd, Common& c, bool run_flags) {
  cmd->add_option("--config,-c", c.config, "Scenario file or bundled scenario name")->required();
  cmd->add_option("--out,-o", c.out, "Output file (default: stdout)");
  cmd->add_option("--format,-f", c.format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}));
  if (run_flags) {
    cmd->add_option("--mode,-m", c.mode, "Override run.mode")
        ->check(CLI::IsMember({"oracle", "monte_carlo", "mc"}));
    cmd->add_option("--seed,-s", c.seed, "Override run.seed");
    cmd->add_option("--duration", c.duration, "Override run.duration_s");
  }
}

ScenarioConfig load_with_overrides(const Common& c) {
  ScenarioConfig cfg = load_scenario(resolve_config(c.config));
  if (!c.mode.empty()) cfg.run.mode = parse_run_mode(c.mode);
  if (c.seed) cfg.run.seed = *c.seed;
  if (c.duration) cfg.run.duration_s = *c.duration;
  if (auto issues = validate_scenario(cfg); !issues.empty()) throw ConfigError(std::move(issues));
  return cfg;
}

int cmd_run(const Common& c, const std::string& tags) {
  ScenarioConfig cfg = load_with_overrides(c);
  if (!tags.empty() && cfg.run.mode != RunMode::monte_carlo) {
    throw ConfigError("--tags requires monte_carlo mode");
  }
  RunOptions options;
  options.keep_tags = !tags.empty();
  ScenarioResult r = run_scenario(cfg, options);
  if (r.simulation) {
    write_tag_csv(r.simulation->stream, tags);
    TagSidecar side;
    side.seed = r.seed;
    side.config_hash = r.config_hash;
    side.duration_s = r.duration_s;
    side.symbol_rate_hz = cfg.transmitter.symbol_rate_hz;
    side.n_slots = r.simulation->truth.size();
    side.scenario = cfg.name;
    write_tag_sidecar(sidecar_path(tags), side);
  }
  write_output(c.out, render(r, parse_report_format(c.format)));
  return ok;
}

int cmd_sweep(const Common& c, const std::string& axis, const std::string& values,
              const std::string& range, unsigned threads) {
  ScenarioConfig cfg = load_with_overrides(c);
  SweepSpec spec{axis, parse_values(values, range)};
  SweepResult r = run_sweep(cfg, spec, threads);
  write_output(c.out, render(r, parse_report_format(c.format)));
  return ok;
}

int cmd_calibrate(const Common& c, const std::string& anchors, const std::string& report) {
  const fs::path config_path = resolve_config(c.config);
  ScenarioConfig cfg = load_scenario(config_path);
  const fs::path anchor_path =
      anchors.empty() ? scenario_dir() / "calibration_anchors.json" : fs::path(anchors);
  auto steps = load_calibration_steps(anchor_path);
  auto results = calibrate_steps(std::move(steps));
  for (const auto& r : results) set_parameter(cfg, r.parameter, r.value);
  if (c.out.empty()) {
    std::cout << scenario_to_json(cfg, fs::current_path());
  } else {
    save_scenario(cfg, c.out);
  }
  const std::string text = render(results, config_hash(cfg));
  if (report.empty()) {
    std::cerr << text;
  } else {
    write_output(report, text);
  }
  return ok;
}

int cmd_validate(const std::string& config, const std::string& report) {
  if (!report.empty()) {
    std::ifstream in(report);
    if (!in) throw IoError("cannot read " + report);
    std::stringstream buffer;
    buffer << in.rdbuf();
    auto issues = validate_report_json(buffer.str());
    if (!issues.empty()) throw ConfigError(std::move(issues));
    std::cout << report << ": ok\n";
    return ok;
  }
  if (config.empty()) throw ConfigError("validate needs --config or --report");
  const fs::path path = resolve_config(config);
  ScenarioConfig cfg = load_scenario(path);
  std::cout << path.string() << ": ok (hash " << hash_hex(config_hash(cfg)) << ")\n";
  return ok;
}

int cmd_scenarios(const std::string& dir_arg) {
  const fs::path dir = dir_arg.empty() ? scenario_dir() : fs::path(dir_arg);
  if (!fs::is_directory(dir)) throw IoError("no scenario directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".json" && entry.path().stem() != "calibration_anchors") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    try {
      ScenarioConfig cfg = load_scenario(f);
      std::cout << f.stem().string() << "\t" << cfg.description << "\n";
    } catch (const Error& e) {
      std::cout << f.stem().string() << "\t(invalid: " << e.what() << ")\n";
    }
  }
  return ok;
}

int cmd_score(const Common& c, const std::string& tags) {
  ScenarioConfig cfg = load_with_overrides(c);
  const TagSidecar side = read_tag_sidecar(sidecar_path(tags));
  cfg.run.seed = side.seed;
  cfg.run.duration_s = side.duration_s;
  cfg.run.mode = RunMode::monte_carlo;
  if (config_hash(cfg) != side.config_hash) {
    throw ConfigError("tag file was produced by a different configuration (hash " +
                      hash_hex(side.config_hash) + ", scenario gives " +
                      hash_hex(config_hash(cfg)) + ")");
  }
  const TimeTagStream stream = read_tag_csv(tags, side.duration_s);
  const PatternSource pattern =
      cfg.transmitter.explicit_phases.empty()
          ? PatternSource::seeded(derive_seed(side.seed, streams::pattern))
          : PatternSource::explicit_phases(cfg.transmitter.explicit_phases);
  const DifferentialTruth truth(pattern, side.n_slots);
  const QberReport q = sift_and_score(stream, truth, cfg.gate());
  ScenarioResult r;
  r.scenario = cfg.name;
  r.mode = RunMode::monte_carlo;
  r.seed = side.seed;
  r.duration_s = side.duration_s;
  r.config_hash = side.config_hash;
  r.measured = q;
  r.raw_rate_bs = q.raw_rate;
  r.qber = q.qber;
  r.key = secure_rate(q.raw_rate, q.qber, cfg.keyrate.f_ec, cfg.transmitter.symbol_rate_hz);
  write_output(c.out, render(r, parse_report_format(c.format)));
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DPS-QKD coexistence simulator for splitter-based PONs"};
  app.set_version_flag("--version", toolkit_version());
  app.require_subcommand(1);

  Common run_opts;
  std::string tags;
  auto* run = app.add_subcommand("run", "Run one scenario");
  add_common(run, run_opts, true);
  run->add_option("--tags", tags, "Export Monte Carlo tags to CSV (+ .json sidecar)");

  Common sweep_opts;
  sweep_opts.format = "csv";
  std::string axis, values, range;
  unsigned threads = 0;
  auto* sweep = app.add_subcommand("sweep", "Sweep one parameter");
  add_common(sweep, sweep_opts, true);
  sweep->add_option("--axis", axis, "Axis name or dotted scenario path")->required();
  sweep->add_option("--values", values, "Comma separated values");
  sweep->add_option("--range", range, "start:stop:step");
  sweep->add_option("--threads,-j", threads, "Worker threads (0: all cores)");

  Common cal_opts;
  std::string anchors, cal_report;
  auto* calibrate = app.add_subcommand("calibrate", "Fit free parameters to anchor observables");
  add_common(calibrate, cal_opts, false);
  calibrate->add_option("--anchors", anchors, "Anchors file (default: bundled)");
  calibrate->add_option("--report", cal_report, "Calibration report (default: stderr)");

  std::string lint_config, lint_report;
  auto* validate = app.add_subcommand("validate", "Check a scenario or a report");
  validate->add_option("--config,-c", lint_config, "Scenario file or bundled name");
  validate->add_option("--report", lint_report, "JSON report to check against the schema");

  std::string dir;
  auto* scenarios = app.add_subcommand("scenarios", "List bundled scenarios");
  scenarios->add_option("--dir", dir, "Scenario directory");

  Common score_opts;
  std::string score_tags;
  auto* score = app.add_subcommand("score", "Sift and score an exported tag file");
  add_common(score, score_opts, false);
  score->add_option("--tags", score_tags, "Tag CSV written by run --tags")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : config_error;
  }

  try {
    if (*run) return cmd_run(run_opts, tags);
    if (*sweep) return cmd_sweep(sweep_opts, axis, values, range, threads);
    if (*calibrate) return cmd_calibrate(cal_opts, anchors, cal_report);
    if (*validate) return cmd_validate(lint_config, lint_report);
    if (*scenarios) return cmd_scenarios(dir);
    if (*score) return cmd_score(score_opts, score_tags);
  } catch (const ConfigError& e) {
    std::cerr << "dpsqkd: " << e.what() << "\n";
    return config_error;
  } catch (const LookupError& e) {
    std::cerr << "dpsqkd: " << e.what() << "\n";
    return config_error;
  } catch (const CalibrationError& e) {
    std::cerr << "dpsqkd: calibration failed: " << e.what() << "\n";
    return calibration_failure;
  } catch (const IoError& e) {
    std::cerr << "dpsqkd: " << e.what() << "\n";
    return io_error;
  } catch (const DataError& e) {
    std::cerr << "dpsqkd: " << e.what() << "\n";
    return io_error;
  } catch (const std::exception& e) {
    std::cerr << "dpsqkd: " << e.what() << "\n";
    return failure;
  }
  return failure;
}
