#include "dpsqkd/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <json.hpp>

#include "dpsqkd/error.hpp"
#include "dpsqkd/rng.hpp"

namespace dpsqkd {

namespace fs = std::filesystem;
using nlohmann::json;

ScenarioResult run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  if (auto issues = validate_scenario(config); !issues.empty()) {
    throw ConfigError(std::move(issues));
  }
  ScenarioResult r;
  r.scenario = config.name;
  r.mode = config.run.mode;
  r.config_hash = config_hash(config);
  r.path_loss_db = config.quantum_path_loss_db();
  if (!config.channels.channels.empty()) {
    r.raman = odn_noise_at_bob(config.channels, config.topology, config.topology.co_filter,
                               config.raman);
  }
  r.dark_counts_s = config.detector.dark_rate_cps;
  r.oracle = click_rate_oracle(config.transmitter, r.path_loss_db, config.detector,
                               r.raman.total_at_receiver, config.gate_fraction, config.di);
  r.raw_rate_bs = r.oracle.total_rate;
  r.qber = r.oracle.qber;

  if (config.run.mode == RunMode::monte_carlo) {
    r.seed = config.run.seed;
    r.duration_s = config.run.duration_s;
    SimulationResult sim =
        simulate_timetags(config.transmitter, config.di, r.path_loss_db, config.detector,
                          r.raman.total_at_receiver, config.run.duration_s, config.run.seed);
    r.measured = sift_and_score(sim.stream, sim.truth, config.gate());
    r.raw_rate_bs = r.measured->raw_rate;
    r.qber = r.measured->qber;
    if (options.keep_tags) r.simulation = std::move(sim);
  }
  r.key = secure_rate(r.raw_rate_bs, r.qber, config.keyrate.f_ec,
                      config.transmitter.symbol_rate_hz);
  return r;
}

std::vector<std::string> sweep_axes() {
  return {"loss_budget_db", "splitter_ports",  "reach_km",  "upstream_channels",
          "raman_scale",    "excess_loss_db",  "visibility"};
}

namespace {

int integral_value(const std::string& axis, double value) {
  if (value != std::floor(value) || std::abs(value) > 1e6) {
    throw ConfigError(axis + ": value " + std::to_string(value) + " must be an integer");
  }
  return static_cast<int>(value);
}

// Dotted path into the canonical scenario document.
ScenarioConfig apply_path(const ScenarioConfig& config, const std::string& axis, double value) {
  json doc = json::parse(scenario_to_json(config, config.base_dir));
  json* node = &doc;
  std::stringstream parts(axis);
  std::string key;
  std::vector<std::string> keys;
  while (std::getline(parts, key, '.')) keys.push_back(key);
  if (keys.empty()) throw ConfigError("empty sweep axis");
  for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
    if (!node->is_object() || !node->contains(keys[i]) || !(*node)[keys[i]].is_object()) {
      throw ConfigError("sweep axis '" + axis + "' does not resolve");
    }
    node = &(*node)[keys[i]];
  }
  const std::string& leaf = keys.back();
  if (!node->is_object() || !node->contains(leaf) || !(*node)[leaf].is_number()) {
    throw ConfigError("sweep axis '" + axis + "' does not resolve to a numeric field");
  }
  if ((*node)[leaf].is_number_integer()) {
    (*node)[leaf] = integral_value(axis, value);
  } else {
    (*node)[leaf] = value;
  }
  ScenarioConfig out = parse_scenario(doc.dump(), config.base_dir);
  out.name = config.name;
  return out;
}

}  // namespace

ScenarioConfig apply_axis(const ScenarioConfig& config, const std::string& axis, double value) {
  if (!std::isfinite(value)) throw ConfigError(axis + ": value must be finite");
  ScenarioConfig out = config;
  if (axis == "loss_budget_db" || axis == "loss_budget") {
    if (value < 0.0) throw ConfigError("loss_budget_db: must be >= 0");
    out.loss_budget_db = value;
  } else if (axis == "splitter_ports" || axis == "split") {
    out.topology.splitter.ports = integral_value(axis, value);
  } else if (axis == "reach_km" || axis == "reach") {
    const double feeder_up = value - out.topology.drop.length_km;
    if (!(feeder_up > 0.0)) {
      throw ConfigError("reach_km: " + std::to_string(value) + " km does not exceed the drop length");
    }
    const double ratio = feeder_up / config.topology.feeder_up.length_km;
    out.topology.feeder_up.length_km = feeder_up;
    out.topology.feeder_down.length_km = config.topology.feeder_down.length_km * ratio;
  } else if (axis == "upstream_channels") {
    const int count = integral_value(axis, value);
    if (count < 0) throw ConfigError("upstream_channels: must be >= 0");
    double power = 5.0;
    auto& channels = out.channels.channels;
    for (const auto& ch : channels) {
      if (ch.direction == Direction::upstream) {
        power = ch.launch_power_dbm;
        break;
      }
    }
    std::erase_if(channels, [](const WavelengthChannel& ch) { return ch.direction == Direction::upstream; });
    auto comb = upstream_comb(count, power);
    channels.insert(channels.end(), comb.begin(), comb.end());
  } else if (axis == "raman_scale") {
    set_parameter(out, FreeParameter::raman_scale, value);
  } else if (axis == "excess_loss_db" || axis == "excess_loss") {
    set_parameter(out, FreeParameter::excess_loss, value);
  } else if (axis == "visibility") {
    set_parameter(out, FreeParameter::visibility, value);
  } else if (axis.find('.') != std::string::npos) {
    return apply_path(config, axis, value);
  } else {
    throw ConfigError("unknown sweep axis '" + axis + "'");
  }
  if (auto issues = validate_scenario(out); !issues.empty()) throw ConfigError(std::move(issues));
  return out;
}

SweepResult run_sweep(const ScenarioConfig& config, const SweepSpec& spec, unsigned threads) {
  if (spec.values.empty()) throw ConfigError("sweep needs at least one value");
  // Resolve every point up front so a bad axis fails before any work starts.
  std::vector<ScenarioConfig> points;
  points.reserve(spec.values.size());
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    points.push_back(apply_axis(config, spec.axis, spec.values[i]));
    points.back().run.seed = derive_seed(config.run.seed, streams::sweep_base + i);
  }

  SweepResult result;
  result.spec = spec;
  result.config_hash = config_hash(config);
  result.mode = config.run.mode;
  result.rows.resize(points.size());
  std::vector<std::exception_ptr> errors(points.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        const ScenarioResult r = run_scenario(points[i]);
        result.rows[i] = {spec.values[i],         r.path_loss_db,   r.raman.total_at_receiver,
                          r.dark_counts_s,        r.raw_rate_bs,    r.qber,
                          r.key.secure_rate,      r.key.secure_bits_per_pulse};
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, points.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return result;
}

FreeParameter parse_free_parameter(const std::string& text) {
  if (text == "raman_scale") return FreeParameter::raman_scale;
  if (text == "excess_loss" || text == "excess_loss_db") return FreeParameter::excess_loss;
  if (text == "visibility") return FreeParameter::visibility;
  throw LookupError("unknown free parameter '" + text +
                    "' (expected raman_scale|excess_loss|visibility)");
}

std::string to_string(FreeParameter parameter) {
  switch (parameter) {
    case FreeParameter::raman_scale: return "raman_scale";
    case FreeParameter::excess_loss: return "excess_loss";
    case FreeParameter::visibility: return "visibility";
  }
  return "?";
}

Observable parse_observable(const std::string& text) {
  if (text == "raman_counts_s") return Observable::raman_counts_s;
  if (text == "raw_rate_bs") return Observable::raw_rate_bs;
  if (text == "qber") return Observable::qber;
  if (text == "secure_rate_bs") return Observable::secure_rate_bs;
  if (text == "path_loss_db") return Observable::path_loss_db;
  throw LookupError("unknown observable '" + text + "'");
}

std::string to_string(Observable observable) {
  switch (observable) {
    case Observable::raman_counts_s: return "raman_counts_s";
    case Observable::raw_rate_bs: return "raw_rate_bs";
    case Observable::qber: return "qber";
    case Observable::secure_rate_bs: return "secure_rate_bs";
    case Observable::path_loss_db: return "path_loss_db";
  }
  return "?";
}

void set_parameter(ScenarioConfig& config, FreeParameter parameter, double value) {
  switch (parameter) {
    case FreeParameter::raman_scale: config.raman.scale = value; break;
    case FreeParameter::excess_loss: config.detector.excess_loss_db = value; break;
    case FreeParameter::visibility: config.transmitter.visibility = value; break;
  }
}

double get_parameter(const ScenarioConfig& config, FreeParameter parameter) {
  switch (parameter) {
    case FreeParameter::raman_scale: return config.raman.scale;
    case FreeParameter::excess_loss: return config.detector.excess_loss_db;
    case FreeParameter::visibility: return config.transmitter.visibility;
  }
  return 0.0;
}

double observe(const ScenarioConfig& config, Observable observable) {
  ScenarioConfig oracle = config;
  oracle.run.mode = RunMode::oracle;
  const ScenarioResult r = run_scenario(oracle);
  switch (observable) {
    case Observable::raman_counts_s: return r.raman.total_at_receiver;
    case Observable::raw_rate_bs: return r.raw_rate_bs;
    case Observable::qber: return r.qber;
    case Observable::secure_rate_bs: return r.key.secure_rate;
    case Observable::path_loss_db: return r.path_loss_db;
  }
  return 0.0;
}

namespace {

std::pair<double, double> default_bracket(FreeParameter parameter, double current) {
  switch (parameter) {
    case FreeParameter::raman_scale: return {0.0, std::max(current, 1e-12) * 64.0};
    case FreeParameter::excess_loss: return {0.0, 60.0};
    case FreeParameter::visibility: return {0.5, 1.0};
  }
  return {0.0, 1.0};
}

std::string format_bracket(double a, double fa, double b, double fb) {
  std::ostringstream os;
  os.precision(6);
  os << "[" << a << ", " << b << "] with residuals [" << fa << ", " << fb << "]";
  return os.str();
}

}  // namespace

CalibrationResult calibrate(std::vector<Anchor> anchors, FreeParameter parameter,
                            const CalibrationOptions& options) {
  if (anchors.empty()) throw CalibrationError("calibration needs at least one anchor");
  CalibrationResult result;
  result.parameter = parameter;
  for (const auto& a : anchors) {
    result.anchors.push_back(a.label + ":" + to_string(a.observable));
  }

  auto evaluate = [&](double p, std::size_t i) {
    ScenarioConfig cfg = anchors[i].scenario;
    set_parameter(cfg, parameter, p);
    return observe(cfg, anchors[i].observable) - anchors[i].target;
  };

  const double current = get_parameter(anchors.front().scenario, parameter);
  auto [lo, hi] = options.bracket.value_or(default_bracket(parameter, current));
  const auto max_iter = static_cast<std::uintmax_t>(options.max_iterations);

  if (anchors.size() == 1) {
    auto f = [&](double p) { return evaluate(p, 0); };
    double flo = f(lo);
    double fhi = f(hi);
    // Raman noise is unbounded in the scale: widen upward until the sign flips.
    if (!options.bracket && parameter == FreeParameter::raman_scale) {
      for (int k = 0; k < 40 && flo * fhi > 0.0 && fhi < 0.0; ++k) {
        hi *= 64.0;
        fhi = f(hi);
      }
    }
    if (flo * fhi > 0.0) {
      throw CalibrationError("no sign change for " + to_string(parameter) + " on " +
                             format_bracket(lo, flo, hi, fhi));
    }
    const double target = anchors.front().target;
    const boost::math::tools::eps_tolerance<double> tol(40);
    double root = 0.0;
    std::uintmax_t iter = max_iter;
    try {
      auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iter);
      root = 0.5 * (a + b);
      result.method = "toms748";
    } catch (const std::exception&) {
      iter = max_iter;
    }
    if (result.method.empty() || std::abs(f(root)) > std::abs(target) * options.relative_tolerance) {
      iter = max_iter;
      auto [a, b] = boost::math::tools::bisect(f, lo, hi, tol, iter);
      root = 0.5 * (a + b);
      result.method = "bisection";
    }
    result.value = root;
    result.iterations = static_cast<int>(iter);
    result.residual = f(root);
    if (std::abs(result.residual) > std::abs(target) * options.relative_tolerance ||
        iter >= max_iter) {
      throw CalibrationError("no convergence for " + to_string(parameter) + " within " +
                             std::to_string(options.max_iterations) + " iterations on " +
                             format_bracket(lo, flo, hi, fhi));
    }
    return result;
  }

  // Relative least squares so anchors of different units weigh alike.
  auto cost = [&](double p) {
    double sum = 0.0;
    for (std::size_t i = 0; i < anchors.size(); ++i) {
      const double scale = anchors[i].target != 0.0 ? anchors[i].target : 1.0;
      const double r = evaluate(p, i) / scale;
      sum += r * r;
    }
    return sum;
  };
  std::uintmax_t iter = max_iter;
  const auto [best, best_cost] =
      boost::math::tools::brent_find_minima(cost, lo, hi, 40, iter);
  (void)best_cost;
  double sq = 0.0;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const double r = evaluate(best, i);
    sq += r * r;
  }
  result.value = best;
  result.iterations = static_cast<int>(iter);
  result.residual = std::sqrt(sq / static_cast<double>(anchors.size()));
  result.method = "brent_least_squares";
  if (iter >= max_iter) {
    throw CalibrationError("least squares for " + to_string(parameter) + " did not converge in " +
                           std::to_string(options.max_iterations) + " iterations");
  }
  return result;
}

std::vector<CalibrationResult> calibrate_steps(std::vector<CalibrationStep> steps,
                                               int max_rounds) {
  if (steps.empty()) throw CalibrationError("no calibration steps");
  std::vector<CalibrationResult> results(steps.size());
  for (int round = 0; round < max_rounds; ++round) {
    bool moved = false;
    for (std::size_t s = 0; s < steps.size(); ++s) {
      CalibrationResult r = calibrate(steps[s].anchors, steps[s].parameter);
      if (round == 0 || std::abs(r.value - results[s].value) > 1e-9 * std::abs(r.value)) {
        moved = true;
      }
      results[s] = r;
      for (auto& step : steps) {
        for (auto& anchor : step.anchors) set_parameter(anchor.scenario, r.parameter, r.value);
      }
    }
    if (!moved) return results;
  }
  throw CalibrationError("alternating calibration did not settle in " +
                         std::to_string(max_rounds) + " rounds");
}

std::vector<CalibrationStep> load_calibration_steps(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read anchors file: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": malformed JSON: " + e.what());
  }
  std::vector<std::string> issues;
  if (!doc.is_object() || doc.value("schema", 0) != 1) {
    throw ConfigError(path.string() + ": expected an object with \"schema\": 1");
  }
  if (!doc.contains("steps") || !doc["steps"].is_array() || doc["steps"].empty()) {
    throw ConfigError(path.string() + ": \"steps\" must be a non-empty list");
  }
  const fs::path base = fs::absolute(path).parent_path();
  std::vector<CalibrationStep> steps;
  for (std::size_t s = 0; s < doc["steps"].size(); ++s) {
    const json& js = doc["steps"][s];
    const std::string where = "steps[" + std::to_string(s) + "]";
    CalibrationStep step;
    try {
      step.parameter = parse_free_parameter(js.at("parameter").get<std::string>());
      for (const json& ja : js.at("anchors")) {
        Anchor a;
        const fs::path file = base / ja.at("scenario").get<std::string>();
        a.scenario = load_scenario(file);
        a.label = a.scenario.name;
        a.observable = parse_observable(ja.at("observable").get<std::string>());
        a.target = ja.at("target").get<double>();
        step.anchors.push_back(std::move(a));
      }
      if (step.anchors.empty()) issues.push_back(where + ": no anchors");
    } catch (const json::exception& e) {
      issues.push_back(where + ": " + e.what());
      continue;
    } catch (const ConfigError& e) {
      for (const auto& issue : e.issues()) issues.push_back(where + ": " + issue);
      continue;
    } catch (const LookupError& e) {
      issues.push_back(where + ": " + e.what());
      continue;
    }
    steps.push_back(std::move(step));
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return steps;
}

}  // namespace dpsqkd
