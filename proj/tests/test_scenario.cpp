#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "dpsqkd/error.hpp"
#include "dpsqkd/scenario.hpp"
#include "dpsqkd/units.hpp"

using namespace dpsqkd;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = DPSQKD_SCENARIO_DIR;

std::string minimal(const std::string& extra = "") {
  return R"({"schema": 1, "name": "t")" + extra + "}";
}

std::size_t issue_count(const std::string& text) {
  try {
    parse_scenario(text, kScenarios);
  } catch (const ConfigError& e) {
    return e.issues().size();
  }
  return 0;
}

}  // namespace

TEST_SUITE("scenario") {
  TEST_CASE("bundled scenarios load and validate") {
    int count = 0;
    for (const auto& entry : fs::directory_iterator(kScenarios)) {
      if (entry.path().extension() != ".json" || entry.path().stem() == "calibration_anchors") {
        continue;
      }
      CAPTURE(entry.path().string());
      const ScenarioConfig cfg = load_scenario(entry.path());
      CHECK(validate_scenario(cfg).empty());
      CHECK(cfg.name == entry.path().stem().string());
      ++count;
    }
    CHECK(count >= 10);
  }

  TEST_CASE("save and reload keeps the config hash") {
    const ScenarioConfig cfg = load_scenario(kScenarios / "c.json");
    const fs::path dir = fs::temp_directory_path() / "dpsqkd_test_roundtrip";
    fs::create_directories(dir);
    save_scenario(cfg, dir / "c.json");
    const ScenarioConfig back = load_scenario(dir / "c.json");
    CHECK(config_hash(back) == config_hash(cfg));
    CHECK(back.channels.channels.size() == cfg.channels.channels.size());
    CHECK(back.transmitter.visibility == cfg.transmitter.visibility);
    fs::remove_all(dir);
  }

  TEST_CASE("hash follows content") {
    ScenarioConfig cfg = load_scenario(kScenarios / "n.json");
    const auto h = config_hash(cfg);
    CHECK(hash_hex(h).size() == 16);
    cfg.detector.dark_rate_cps += 1.0;
    CHECK(config_hash(cfg) != h);
  }

  TEST_CASE("comb shorthand expands to carriers") {
    const ScenarioConfig cfg = load_scenario(kScenarios / "c.json");
    REQUIRE(cfg.channels.channels.size() == 52);
    const auto& first_c = cfg.channels.channels[32];
    CHECK(first_c.band == Band::C);
    CHECK(thz_to_wavelength_nm(192.2) == doctest::Approx(first_c.center_nm));
    CHECK(thz_to_wavelength_nm(192.4) == doctest::Approx(cfg.channels.channels[33].center_nm));
    CHECK(cfg.channels.channels[0].direction == Direction::downstream);
  }

  TEST_CASE("upstream comb alternates around the anchor") {
    const auto comb = upstream_comb(4, 5.0);
    REQUIRE(comb.size() == 4);
    CHECK(comb[0].center_nm == doctest::Approx(thz_to_wavelength_nm(193.4)));
    for (const auto& ch : comb) {
      CHECK(ch.direction == Direction::upstream);
      CHECK(ch.launch_power_dbm == 5.0);
    }
    CHECK(comb[1].center_nm != doctest::Approx(comb[2].center_nm));
    CHECK(upstream_comb(0, 5.0).empty());
  }

  TEST_CASE("every problem is reported at once") {
    CHECK(issue_count(minimal()) == 0);
    const std::string bad = minimal(
        R"(, "transmitter": {"visibility": 1.5, "mean_photon_number": -1},)"
        R"( "detector": {"dead_time": 1e-5}, "gate": {"gate_fraction": 0})");
    CHECK(issue_count(bad) == 3);
    CHECK(issue_count(R"({"schema": 2})") >= 1);
    CHECK(issue_count(R"({"name": "no schema"})") >= 1);
    CHECK(issue_count(minimal(R"(, "colour": "blue")")) == 1);
    CHECK_THROWS_AS(parse_scenario("{not json", kScenarios), ConfigError);
  }

  TEST_CASE("bad file references") {
    CHECK_THROWS_AS(load_scenario(kScenarios / "does_not_exist.json"), IoError);
    CHECK(issue_count(minimal(R"(, "raman": {"profile_csv": "missing.csv"})")) >= 1);
  }

  TEST_CASE("run mode names") {
    CHECK(parse_run_mode("oracle") == RunMode::oracle);
    CHECK(parse_run_mode("mc") == RunMode::monte_carlo);
    CHECK(parse_run_mode("monte_carlo") == RunMode::monte_carlo);
    CHECK(to_string(RunMode::monte_carlo) == "monte_carlo");
    CHECK_THROWS(parse_run_mode("quantum"));
  }

  TEST_CASE("attenuator overrides the odn path") {
    ScenarioConfig cfg = load_scenario(kScenarios / "n.json");
    CHECK(cfg.quantum_path_loss_db() == doctest::Approx(21.0).epsilon(1e-3));
    cfg.loss_budget_db = 26.0;
    CHECK(cfg.quantum_path_loss_db() == 26.0);
    CHECK(cfg.gate().gate_fraction == 0.3);
  }
}
