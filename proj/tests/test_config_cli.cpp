#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "hexcpg/cli.hpp"
#include "hexcpg/config.hpp"
#include "hexcpg/errors.hpp"

using namespace hexcpg;
using nlohmann::json;

namespace {

const std::string kDataDir = TEST_DATA_DIR;

std::string temp_path(const std::string& name) { return "/tmp/hexcpg_cfg_" + name; }

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = temp_path(name);
  std::ofstream f(path, std::ios::trunc);
  f << text;
  return path;
}

}  // namespace

TEST_CASE("text format: sections, scalars, arrays, comments") {
  const json j = parse_config_text(R"(# gait setup
[oscillator]
a = 50            # integer stays integral
dt = 0.005
omega = 25.132741228718345

[task]
enabled = true
kind = "stairs"
goal = [2.0, 0.5]

[geometry]
mount_x = [
  0.1, 0.1,
  0.0, 0.0,
  -0.1, -0.1,
]
)");
  CHECK(j["oscillator"]["a"].is_number_integer());
  CHECK(j["oscillator"]["a"] == 50);
  CHECK(j["oscillator"]["dt"] == 0.005);
  CHECK(j["task"]["enabled"] == true);
  CHECK(j["task"]["kind"] == "stairs");
  REQUIRE(j["task"]["goal"].is_array());
  CHECK(j["task"]["goal"][1] == 0.5);
  REQUIRE(j["geometry"]["mount_x"].size() == 6);  // multi-line + trailing comma
  CHECK(j["geometry"]["mount_x"][4] == -0.1);
}

TEST_CASE("text format: dotted sections, nested arrays, escapes, exponents") {
  const json j = parse_config_text(R"([a.b]
m = [[1, 2], [3, 4]]
s = "quote \" inside"
x = 1e-3
flag = false
)");
  REQUIRE(j.contains("a"));
  CHECK(j["a"]["b"]["m"][1][0] == 3);
  CHECK(j["a"]["b"]["s"] == "quote \" inside");
  CHECK(j["a"]["b"]["x"] == 1e-3);
  CHECK(j["a"]["b"]["x"].is_number_float());
  CHECK(j["a"]["b"]["flag"] == false);
}

TEST_CASE("text format: errors carry line numbers") {
  try {
    (void)parse_config_text("[oscillator]\na = 1\nb = @@@\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("(line 3)") != std::string::npos);
  }
  CHECK_THROWS_AS((void)parse_config_text("[never_closed\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config_text("s = \"runaway\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config_text("just_a_key\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config_text("[x]\nv = [1, 2\n"), ConfigError);
}

TEST_CASE("unknown keys are rejected with their dotted path") {
  try {
    (void)RunConfig::from_json(json{{"oscillator", {{"dt", 0.005}, {"warp", 9}}}});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.path == "oscillator.warp");
  }
  try {
    (void)RunConfig::from_json(json{{"wheels", json::object()}});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.path == "config.wheels");
  }
}

TEST_CASE("defaults serialize to the golden config and round-trip exactly") {
  const RunConfig def{};
  std::ifstream f(kDataDir + "/golden_config.json");
  REQUIRE(f.good());
  const json golden = json::parse(f);
  CHECK(def.to_json() == golden);

  const RunConfig back = RunConfig::from_json(def.to_json());
  CHECK(back.to_json() == def.to_json());
}

TEST_CASE("a mutated config survives the json round trip") {
  RunConfig cfg;
  cfg.scheduler.variant = StackVariant::NoVpath;
  cfg.task.enabled = true;
  cfg.task.kind = TaskKind::Slope;
  cfg.task.difficulty = 3;
  cfg.task.goal = {3.0, 1.0};
  cfg.task.final_goal = {6.0, 0.0};
  cfg.terrain.kind = TerrainKind::Gap;
  cfg.terrain.difficulty = 2.0;
  cfg.sim.seed = 99;
  cfg.sim.duration = 4.5;
  cfg.morph.l = -0.05;
  cfg.initial_skill = {0.3, 0.4};
  cfg.faults.push_back(parse_fault("LM:0.3:nofb"));
  cfg.out_dir = "elsewhere";

  const json j = cfg.to_json();
  const RunConfig back = RunConfig::from_json(j);
  CHECK(back.to_json() == j);
  CHECK(back.scheduler.variant == StackVariant::NoVpath);
  CHECK(back.task.final_goal[0] == 6.0);
  CHECK(back.faults.size() == 1);
  CHECK_FALSE(back.faults[0].feedback_frozen);
}

TEST_CASE("final goal defaults to the stage goal when omitted") {
  const RunConfig cfg = RunConfig::from_json(json{{"task", {{"goal", json{3.0, 1.0}}}}});
  CHECK(cfg.task.final_goal[0] == 3.0);
  CHECK(cfg.task.final_goal[1] == 1.0);
}

TEST_CASE("fault strings parse case-insensitively and round-trip") {
  const FaultSpec a = parse_fault("lm:0.3");
  CHECK(a.leg == 2);
  CHECK(a.frozen_value == 0.3);
  CHECK(a.feedback_frozen);
  CHECK(fault_to_string(a) == "LM:0.3");

  const FaultSpec b = parse_fault("RH:-0.25:nofb");
  CHECK(b.leg == 5);
  CHECK(b.frozen_value == -0.25);
  CHECK_FALSE(b.feedback_frozen);
  CHECK(fault_to_string(b) == "RH:-0.25:nofb");

  CHECK_THROWS_AS((void)parse_fault("XX:1"), ConfigError);
  CHECK_THROWS_AS((void)parse_fault("LM"), ConfigError);
  CHECK_THROWS_AS((void)parse_fault("LM:abc"), ConfigError);
  CHECK_THROWS_AS((void)parse_fault("LM:0.3:wat"), ConfigError);
}

TEST_CASE("validation rejects out-of-band values with their path") {
  RunConfig cfg;
  cfg.task.difficulty = 9;
  try {
    cfg.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.path == "task.difficulty");
  }
  cfg = RunConfig{};
  cfg.initial_skill = {1.0, 1.0};
  try {
    cfg.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.path == "policies.initial_skill");
  }
  cfg = RunConfig{};
  cfg.task.gamma = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = RunConfig{};
  cfg.sim.duration = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("text and json files load to the same config") {
  const std::string text = write_temp("same.toml", R"([sim]
seed = 7
duration = 2.5

[task]
enabled = true
kind = "gap"
goal = [1.5, 0.0]

[scheduler]
variant = "noalpha"
)");
  const json j = {
      {"sim", {{"seed", 7}, {"duration", 2.5}}},
      {"task", {{"enabled", true}, {"kind", "gap"}, {"goal", json{1.5, 0.0}}}},
      {"scheduler", {{"variant", "noalpha"}}},
  };
  const std::string jpath = write_temp("same.json", j.dump());

  const RunConfig a = RunConfig::from_file(text);
  const RunConfig b = RunConfig::from_file(jpath);
  CHECK(a.to_json() == b.to_json());
  CHECK(a.sim.seed == 7);
  CHECK(a.scheduler.variant == StackVariant::NoAlpha);
  CHECK(a.task.kind == TaskKind::Gap);

  CHECK_THROWS_AS((void)RunConfig::from_file("/nonexistent/config.toml"), ConfigError);
}

TEST_CASE("network policy paths resolve relative to the config file") {
  namespace fs = std::filesystem;
  const fs::path dir = "/tmp/hexcpg_cfg_netdir";
  fs::create_directories(dir);
  fs::copy_file(kDataDir + "/policy_net.json", dir / "policy_net.json",
                fs::copy_options::overwrite_existing);
  {
    std::ofstream f(dir / "run.toml", std::ios::trunc);
    f << "[policies]\nhigh = \"net:policy_net.json\"\n";
  }
  const RunConfig cfg = RunConfig::from_file((dir / "run.toml").string());
  CHECK(cfg.high_policy.spec.kind == PolicySpec::Kind::FeedForwardNet);
  CHECK(cfg.high_policy.spec.input_size == 3);

  // Same reference from elsewhere fails: the file is not in the cwd.
  const std::string stray = write_temp("stray.toml",
                                       "[policies]\nhigh = \"net:policy_net.json\"\n");
  CHECK_THROWS_AS((void)RunConfig::from_file(stray), ConfigError);
}

TEST_CASE("cli exit codes and artifacts") {
  setenv("HEXCPG_LOG_LEVEL", "quiet", 1);

  SUBCASE("check rewards passes") { CHECK(run_cli({"check", "rewards"}) == 0); }
  SUBCASE("unknown check suite is a usage error") {
    CHECK(run_cli({"check", "nonsense"}) == 2);
  }
  SUBCASE("bad flag") { CHECK(run_cli({"simulate", "--warp", "9"}) == 2); }
  SUBCASE("missing subcommand") { CHECK(run_cli({}) == 2); }
  SUBCASE("missing config file") {
    CHECK(run_cli({"simulate", "--config", "/nonexistent.toml"}) == 2);
  }
  SUBCASE("simulate writes the run artifacts") {
    namespace fs = std::filesystem;
    const std::string out = "/tmp/hexcpg_cli_out";
    fs::remove_all(out);
    CHECK(run_cli({"simulate", "--duration", "0.5", "--seed", "7", "--out-dir", out}) == 0);
    for (const char* name : {"trajectory.csv", "trajectory.json", "gait.csv", "summary.json"})
      CHECK(fs::exists(fs::path(out) / name));
    std::ifstream f(fs::path(out) / "summary.json");
    const json s = json::parse(f);
    CHECK(s["cpg_steps"] == 100);
  }
  SUBCASE("sample-skills json") {
    CHECK(run_cli({"sample-skills", "--count", "5", "--format", "json"}) == 0);
  }
  SUBCASE("sweep runs every grid point") {
    namespace fs = std::filesystem;
    const std::string out = "/tmp/hexcpg_cli_sweep";
    fs::remove_all(out);
    CHECK(run_cli({"sweep", "--param", "morph.l", "--min", "0.01", "--max", "0.02",
                   "--count", "2", "--duration", "0.2", "--out-dir", out}) == 0);
    std::ifstream f(fs::path(out) / "sweep.json");
    REQUIRE(f.good());
    const json s = json::parse(f);
    REQUIRE(s["points"].size() == 2);
    CHECK(s["points"][0]["value"] == 0.01);
    CHECK(s["points"][1]["value"] == 0.02);
    CHECK(fs::exists(fs::path(out) / "point_000" / "summary.json"));
    CHECK(fs::exists(fs::path(out) / "point_001" / "summary.json"));
  }
}
