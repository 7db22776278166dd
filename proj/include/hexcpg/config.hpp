#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hexcpg/controller.hpp"
#include "hexcpg/kinematics.hpp"
#include "hexcpg/oscillator.hpp"
#include "hexcpg/policy.hpp"
#include "hexcpg/rewards.hpp"
#include "hexcpg/terrain.hpp"

namespace hexcpg {

// Joint fault: all three joints of `leg` freeze at `frozen_value` and the
// reported joint angles freeze with them (feedback_frozen). Text form
// "LEG:VALUE", e.g. "LM:0.3".
struct FaultSpec {
  int leg = 0;
  double frozen_value = 0.0;
  bool feedback_frozen = true;
};

FaultSpec parse_fault(const std::string& text);  // throws ConfigError
std::string fault_to_string(const FaultSpec& f);

// Policy slot in a config: canonical source strings are
//   "scripted:NAME", "zero" (alias), "constant" (values in *_values),
//   "random", "net:PATH" (PATH relative to the config file).
struct PolicyBinding {
  std::string source = "scripted:zero";
  std::vector<double> values;  // constant policies
  PolicySpec spec;             // resolved form

  void resolve(const std::string& base_dir);  // throws ConfigError
};

struct TaskConfig {
  bool enabled = false;
  TaskKind kind = TaskKind::Stairs;
  int difficulty = 1;
  Vec2 goal{2.0, 0.0};
  Vec2 final_goal{2.0, 0.0};  // second target point in the high-level view
  double goal_radius = 0.2;
  double v_max = 0.3;
  double gamma = 0.99;
};

struct SimOptions {
  double duration = 10.0;      // s
  std::uint64_t seed = 42;
  double body_mass = 2.0;      // kg
  double gravity = 9.81;       // m/s^2
  double contact_k = 1.0;      // tangential force per unit foot speed
  double yaw_gain = 1.0;       // differential-drive steering gain
  double overlap_margin = 0.08;  // m of terrain overlap before contact fires
};

// Full run description. Every field has a usable default; file parsing is
// strict (unknown keys are rejected with their dotted path).
struct RunConfig {
  OscillatorParams oscillator;
  LegGeometry links;                  // shared link lengths (mount unused)
  std::array<MountPose, 6> mounts = default_mounts();
  MorphParams morph;
  MorphRanges morph_ranges;
  SchedulerConfig scheduler;
  PolicyBinding high_policy;
  PolicyBinding mid_policy;
  SkillVector initial_skill{1.0, 0.0};
  TaskConfig task;
  TerrainConfig terrain;
  SimOptions sim;
  std::vector<FaultSpec> faults;
  std::string out_dir = "out";

  static std::array<MountPose, 6> default_mounts();
  LegGeometry leg(int i) const;  // links + mounts[i]

  void validate() const;  // throws ConfigError
  nlohmann::json to_json() const;
  // base_dir resolves relative policy paths; "" = current directory.
  static RunConfig from_json(const nlohmann::json& j, const std::string& base_dir = "");
  static RunConfig from_file(const std::string& path);
};

// Parses the plain text config format: [section] / [section.sub] headers,
// `key = value` lines, values are numbers, booleans, "strings" or (nested)
// arrays; '#' starts a comment. Returns the equivalent JSON tree.
nlohmann::json parse_config_text(const std::string& text);

// Reads .json files as JSON and anything else as the text format.
nlohmann::json load_config_file(const std::string& path);

}  // namespace hexcpg
