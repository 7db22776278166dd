#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "hexcpg/config.hpp"
#include "hexcpg/controller.hpp"
#include "hexcpg/rewards.hpp"
#include "hexcpg/terrain.hpp"

namespace hexcpg {

// True while a mixed phase commands ground contact: sin(phi) <= 0.
bool stance_detect(double phi);

// Per-step record of everything observable. Columns are fixed and
// versioned; tests pin them against a golden list.
class TrajectoryLog {
 public:
  static constexpr const char* kSchemaVersion = "v1";
  static const std::vector<std::string>& columns();
  static std::size_t column_index(const std::string& name);  // throws std::out_of_range

  void append(std::vector<double> row);
  std::size_t rows() const { return rows_.size(); }
  const std::vector<double>& row(std::size_t i) const { return rows_[i]; }
  double at(std::size_t row, const std::string& column) const;

  std::string to_csv() const;   // header + one line per row, to_chars formatting
  std::string to_json() const;  // {schema_version, columns, rows}

 private:
  std::vector<std::vector<double>> rows_;
};

struct GaitDiagram {
  std::vector<double> time;
  std::array<std::vector<std::uint8_t>, 6> stance;  // 1 = stance
  std::array<int, 6> stride_count{};                // swing->stance onsets
  std::array<double, 6> stance_fraction{};
  std::string to_csv() const;
};

// Builds the diagram from the logged mixed phases (stance <=> sin(phi) <= 0).
GaitDiagram extract_gait_diagram(const TrajectoryLog& log);

struct Summary {
  std::string schema_version = "v1";
  std::uint64_t seed = 0;
  std::string variant;
  double duration = 0.0;
  long cpg_steps = 0;
  long mid_evals = 0;
  long high_evals = 0;
  double mean_velocity_x = 0.0;  // world x, averaged over steps
  double mean_speed = 0.0;       // planar speed norm, averaged over steps
  Vec2 net_displacement{};
  double final_yaw = 0.0;
  std::array<double, 6> stance_fraction{};  // phase-based duty factor
  double total_reward = 0.0;                // sum of per-step task rewards
  double return_discounted = 0.0;
  double total_lsd_reward = 0.0;
  bool success = false;      // reached task goal within goal_radius
  double time_to_goal = -1.0;
  long ik_clamp_count = 0;   // foot targets radially clamped into reach
  std::vector<int> faulted_legs;
  std::string to_json() const;
};

struct RolloutResult {
  TrajectoryLog log;
  Summary summary;
};

// Kinematic simulator around one ControllerStack.
//
// Per CPG step: sample proprioception, tick the controller, advance the
// oscillator, map (r, phi) to foot targets, solve leg IK (radially clamping
// unreachable targets), freeze faulted legs, then integrate the body: planar
// velocity is minus the mean leg-frame velocity of the stance feet (rotated
// to world), yaw rate is the left/right stance velocity differential over
// the track width, and body height tracks the terrain under the center plus
// the commanded height. Contact forces are proxies: stance legs share the
// body weight equally; tangential force is contact_k times the foot speed
// when the foot overlaps terrain by more than overlap_margin.
class Simulation {
 public:
  explicit Simulation(const RunConfig& cfg);
  ~Simulation();

  void step();
  void run(long steps);

  // Freezes all three joints of a leg at frozen_value from now on; the leg
  // stops counting toward stance. Active faults persist for the whole run.
  void inject_fault(const FaultSpec& fault);

  long steps_done() const { return steps_done_; }
  const TrajectoryLog& log() const { return log_; }
  const ControllerStack& stack() const { return *stack_; }
  Summary summary() const;

 private:
  struct Body {
    Vec2 position{};
    double z = 0.0;
    double yaw = 0.0;
    Vec2 velocity{};   // world
    double v_z = 0.0;
    double yaw_rate = 0.0;
  };

  Proprioception make_proprioception() const;
  bool fault_feedback_frozen(int leg) const;
  Vec2 safe_heading(const Vec2& goal, Vec2& last) const;
  std::vector<double> repr_state() const;

  RunConfig cfg_;
  Terrain terrain_;
  std::unique_ptr<ControllerStack> stack_;
  OscillatorState osc_;
  Body body_;
  Vec2 prev_velocity_{};
  std::array<JointAngles, 6> joints_{};      // realized (after fault freeze)
  std::array<JointAngles, 6> cmd_joints_{};  // IK output before the freeze
  std::array<FootPosition, 6> feet_{};       // realized, leg-local
  std::array<FootPosition, 6> prev_feet_{};
  std::array<bool, 6> stance_{};
  std::array<bool, 6> overlap_{};
  std::array<FootForce, 6> forces_{};
  std::array<bool, 6> faulted_{};
  std::array<double, 6> frozen_value_{};
  std::vector<FaultSpec> faults_;
  mutable Vec2 last_heading_goal_{1.0, 0.0};
  mutable Vec2 last_heading_final_{1.0, 0.0};
  std::vector<double> prev_repr_;
  TrajectoryLog log_;
  long steps_done_ = 0;
  long ik_clamp_count_ = 0;
  double sum_vx_ = 0.0;
  double sum_speed_ = 0.0;
  double total_reward_ = 0.0;
  double total_lsd_ = 0.0;
  std::vector<double> reward_series_;
  bool success_ = false;
  double time_to_goal_ = -1.0;
};

// Runs cfg.sim.duration seconds (round(duration / dt) steps) from a fresh
// simulation and returns the log plus summary.
RolloutResult rollout(const RunConfig& cfg);

}  // namespace hexcpg
