#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "hexcpg/kinematics.hpp"
#include "hexcpg/oscillator.hpp"
#include "hexcpg/policy.hpp"
#include "hexcpg/skill.hpp"

namespace hexcpg {

// High-level action a^h = [delta_morph (5), skill z (2)].
struct HighLevelAction {
  std::array<double, 5> delta_morph{};
  SkillVector skill{};
};

// Mid-level action a = [mu (6), omega (6)], all components in [-1, 1].
struct MidLevelAction {
  std::array<double, 6> mu{};
  std::array<double, 6> omega{};
};

// Sensor snapshot assembled by the simulator at mid-level rate.
struct Proprioception {
  std::array<double, 18> joint_angles{};            // leg-major: LF j0 j1 j2, RF ...
  std::array<double, 4> orientation{1, 0, 0, 0};    // unit quaternion (w, x, y, z)
  Vec3 angular_velocity{};                          // rad/s
  Vec3 linear_acceleration{};                       // body frame, m/s^2
  MorphParams morph;
  double omega_m = 0.0;
};

// Ablation variants of the stack.
//   Full:    dual pathway as designed.
//   NoAlpha: single-phase oscillator (coupling moved onto theta).
//   NoVpath: no mid-level policy; the high level emits a 17-dim action
//            [mu (6), omega (6), delta_morph (5)] routed straight through.
//   NoLpath: morph deltas are discarded (omega_m and skill still flow).
enum class StackVariant { Full, NoAlpha, NoVpath, NoLpath };

const char* variant_name(StackVariant v);
StackVariant parse_variant(const std::string& name);  // throws ConfigError

struct SchedulerConfig {
  double cpg_dt = 0.005;  // oscillator step, s (200 Hz)
  int mid_period = 12;    // CPG steps per mid-level evaluation (16.67 Hz)
  int high_period = 10;   // mid evaluations per high-level evaluation (1.67 Hz)
  StackVariant variant = StackVariant::Full;

  void validate() const;  // throws ConfigError
};

// Observation layouts.
//   mid:  joints (18) + quaternion (4) + angular velocity (3) + linear
//         acceleration (3) + morph (5) + omega_m (1) + skill (2)   -> 36
//   high: same without skill, plus the height grid (H*W) and the headings
//         to the two target points (2 + 2)                          -> 34 + H*W + 4
inline constexpr int kProprioSize = 34;
inline constexpr int kMidObservationSize = 36;

std::vector<double> assemble_mid_observation(const Proprioception& p, const SkillVector& skill);
std::vector<double> assemble_high_observation(const Proprioception& p,
                                              std::span<const double> height_grid,
                                              const Vec2& heading_goal,
                                              const Vec2& heading_final);

// Applies a high-level action to the slow pathway state: morph moves by
// apply_morph_delta (unless NoLpath), omega_m = (0.2 + 0.8 ||z||) * Omega.
// The skill component is radially clamped into the unit disc first.
struct RoutedHigh {
  MorphParams morph;
  double omega_m;
  SkillVector skill;
};
RoutedHigh route_dual_pathway(const HighLevelAction& a, const MorphParams& morph,
                              const MorphRanges& ranges, double Omega, StackVariant variant);

// Three-level scheduler around one oscillator network. Owns the policy
// instances and the zero-order-held actions between evaluations.
class ControllerStack {
 public:
  ControllerStack(const SchedulerConfig& sched, const OscillatorParams& osc,
                  const MorphParams& morph, const MorphRanges& ranges,
                  std::unique_ptr<Policy> high, std::unique_ptr<Policy> mid,
                  SkillVector initial_skill = {1.0, 0.0});

  struct TickResult {
    bool high_evaluated = false;
    bool mid_evaluated = false;
    ControlInputs inputs;  // held mu/omega plus current omega_m
  };

  // step_index counts CPG steps from 0. The high level fires when
  // step_index is a multiple of mid_period * high_period, the mid level on
  // multiples of mid_period; both actions are held in between. At step 0
  // the high level fires before the mid level.
  TickResult tick(long step_index, const Proprioception& proprio,
                  std::span<const double> height_grid, const Vec2& heading_goal,
                  const Vec2& heading_final);

  const MorphParams& morph() const { return morph_; }
  double omega_m() const { return omega_m_; }
  const SkillVector& skill() const { return skill_; }
  const HighLevelAction& last_high() const { return high_action_; }
  const MidLevelAction& last_mid() const { return mid_action_; }
  const SchedulerConfig& scheduler() const { return sched_; }
  const OscillatorParams& oscillator_params() const { return osc_; }
  long high_evals() const { return high_evals_; }
  long mid_evals() const { return mid_evals_; }

 private:
  SchedulerConfig sched_;
  OscillatorParams osc_;
  MorphParams morph_;
  MorphRanges ranges_;
  std::unique_ptr<Policy> high_;
  std::unique_ptr<Policy> mid_;
  SkillVector skill_;
  double omega_m_;
  HighLevelAction high_action_;
  MidLevelAction mid_action_;
  long high_evals_ = 0;
  long mid_evals_ = 0;
};

}  // namespace hexcpg
