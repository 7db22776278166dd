#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "hexcpg/skill.hpp"
#include "hexcpg/vec.hpp"

namespace hexcpg {

// Planar contact force proxy for one foot: tangential magnitude and normal
// component.
struct FootForce {
  double f_xy = 0.0;
  double f_z = 0.0;
};

// The slice of simulator state the reward functions read.
struct BodyState {
  Vec3 position{};             // world, m
  Vec3 velocity{};             // world, m/s
  Vec2 heading{1.0, 0.0};      // current unit heading d_c
  double v_z = 0.0;            // vertical speed, m/s
  std::array<FootForce, 6> foot_forces{};
};

struct RewardWeights {
  double w_v = 1.0, w_d = 1.0, w_b = 1.0, w_s = 1.0, w_T = 1.0;
};

enum class TaskKind { Stairs, Gap, Alley, Slope };

// Fixed per-task weight table (w_v, w_d, w_b, w_s, w_T):
//   Stairs {1, 1, 0.5, 1, 1}, Gap {1, 1, 2, 1, 1},
//   Alley {2, 1, 2, 2, 1},    Slope {1, 1.5, 1, 1, 1}.
RewardWeights task_weights(TaskKind task);

// Difficulty curriculum, levels 1..5.
inline constexpr int kMinDifficulty = 1;
inline constexpr int kMaxDifficulty = 5;

// Raise the level after an episode batch that reached the final goal, lower
// it when fewer than half the goals were reached, otherwise keep it; always
// clamped to [1, 5].
int update_difficulty(int level, bool reached_final_goal, bool reached_half_goals);

// Unit vector from `position` toward `goal` (planar). Throws DegenerateGoal
// when the distance is below 1e-9.
Vec2 desired_heading(const Vec2& goal, const Vec2& position);

// min(<d, v>, v_max); no lower clip.
double speed_reward(const Vec2& d, const Vec2& velocity, double v_max = 0.3);

// exp(-||d - d_c||) with the Euclidean norm.
double direction_reward(const Vec2& d, const Vec2& current_heading);

// -v_z^2.
double balance_reward(double v_z);

// -1 when |f_xy| > 4 |f_z| (strict), else 0.
double collision_reward(double f_xy, double f_z);

// Constant per-step time penalty.
double time_reward();

struct SubRewards {
  double r_v = 0.0, r_d = 0.0, r_b = 0.0, r_s = 0.0, r_T = 0.0;
};

// Difficulty-scaled weighted sum:
//   d_l * (w_v r_v + w_d r_d + w_b r_b + w_s r_s + w_T r_T).
double task_reward(const SubRewards& r, TaskKind task, int difficulty);
double task_reward(const SubRewards& r, const RewardWeights& w, int difficulty);

// --- latent-skill objective -------------------------------------------------

// Layout of the reduced state s^d handed to representation functions:
// position (3), roll/pitch/yaw (3), linear velocity (3), angular velocity
// (3), then oscillator internals r, r', theta, theta', alpha, alpha'
// (6 each) — 48 values total.
inline constexpr std::size_t kReprStateSize = 48;

// 2-D representation function phi(s^d); expected to be 1-Lipschitz.
using PhiFunction = std::function<Vec2(std::span<const double>)>;

// phi = planar position projection (first two components); 1-Lipschitz.
PhiFunction planar_position_phi();

inline constexpr double kVerticalPenaltyWeight = 0.1;

// (phi(s_next) - phi(s)) . z - 0.1 * v_z^2.
double lsd_step_reward(const PhiFunction& phi, std::span<const double> s,
                       std::span<const double> s_next, const SkillVector& z, double v_z);

// Sum of step rewards along a trajectory, ignoring the vertical penalty;
// telescopes to (phi(s_T) - phi(s_0)) . z. Compensated summation keeps the
// identity tight for long trajectories.
double trajectory_objective(const PhiFunction& phi,
                            const std::vector<std::vector<double>>& states,
                            const SkillVector& z);

// sum_t gamma^t rewards[t].
double discounted_return(std::span<const double> rewards, double gamma);

struct LipschitzViolation {
  std::size_t pair_index;
  double expansion;  // ||phi(a) - phi(b)||
  double bound;      // ||a - b|| * (1 + 1e-9)
};

// Flags every sampled pair where phi expands distances beyond the
// 1-Lipschitz bound (with a 1e-9 relative tolerance).
std::vector<LipschitzViolation> lipschitz_check(
    const PhiFunction& phi,
    const std::vector<std::pair<std::vector<double>, std::vector<double>>>& pairs);

// --- distillation -----------------------------------------------------------

// Returns the student's heading estimate while it stays within 0.6 of the
// teacher direction, else the teacher direction.
Vec2 heading_mix(const Vec2& teacher_d, const Vec2& student_d);

// Mean over samples of ||d_hat - d|| + ||a_hat - a||.
double distill_loss(std::span<const Vec2> d_hat, std::span<const Vec2> d,
                    std::span<const std::array<double, 7>> a_hat,
                    std::span<const std::array<double, 7>> a);

}  // namespace hexcpg
