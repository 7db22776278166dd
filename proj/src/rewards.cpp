#include "hexcpg/rewards.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hexcpg/errors.hpp"

namespace hexcpg {

RewardWeights task_weights(TaskKind task) {
  switch (task) {
    case TaskKind::Stairs: return {1.0, 1.0, 0.5, 1.0, 1.0};
    case TaskKind::Gap:    return {1.0, 1.0, 2.0, 1.0, 1.0};
    case TaskKind::Alley:  return {2.0, 1.0, 2.0, 2.0, 1.0};
    case TaskKind::Slope:  return {1.0, 1.5, 1.0, 1.0, 1.0};
  }
  throw std::invalid_argument("unknown task kind");
}

int update_difficulty(int level, bool reached_final_goal, bool reached_half_goals) {
  if (reached_final_goal)
    ++level;
  else if (!reached_half_goals)
    --level;
  return std::clamp(level, kMinDifficulty, kMaxDifficulty);
}

Vec2 desired_heading(const Vec2& goal, const Vec2& position) {
  const Vec2 diff = goal - position;
  const double dist = norm(diff);
  if (dist < 1e-9) throw DegenerateGoal();
  return {diff[0] / dist, diff[1] / dist};
}

double speed_reward(const Vec2& d, const Vec2& velocity, double v_max) {
  return std::min(dot(d, velocity), v_max);
}

double direction_reward(const Vec2& d, const Vec2& current_heading) {
  return std::exp(-norm(d - current_heading));
}

double balance_reward(double v_z) { return -v_z * v_z; }

double collision_reward(double f_xy, double f_z) {
  return std::abs(f_xy) > 4.0 * std::abs(f_z) ? -1.0 : 0.0;
}

double time_reward() { return -0.1; }

double task_reward(const SubRewards& r, const RewardWeights& w, int difficulty) {
  return difficulty *
         (w.w_v * r.r_v + w.w_d * r.r_d + w.w_b * r.r_b + w.w_s * r.r_s + w.w_T * r.r_T);
}

double task_reward(const SubRewards& r, TaskKind task, int difficulty) {
  return task_reward(r, task_weights(task), difficulty);
}

PhiFunction planar_position_phi() {
  return [](std::span<const double> s) -> Vec2 {
    if (s.size() < 2) throw ShapeMismatch("representation input needs at least 2 components");
    return {s[0], s[1]};
  };
}

double lsd_step_reward(const PhiFunction& phi, std::span<const double> s,
                       std::span<const double> s_next, const SkillVector& z, double v_z) {
  const Vec2 a = phi(s);
  const Vec2 b = phi(s_next);
  return (b[0] - a[0]) * z.x + (b[1] - a[1]) * z.y - kVerticalPenaltyWeight * v_z * v_z;
}

double trajectory_objective(const PhiFunction& phi,
                            const std::vector<std::vector<double>>& states,
                            const SkillVector& z) {
  if (states.size() < 2) return 0.0;
  // Neumaier-compensated sum: the telescoping identity against the endpoint
  // form must survive trajectories of 10^4+ steps.
  double sum = 0.0, comp = 0.0;
  Vec2 prev = phi(states[0]);
  for (std::size_t t = 1; t < states.size(); ++t) {
    const Vec2 cur = phi(states[t]);
    const double term = (cur[0] - prev[0]) * z.x + (cur[1] - prev[1]) * z.y;
    const double tentative = sum + term;
    if (std::abs(sum) >= std::abs(term))
      comp += (sum - tentative) + term;
    else
      comp += (term - tentative) + sum;
    sum = tentative;
    prev = cur;
  }
  return sum + comp;
}

double discounted_return(std::span<const double> rewards, double gamma) {
  double acc = 0.0;
  for (std::size_t t = rewards.size(); t-- > 0;) acc = rewards[t] + gamma * acc;
  return acc;
}

std::vector<LipschitzViolation> lipschitz_check(
    const PhiFunction& phi,
    const std::vector<std::pair<std::vector<double>, std::vector<double>>>& pairs) {
  std::vector<LipschitzViolation> out;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& [a, b] = pairs[k];
    if (a.size() != b.size())
      throw ShapeMismatch("lipschitz_check pair has mismatched state sizes");
    const Vec2 pa = phi(a);
    const Vec2 pb = phi(b);
    const double expansion = std::hypot(pa[0] - pb[0], pa[1] - pb[1]);
    double dist2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) dist2 += (a[i] - b[i]) * (a[i] - b[i]);
    const double bound = std::sqrt(dist2) * (1.0 + 1e-9);
    if (expansion > bound) out.push_back({k, expansion, bound});
  }
  return out;
}

Vec2 heading_mix(const Vec2& teacher_d, const Vec2& student_d) {
  return norm(teacher_d - student_d) < 0.6 ? student_d : teacher_d;
}

double distill_loss(std::span<const Vec2> d_hat, std::span<const Vec2> d,
                    std::span<const std::array<double, 7>> a_hat,
                    std::span<const std::array<double, 7>> a) {
  const std::size_t n = d.size();
  if (n == 0 || d_hat.size() != n || a_hat.size() != n || a.size() != n)
    throw ShapeMismatch("distill_loss needs equal-length non-empty batches");
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += norm(d_hat[i] - d[i]);
    double q = 0.0;
    for (int k = 0; k < 7; ++k) q += (a_hat[i][k] - a[i][k]) * (a_hat[i][k] - a[i][k]);
    acc += std::sqrt(q);
  }
  return acc / static_cast<double>(n);
}

}  // namespace hexcpg
