#include "hexcpg/controller.hpp"

#include <algorithm>
#include <cmath>

#include "hexcpg/errors.hpp"

namespace hexcpg {

const char* variant_name(StackVariant v) {
  switch (v) {
    case StackVariant::Full: return "full";
    case StackVariant::NoAlpha: return "noalpha";
    case StackVariant::NoVpath: return "novpath";
    case StackVariant::NoLpath: return "nolpath";
  }
  return "?";
}

StackVariant parse_variant(const std::string& name) {
  for (StackVariant v : {StackVariant::Full, StackVariant::NoAlpha, StackVariant::NoVpath,
                         StackVariant::NoLpath})
    if (name == variant_name(v)) return v;
  throw ConfigError("unknown variant '" + name + "' (full|noalpha|novpath|nolpath)",
                    "scheduler.variant");
}

void SchedulerConfig::validate() const {
  if (!(cpg_dt > 0.0)) throw ConfigError("cpg_dt must be > 0", "scheduler.cpg_dt");
  if (mid_period < 1) throw ConfigError("mid_period must be >= 1", "scheduler.mid_period");
  if (high_period < 1) throw ConfigError("high_period must be >= 1", "scheduler.high_period");
}

namespace {

void append_proprio(std::vector<double>& obs, const Proprioception& p) {
  obs.insert(obs.end(), p.joint_angles.begin(), p.joint_angles.end());
  obs.insert(obs.end(), p.orientation.begin(), p.orientation.end());
  obs.insert(obs.end(), p.angular_velocity.begin(), p.angular_velocity.end());
  obs.insert(obs.end(), p.linear_acceleration.begin(), p.linear_acceleration.end());
  const auto m = p.morph.as_array();
  obs.insert(obs.end(), m.begin(), m.end());
  obs.push_back(p.omega_m);
}

}  // namespace

std::vector<double> assemble_mid_observation(const Proprioception& p, const SkillVector& skill) {
  std::vector<double> obs;
  obs.reserve(kMidObservationSize);
  append_proprio(obs, p);
  obs.push_back(skill.x);
  obs.push_back(skill.y);
  return obs;
}

std::vector<double> assemble_high_observation(const Proprioception& p,
                                              std::span<const double> height_grid,
                                              const Vec2& heading_goal,
                                              const Vec2& heading_final) {
  std::vector<double> obs;
  obs.reserve(kProprioSize + height_grid.size() + 4);
  append_proprio(obs, p);
  obs.insert(obs.end(), height_grid.begin(), height_grid.end());
  obs.push_back(heading_goal[0]);
  obs.push_back(heading_goal[1]);
  obs.push_back(heading_final[0]);
  obs.push_back(heading_final[1]);
  return obs;
}

RoutedHigh route_dual_pathway(const HighLevelAction& a, const MorphParams& morph,
                              const MorphRanges& ranges, double Omega, StackVariant variant) {
  RoutedHigh out{morph, 0.0, a.skill};
  const double n = out.skill.norm();
  if (n > 1.0) {  // radial clamp into the unit disc
    out.skill.x /= n;
    out.skill.y /= n;
  }
  out.omega_m = compute_omega_max(out.skill.norm(), Omega);
  if (variant != StackVariant::NoLpath)
    out.morph = apply_morph_delta(morph, a.delta_morph, ranges);
  return out;
}

ControllerStack::ControllerStack(const SchedulerConfig& sched, const OscillatorParams& osc,
                                 const MorphParams& morph, const MorphRanges& ranges,
                                 std::unique_ptr<Policy> high, std::unique_ptr<Policy> mid,
                                 SkillVector initial_skill)
    : sched_(sched),
      osc_(osc),
      morph_(morph),
      ranges_(ranges),
      high_(std::move(high)),
      mid_(std::move(mid)),
      skill_(initial_skill) {
  sched_.validate();
  if (sched_.variant == StackVariant::NoAlpha) osc_.phase_mode = PhaseMode::CoupledTheta;
  osc_.validate();
  const double n = skill_.norm();
  if (n > 1.0) {
    skill_.x /= n;
    skill_.y /= n;
  }
  omega_m_ = compute_omega_max(skill_.norm(), osc_.Omega);
}

ControllerStack::TickResult ControllerStack::tick(long step_index,
                                                  const Proprioception& proprio,
                                                  std::span<const double> height_grid,
                                                  const Vec2& heading_goal,
                                                  const Vec2& heading_final) {
  TickResult res;
  const long high_every = static_cast<long>(sched_.mid_period) * sched_.high_period;
  const bool novpath = sched_.variant == StackVariant::NoVpath;

  if (step_index % high_every == 0) {
    res.high_evaluated = true;
    ++high_evals_;
    std::vector<double> obs =
        assemble_high_observation(proprio, height_grid, heading_goal, heading_final);
    PolicyContext ctx{obs, &proprio, step_index * sched_.cpg_dt};
    std::vector<double> raw = high_->act(ctx);
    if (novpath) {
      if (raw.size() != 17)
        throw ShapeMismatch("novpath high-level action must have 17 components, got " +
                            std::to_string(raw.size()));
      for (int i = 0; i < 6; ++i) mid_action_.mu[i] = std::clamp(raw[i], -1.0, 1.0);
      for (int i = 0; i < 6; ++i) mid_action_.omega[i] = std::clamp(raw[6 + i], -1.0, 1.0);
      for (int i = 0; i < 5; ++i)
        high_action_.delta_morph[i] = std::clamp(raw[12 + i], -1.0, 1.0);
      // No ventromedial pathway: skill (and hence omega_m) stays at its
      // initial value; only the morph delta is routed.
      high_action_.skill = skill_;
      morph_ = apply_morph_delta(morph_, high_action_.delta_morph, ranges_);
    } else {
      if (raw.size() != 7)
        throw ShapeMismatch("high-level action must have 7 components, got " +
                            std::to_string(raw.size()));
      for (int i = 0; i < 5; ++i)
        high_action_.delta_morph[i] = std::clamp(raw[i], -1.0, 1.0);
      high_action_.skill = SkillVector{raw[5], raw[6]};
      const RoutedHigh routed =
          route_dual_pathway(high_action_, morph_, ranges_, osc_.Omega, sched_.variant);
      morph_ = routed.morph;
      omega_m_ = routed.omega_m;
      skill_ = routed.skill;
      high_action_.skill = routed.skill;
    }
  }

  if (!novpath && step_index % sched_.mid_period == 0) {
    res.mid_evaluated = true;
    ++mid_evals_;
    std::vector<double> obs = assemble_mid_observation(proprio, skill_);
    PolicyContext ctx{obs, &proprio, step_index * sched_.cpg_dt};
    std::vector<double> raw = mid_->act(ctx);
    if (raw.size() != 12)
      throw ShapeMismatch("mid-level action must have 12 components, got " +
                          std::to_string(raw.size()));
    for (int i = 0; i < 6; ++i) mid_action_.mu[i] = std::clamp(raw[i], -1.0, 1.0);
    for (int i = 0; i < 6; ++i) mid_action_.omega[i] = std::clamp(raw[6 + i], -1.0, 1.0);
  }

  res.inputs.mu = mid_action_.mu;
  res.inputs.omega = mid_action_.omega;
  res.inputs.omega_m = omega_m_;
  return res;
}

}  // namespace hexcpg
