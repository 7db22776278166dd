#include "hexcpg/check.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hexcpg/errors.hpp"
#include "hexcpg/kinematics.hpp"
#include "hexcpg/leg.hpp"
#include "hexcpg/oscillator.hpp"
#include "hexcpg/rewards.hpp"
#include "hexcpg/rng.hpp"
#include "hexcpg/skill.hpp"
#include "hexcpg/stats.hpp"

namespace hexcpg {

namespace {

using nlohmann::json;

constexpr std::uint64_t kCheckSeed = 12345;

struct Suite {
  json checks = json::array();
  bool pass = true;

  // value must stay strictly below threshold
  void below(const std::string& name, double value, double threshold) {
    const bool ok = value < threshold;
    checks.push_back({{"name", name}, {"pass", ok}, {"value", value}, {"threshold", threshold}});
    pass = pass && ok;
  }
  // value must stay strictly above threshold
  void above(const std::string& name, double value, double threshold) {
    const bool ok = value > threshold;
    checks.push_back({{"name", name}, {"pass", ok}, {"value", value}, {"threshold", threshold}});
    pass = pass && ok;
  }
  void boolean(const std::string& name, bool ok) {
    checks.push_back(
        {{"name", name}, {"pass", ok}, {"value", ok ? 1.0 : 0.0}, {"threshold", 1.0}});
    pass = pass && ok;
  }
  json report(const std::string& name) const {
    return {{"suite", name}, {"checks", checks}, {"pass", pass}};
  }
};

json check_oscillator() {
  Suite s;
  OscillatorParams p;

  // bias antisymmetry and the tripod sign pattern
  double asym = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      asym = std::max(asym, std::abs(p.coupling_bias[i][j] + p.coupling_bias[j][i]));
  s.below("bias_antisymmetry", asym, 1e-15);

  // command maps hit their endpoints exactly
  s.below("amplitude_map_endpoints",
          std::abs(map_amplitude_factor(-1.0, p) - p.mu_min) +
              std::abs(map_amplitude_factor(1.0, p) - p.mu_max),
          1e-15);
  s.below("frequency_map_endpoints",
          std::abs(map_frequency_factor(-1.0, p.Omega)) +
              std::abs(map_frequency_factor(1.0, p.Omega) - p.Omega),
          1e-15);

  // amplitude settles onto the commanded set-point
  ControlInputs u;
  u.mu.fill(1.0);
  OscillatorState st = default_state(p);
  for (int k = 0; k < 400; ++k) st = step(st, u, p);
  double amp_err = 0.0;
  for (int i = 0; i < 6; ++i)
    amp_err = std::max(amp_err, std::abs(st.r[i] - map_amplitude_factor(1.0, p)));
  s.below("amplitude_convergence", amp_err, 1e-6);

  // perturbed phases re-lock into the tripod pattern
  RandomStream rng(kCheckSeed);
  st = default_state(p);
  for (int i = 0; i < 6; ++i) st.alpha[i] += rng.uniform(-0.3, 0.3);
  st.prev_deriv.reset();
  u = ControlInputs{};
  for (int k = 0; k < 1000; ++k) st = step(st, u, p);
  double spread = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      const double want = p.coupling_bias[j][i];  // alpha_i - alpha_j settles at psi_ji
      const double got = wrap_angle(st.alpha[i] - st.alpha[j] - want);
      spread = std::max(spread, std::abs(got));
    }
  s.below("tripod_lock", spread, 1e-3);

  // duty factor of the mixed phase is one half
  st = default_state(p);
  long stance_steps = 0;
  const long total = 2000;
  for (long k = 0; k < total; ++k) {
    st = step(st, u, p);
    const auto phi = mixed_phase(st);
    for (int i = 0; i < 6; ++i)
      if (std::sin(phi[i]) <= 0.0) ++stance_steps;
  }
  const double duty = static_cast<double>(stance_steps) / (6.0 * total);
  s.below("duty_factor", std::abs(duty - 0.5), 0.02);

  return s.report("oscillator");
}

json check_kinematics() {
  Suite s;
  LegGeometry g;
  RandomStream rng(kCheckSeed);

  double worst = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const double j0 = rng.uniform(-1.2, 1.2);
    const double j1 = rng.uniform(-1.2, 1.2);
    const double j2 = rng.uniform(-2.6, -0.1);  // knee-down branch
    const FootPosition p = forward_kinematics({j0, j1, j2}, g);
    const JointAngles q = inverse_kinematics(p, g);
    const FootPosition p2 = forward_kinematics(q, g);
    worst = std::max({worst, std::abs(p2.x - p.x), std::abs(p2.y - p.y), std::abs(p2.z - p.z)});
  }
  s.below("fk_ik_roundtrip", worst, 1e-9);

  bool threw = false;
  try {
    inverse_kinematics({1.0, 0.0, 0.0}, g);
  } catch (const Unreachable&) {
    threw = true;
  }
  s.boolean("unreachable_detection", threw);

  // the rhythm-to-pose map stays reachable across the morph ranges' defaults
  MorphParams m;
  long clamped_count = 0;
  for (double r = 1.0; r <= 4.0; r += 0.5)
    for (int k = 0; k < 64; ++k) {
      const double phi = 2.0 * kPi * k / 64.0;
      bool clamped = false;
      inverse_kinematics_clamped(foot_position(r, phi, m, g), g, &clamped);
      if (clamped) ++clamped_count;
    }
  s.below("pose_map_reachable", static_cast<double>(clamped_count), 0.5);

  return s.report("kinematics");
}

json check_sampler() {
  Suite s;
  RandomStream rng(kCheckSeed);
  const int n = 200000;
  std::vector<SkillVector> samples;
  samples.reserve(n);
  double mean_norm = 0.0;
  int inside_half = 0;
  for (int k = 0; k < n; ++k) {
    samples.push_back(sample_skill(rng));
    mean_norm += samples.back().norm();
    if (samples.back().norm() <= 0.5) ++inside_half;
  }
  mean_norm /= n;
  s.below("mean_norm", std::abs(mean_norm - 2.0 / 3.0), 0.005);
  s.below("half_radius_mass", std::abs(static_cast<double>(inside_half) / n - 0.25), 0.005);
  s.above("uniformity_p_value", disc_uniformity_chi_square(samples, 8, 8).p_value, 1e-3);
  return s.report("sampler");
}

json check_rewards() {
  Suite s;

  s.below("speed_clip", std::abs(speed_reward({1.0, 0.0}, {0.7, 0.0}) - 0.3), 1e-15);
  s.below("direction_identity", std::abs(direction_reward({1.0, 0.0}, {1.0, 0.0}) - 1.0), 1e-15);
  s.boolean("collision_strict",
            collision_reward(4.0, 1.0) == 0.0 && collision_reward(4.0 + 1e-9, 1.0) == -1.0);

  // weight table spot checks
  const RewardWeights stairs = task_weights(TaskKind::Stairs);
  const RewardWeights alley = task_weights(TaskKind::Alley);
  s.below("weight_table",
          std::abs(stairs.w_b - 0.5) + std::abs(alley.w_v - 2.0) + std::abs(alley.w_s - 2.0),
          1e-15);

  // the skill objective telescopes over a random trajectory
  RandomStream rng(kCheckSeed);
  std::vector<std::vector<double>> states;
  for (int k = 0; k < 1000; ++k) {
    std::vector<double> st(kReprStateSize);
    for (auto& x : st) x = rng.uniform(-1.0, 1.0);
    states.push_back(std::move(st));
  }
  const SkillVector z{0.3, -0.8};
  const double total = trajectory_objective(planar_position_phi(), states, z);
  const double want = (states.back()[0] - states.front()[0]) * z.x +
                      (states.back()[1] - states.front()[1]) * z.y;
  s.below("objective_telescopes", std::abs(total - want), 1e-12);

  s.boolean("heading_mix_gate",
            heading_mix({1.0, 0.0}, {1.0, 0.59})[1] == 0.59 &&
                heading_mix({1.0, 0.0}, {1.0, 0.61})[1] == 0.0);

  return s.report("rewards");
}

}  // namespace

json run_checks(const std::string& suite) {
  if (suite == "oscillator") return check_oscillator();
  if (suite == "kinematics") return check_kinematics();
  if (suite == "sampler") return check_sampler();
  if (suite == "rewards") return check_rewards();
  if (suite == "all") {
    Suite all;
    for (const json& r : {check_oscillator(), check_kinematics(), check_sampler(),
                          check_rewards()}) {
      for (const json& c : r["checks"]) all.checks.push_back(c);
      all.pass = all.pass && r["pass"].get<bool>();
    }
    return all.report("all");
  }
  throw ConfigError("unknown check suite '" + suite +
                    "' (oscillator|kinematics|sampler|rewards|all)", "check");
}

}  // namespace hexcpg
