#include "hexcpg/sim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "hexcpg/errors.hpp"
#include "hexcpg/leg.hpp"

namespace hexcpg {

bool stance_detect(double phi) { return std::sin(phi) <= 0.0; }

namespace {

const char* kLegSuffix[6] = {"lf", "rf", "lm", "rm", "lh", "rh"};

std::vector<std::string> build_columns() {
  std::vector<std::string> c;
  c.reserve(113);
  c.emplace_back("t");
  for (const char* q : {"r", "v", "theta", "alpha", "phi"})
    for (const char* leg : kLegSuffix) c.push_back(std::string(q) + "_" + leg);
  for (const char* q : {"foot_x", "foot_y", "foot_z"})
    for (const char* leg : kLegSuffix) c.push_back(std::string(q) + "_" + leg);
  for (const char* leg : kLegSuffix)
    for (int j = 0; j < 3; ++j) c.push_back(std::string("j") + leg + std::to_string(j));
  for (const char* leg : kLegSuffix) c.push_back(std::string("stance_") + leg);
  for (const char* b : {"body_x", "body_y", "body_z", "body_yaw", "body_vx", "body_vy",
                        "body_vz", "body_yaw_rate"})
    c.emplace_back(b);
  for (const char* q : {"mu", "omega"})
    for (const char* leg : kLegSuffix) c.push_back(std::string(q) + "_" + leg);
  for (int i = 0; i < 5; ++i) c.push_back("dmorph_" + std::to_string(i));
  for (const char* b : {"skill_x", "skill_y", "omega_m"}) c.emplace_back(b);
  for (const char* b : {"morph_l", "morph_h", "morph_gp", "morph_gc", "morph_wy"})
    c.emplace_back(b);
  for (const char* b : {"r_v", "r_d", "r_b", "r_s", "r_T", "r_total", "r_lsd"})
    c.emplace_back(b);
  return c;
}

void append_number(std::string& out, double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  out.append(buf, res.ptr);
}

Vec2 rotate2(double yaw, double x, double y) {
  const double c = std::cos(yaw), s = std::sin(yaw);
  return {c * x - s * y, s * x + c * y};
}

}  // namespace

const std::vector<std::string>& TrajectoryLog::columns() {
  static const std::vector<std::string> cols = build_columns();
  return cols;
}

std::size_t TrajectoryLog::column_index(const std::string& name) {
  static const std::unordered_map<std::string, std::size_t> index = [] {
    std::unordered_map<std::string, std::size_t> m;
    const auto& cols = columns();
    for (std::size_t i = 0; i < cols.size(); ++i) m[cols[i]] = i;
    return m;
  }();
  return index.at(name);
}

void TrajectoryLog::append(std::vector<double> row) {
  if (row.size() != columns().size())
    throw ShapeMismatch("log row has " + std::to_string(row.size()) + " values, expected " +
                        std::to_string(columns().size()));
  rows_.push_back(std::move(row));
}

double TrajectoryLog::at(std::size_t row, const std::string& column) const {
  return rows_.at(row)[column_index(column)];
}

std::string TrajectoryLog::to_csv() const {
  std::string out;
  const auto& cols = columns();
  out.reserve(64 * (rows_.size() + 1));
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ',';
    out += cols[i];
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      append_number(out, row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string TrajectoryLog::to_json() const {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["columns"] = columns();
  j["rows"] = rows_;
  return j.dump();
}

GaitDiagram extract_gait_diagram(const TrajectoryLog& log) {
  GaitDiagram g;
  const std::size_t t_col = TrajectoryLog::column_index("t");
  std::array<std::size_t, 6> phi_col{};
  for (int i = 0; i < 6; ++i)
    phi_col[i] = TrajectoryLog::column_index(std::string("phi_") + kLegSuffix[i]);
  g.time.reserve(log.rows());
  for (auto& s : g.stance) s.reserve(log.rows());
  std::array<long, 6> on_count{};
  for (std::size_t k = 0; k < log.rows(); ++k) {
    const auto& row = log.row(k);
    g.time.push_back(row[t_col]);
    for (int i = 0; i < 6; ++i) {
      const bool on = stance_detect(row[phi_col[i]]);
      // count entries into stance (including a stance start of the log)
      if (on && (k == 0 || !g.stance[i].back())) ++g.stride_count[i];
      g.stance[i].push_back(on ? 1 : 0);
      if (on) ++on_count[i];
    }
  }
  if (log.rows() > 0)
    for (int i = 0; i < 6; ++i)
      g.stance_fraction[i] = static_cast<double>(on_count[i]) / static_cast<double>(log.rows());
  return g;
}

std::string GaitDiagram::to_csv() const {
  std::string out = "t";
  for (const char* leg : kLegSuffix) out += std::string(",stance_") + leg;
  out += '\n';
  for (std::size_t k = 0; k < time.size(); ++k) {
    append_number(out, time[k]);
    for (int i = 0; i < 6; ++i) {
      out += ',';
      out += stance[i][k] ? '1' : '0';
    }
    out += '\n';
  }
  return out;
}

std::string Summary::to_json() const {
  nlohmann::json j;
  j["schema_version"] = schema_version;
  j["seed"] = seed;
  j["variant"] = variant;
  j["duration"] = duration;
  j["cpg_steps"] = cpg_steps;
  j["mid_evals"] = mid_evals;
  j["high_evals"] = high_evals;
  j["mean_velocity_x"] = mean_velocity_x;
  j["mean_speed"] = mean_speed;
  j["net_displacement"] = {net_displacement[0], net_displacement[1]};
  j["final_yaw"] = final_yaw;
  j["stance_fraction"] = stance_fraction;
  j["total_reward"] = total_reward;
  j["return_discounted"] = return_discounted;
  j["total_lsd_reward"] = total_lsd_reward;
  j["success"] = success;
  j["time_to_goal"] = time_to_goal;
  j["ik_clamp_count"] = ik_clamp_count;
  nlohmann::json legs = nlohmann::json::array();
  for (int leg : faulted_legs) legs.push_back(kLegNames[leg]);
  j["faulted_legs"] = legs;
  return j.dump(2);
}

Simulation::Simulation(const RunConfig& cfg) : cfg_(cfg), terrain_(cfg.terrain) {
  cfg_.scheduler.cpg_dt = cfg_.oscillator.dt;
  cfg_.validate();

  // Policies draw from streams split off the run seed, so the high/mid
  // draws stay decoupled from any other randomness.
  RandomStream root(cfg_.sim.seed);
  const bool novpath = cfg_.scheduler.variant == StackVariant::NoVpath;
  const int high_out = novpath ? 17 : 7;
  auto ensure_resolved = [](PolicyBinding& b) {
    if (b.spec.kind != PolicySpec::Kind::FeedForwardNet) b.resolve("");
  };
  ensure_resolved(cfg_.high_policy);
  ensure_resolved(cfg_.mid_policy);
  std::unique_ptr<Policy> high =
      Policy::make(cfg_.high_policy.spec, high_out, root.split(1), cfg_.links);
  std::unique_ptr<Policy> mid;
  if (!novpath) mid = Policy::make(cfg_.mid_policy.spec, 12, root.split(2), cfg_.links);

  stack_ = std::make_unique<ControllerStack>(cfg_.scheduler, cfg_.oscillator, cfg_.morph,
                                             cfg_.morph_ranges, std::move(high), std::move(mid),
                                             cfg_.initial_skill);
  osc_ = default_state(stack_->oscillator_params());

  body_.position = {0.0, 0.0};
  body_.yaw = 0.0;
  body_.z = terrain_.height_at(0.0, 0.0) + stack_->morph().h;

  const auto phi = mixed_phase(osc_);
  for (int i = 0; i < kNumLegs; ++i) {
    const LegGeometry g = cfg_.leg(i);
    const FootPosition target = foot_position(osc_.r[i], phi[i], stack_->morph(), g);
    bool clamped = false;
    cmd_joints_[i] = inverse_kinematics_clamped(target, g, &clamped);
    if (clamped) ++ik_clamp_count_;
    joints_[i] = cmd_joints_[i];
    feet_[i] = forward_kinematics(joints_[i], g);
    prev_feet_[i] = feet_[i];
    stance_[i] = stance_detect(phi[i]);
  }
  prev_repr_ = repr_state();

  for (const FaultSpec& f : cfg_.faults) inject_fault(f);
}

Simulation::~Simulation() = default;

void Simulation::inject_fault(const FaultSpec& fault) {
  if (fault.leg < 0 || fault.leg >= kNumLegs)
    throw ConfigError("fault leg out of range", "faults");
  faulted_[fault.leg] = true;
  frozen_value_[fault.leg] = fault.frozen_value;
  faults_.push_back(fault);
  const double v = fault.frozen_value;
  joints_[fault.leg] = {v, v, v};
  feet_[fault.leg] = forward_kinematics(joints_[fault.leg], cfg_.leg(fault.leg));
  prev_feet_[fault.leg] = feet_[fault.leg];
  stance_[fault.leg] = false;
}

Proprioception Simulation::make_proprioception() const {
  Proprioception p;
  for (int i = 0; i < kNumLegs; ++i) {
    const JointAngles& q =
        (faulted_[i] && !fault_feedback_frozen(i)) ? cmd_joints_[i] : joints_[i];
    p.joint_angles[3 * i + 0] = q.j0;
    p.joint_angles[3 * i + 1] = q.j1;
    p.joint_angles[3 * i + 2] = q.j2;
  }
  const double half = 0.5 * body_.yaw;
  p.orientation = {std::cos(half), 0.0, 0.0, std::sin(half)};
  p.angular_velocity = {0.0, 0.0, body_.yaw_rate};
  const double dt = cfg_.oscillator.dt;
  const Vec2 a_world{(body_.velocity[0] - prev_velocity_[0]) / dt,
                     (body_.velocity[1] - prev_velocity_[1]) / dt};
  const Vec2 a_body = rotate2(-body_.yaw, a_world[0], a_world[1]);
  p.linear_acceleration = {a_body[0], a_body[1], 0.0};
  p.morph = stack_->morph();
  p.omega_m = stack_->omega_m();
  return p;
}

bool Simulation::fault_feedback_frozen(int leg) const {
  for (const FaultSpec& f : faults_)
    if (f.leg == leg) return f.feedback_frozen;
  return true;
}

Vec2 Simulation::safe_heading(const Vec2& goal, Vec2& last) const {
  const Vec2 d{goal[0] - body_.position[0], goal[1] - body_.position[1]};
  if (std::hypot(d[0], d[1]) < 1e-9) return last;
  last = desired_heading(goal, body_.position);
  return last;
}

std::vector<double> Simulation::repr_state() const {
  std::vector<double> s;
  s.reserve(kReprStateSize);
  s.push_back(body_.position[0]);
  s.push_back(body_.position[1]);
  s.push_back(body_.z);
  s.push_back(0.0);  // roll
  s.push_back(0.0);  // pitch
  s.push_back(body_.yaw);
  s.push_back(body_.velocity[0]);
  s.push_back(body_.velocity[1]);
  s.push_back(body_.v_z);
  s.push_back(0.0);
  s.push_back(0.0);
  s.push_back(body_.yaw_rate);
  static const OscillatorDerivatives kZero{};
  const OscillatorDerivatives& d = osc_.prev_deriv ? *osc_.prev_deriv : kZero;
  for (int i = 0; i < 6; ++i) s.push_back(osc_.r[i]);
  for (int i = 0; i < 6; ++i) s.push_back(d.r[i]);
  for (int i = 0; i < 6; ++i) s.push_back(osc_.theta[i]);
  for (int i = 0; i < 6; ++i) s.push_back(d.theta[i]);
  for (int i = 0; i < 6; ++i) s.push_back(osc_.alpha[i]);
  for (int i = 0; i < 6; ++i) s.push_back(d.alpha[i]);
  return s;
}

void Simulation::step() {
  const double dt = cfg_.oscillator.dt;
  const long k = steps_done_;

  // 1. sense, decide
  const Proprioception proprio = make_proprioception();
  const long high_every =
      static_cast<long>(cfg_.scheduler.mid_period) * cfg_.scheduler.high_period;
  std::vector<double> grid;
  Vec2 heading_goal = last_heading_goal_;
  Vec2 heading_final = last_heading_final_;
  if (k % high_every == 0) {
    grid = terrain_.sample_grid(body_.position, body_.yaw);
    heading_goal = safe_heading(cfg_.task.goal, last_heading_goal_);
    heading_final = safe_heading(cfg_.task.final_goal, last_heading_final_);
  }
  const ControllerStack::TickResult tick =
      stack_->tick(k, proprio, grid, heading_goal, heading_final);

  // 2. advance the rhythm and place the feet
  osc_ = hexcpg::step(osc_, tick.inputs, stack_->oscillator_params());
  const auto phi = mixed_phase(osc_);
  const MorphParams& morph = stack_->morph();
  for (int i = 0; i < kNumLegs; ++i) {
    const LegGeometry g = cfg_.leg(i);
    const FootPosition target = foot_position(osc_.r[i], phi[i], morph, g);
    bool clamped = false;
    cmd_joints_[i] = inverse_kinematics_clamped(target, g, &clamped);
    if (clamped) ++ik_clamp_count_;
    if (faulted_[i]) {
      const double v = frozen_value_[i];
      joints_[i] = {v, v, v};
    } else {
      joints_[i] = cmd_joints_[i];
    }
    prev_feet_[i] = feet_[i];
    feet_[i] = forward_kinematics(joints_[i], g);
    stance_[i] = stance_detect(phi[i]) && !faulted_[i];
  }

  // 3. body motion from the stance feet (kinematic ground truth: a foot in
  // stance is pinned to the ground, so the body moves opposite to it)
  prev_velocity_ = body_.velocity;
  Vec2 v_body{0.0, 0.0};
  double v_left = 0.0, v_right = 0.0;
  int n_stance = 0, n_left = 0, n_right = 0;
  for (int i = 0; i < kNumLegs; ++i) {
    if (!stance_[i]) continue;
    const MountPose& m = cfg_.mounts[i];
    const double dx = (feet_[i].x - prev_feet_[i].x) / dt;
    const double dy = kLegSide[i] * (feet_[i].y - prev_feet_[i].y) / dt;
    const Vec2 vb = rotate2(m.yaw, dx, dy);
    v_body[0] -= vb[0];
    v_body[1] -= vb[1];
    ++n_stance;
    if (kLegSide[i] > 0) {
      v_left += -vb[0];
      ++n_left;
    } else {
      v_right += -vb[0];
      ++n_right;
    }
  }
  if (n_stance > 0) {
    v_body[0] /= n_stance;
    v_body[1] /= n_stance;
  }
  if (n_left > 0) v_left /= n_left;
  if (n_right > 0) v_right /= n_right;

  double track = 0.0;
  for (int i = 0; i < kNumLegs; ++i)
    track += std::abs(cfg_.mounts[i].y) + cfg_.links.L() * morph.w_y;
  track = 2.0 * track / kNumLegs;
  body_.yaw_rate = n_stance > 0 ? cfg_.sim.yaw_gain * (v_right - v_left) / track : 0.0;

  body_.velocity = rotate2(body_.yaw, v_body[0], v_body[1]);
  body_.yaw += body_.yaw_rate * dt;
  body_.position[0] += body_.velocity[0] * dt;
  body_.position[1] += body_.velocity[1] * dt;
  const double new_z = terrain_.height_at(body_.position[0], body_.position[1]) + morph.h;
  body_.v_z = (new_z - body_.z) / dt;
  body_.z = new_z;

  // 4. contact force proxies
  const int weight_share = std::max(n_stance, 1);
  for (int i = 0; i < kNumLegs; ++i) {
    const MountPose& m = cfg_.mounts[i];
    const Vec2 off = rotate2(m.yaw, feet_[i].x, kLegSide[i] * feet_[i].y);
    const Vec2 pb{m.x + off[0], m.y + off[1]};
    const Vec2 pw_rel = rotate2(body_.yaw, pb[0], pb[1]);
    const double foot_wx = body_.position[0] + pw_rel[0];
    const double foot_wy = body_.position[1] + pw_rel[1];
    const double foot_wz = body_.z + feet_[i].z;
    overlap_[i] = terrain_.height_at(foot_wx, foot_wy) - foot_wz > cfg_.sim.overlap_margin;
    const double speed =
        std::hypot(feet_[i].x - prev_feet_[i].x, feet_[i].y - prev_feet_[i].y) / dt;
    forces_[i].f_xy = overlap_[i] ? cfg_.sim.contact_k * speed : 0.0;
    forces_[i].f_z = stance_[i] ? cfg_.sim.body_mass * cfg_.sim.gravity / weight_share : 0.0;
  }

  // 5. rewards
  const double t = static_cast<double>(k + 1) * dt;
  const Vec2 d = safe_heading(cfg_.task.goal, last_heading_goal_);
  const Vec2 d_c{std::cos(body_.yaw), std::sin(body_.yaw)};
  SubRewards sub;
  sub.r_v = speed_reward(d, body_.velocity, cfg_.task.v_max);
  sub.r_d = direction_reward(d, d_c);
  sub.r_b = balance_reward(body_.v_z);
  for (int i = 0; i < kNumLegs; ++i)
    sub.r_s += collision_reward(forces_[i].f_xy, forces_[i].f_z);
  sub.r_T = time_reward();
  const double reward = task_reward(sub, cfg_.task.kind, cfg_.task.difficulty);
  total_reward_ += reward;
  reward_series_.push_back(reward);

  const std::vector<double> repr = repr_state();
  const double r_lsd =
      lsd_step_reward(planar_position_phi(), prev_repr_, repr, stack_->skill(), body_.v_z);
  total_lsd_ += r_lsd;
  prev_repr_ = repr;

  if (cfg_.task.enabled && !success_) {
    const double dist = std::hypot(cfg_.task.goal[0] - body_.position[0],
                                   cfg_.task.goal[1] - body_.position[1]);
    if (dist <= cfg_.task.goal_radius) {
      success_ = true;
      time_to_goal_ = t;
    }
  }

  sum_vx_ += body_.velocity[0];
  sum_speed_ += std::hypot(body_.velocity[0], body_.velocity[1]);

  // 6. log
  std::vector<double> row;
  row.reserve(TrajectoryLog::columns().size());
  row.push_back(t);
  for (int i = 0; i < 6; ++i) row.push_back(osc_.r[i]);
  for (int i = 0; i < 6; ++i) row.push_back(osc_.v[i]);
  for (int i = 0; i < 6; ++i) row.push_back(osc_.theta[i]);
  for (int i = 0; i < 6; ++i) row.push_back(osc_.alpha[i]);
  for (int i = 0; i < 6; ++i) row.push_back(phi[i]);
  for (int i = 0; i < 6; ++i) row.push_back(feet_[i].x);
  for (int i = 0; i < 6; ++i) row.push_back(feet_[i].y);
  for (int i = 0; i < 6; ++i) row.push_back(feet_[i].z);
  for (int i = 0; i < 6; ++i) {
    row.push_back(joints_[i].j0);
    row.push_back(joints_[i].j1);
    row.push_back(joints_[i].j2);
  }
  for (int i = 0; i < 6; ++i) row.push_back(stance_[i] ? 1.0 : 0.0);
  row.push_back(body_.position[0]);
  row.push_back(body_.position[1]);
  row.push_back(body_.z);
  row.push_back(body_.yaw);
  row.push_back(body_.velocity[0]);
  row.push_back(body_.velocity[1]);
  row.push_back(body_.v_z);
  row.push_back(body_.yaw_rate);
  for (int i = 0; i < 6; ++i) row.push_back(tick.inputs.mu[i]);
  for (int i = 0; i < 6; ++i) row.push_back(tick.inputs.omega[i]);
  for (int i = 0; i < 5; ++i) row.push_back(stack_->last_high().delta_morph[i]);
  row.push_back(stack_->skill().x);
  row.push_back(stack_->skill().y);
  row.push_back(stack_->omega_m());
  const auto ma = morph.as_array();
  for (int i = 0; i < 5; ++i) row.push_back(ma[i]);
  row.push_back(sub.r_v);
  row.push_back(sub.r_d);
  row.push_back(sub.r_b);
  row.push_back(sub.r_s);
  row.push_back(sub.r_T);
  row.push_back(reward);
  row.push_back(r_lsd);
  log_.append(std::move(row));

  ++steps_done_;
}

void Simulation::run(long steps) {
  for (long i = 0; i < steps; ++i) step();
}

Summary Simulation::summary() const {
  Summary s;
  s.seed = cfg_.sim.seed;
  s.variant = variant_name(cfg_.scheduler.variant);
  s.duration = static_cast<double>(steps_done_) * cfg_.oscillator.dt;
  s.cpg_steps = steps_done_;
  s.mid_evals = stack_->mid_evals();
  s.high_evals = stack_->high_evals();
  if (steps_done_ > 0) {
    s.mean_velocity_x = sum_vx_ / static_cast<double>(steps_done_);
    s.mean_speed = sum_speed_ / static_cast<double>(steps_done_);
  }
  s.net_displacement = body_.position;
  s.final_yaw = body_.yaw;
  std::array<std::size_t, 6> phi_col{};
  for (int i = 0; i < 6; ++i)
    phi_col[i] = TrajectoryLog::column_index(std::string("phi_") + kLegSuffix[i]);
  std::array<long, 6> on{};
  for (std::size_t kk = 0; kk < log_.rows(); ++kk)
    for (int i = 0; i < 6; ++i)
      if (stance_detect(log_.row(kk)[phi_col[i]])) ++on[i];
  if (log_.rows() > 0)
    for (int i = 0; i < 6; ++i)
      s.stance_fraction[i] = static_cast<double>(on[i]) / static_cast<double>(log_.rows());
  s.total_reward = total_reward_;
  s.return_discounted = discounted_return(reward_series_, cfg_.task.gamma);
  s.total_lsd_reward = total_lsd_;
  s.success = success_;
  s.time_to_goal = time_to_goal_;
  s.ik_clamp_count = ik_clamp_count_;
  for (int i = 0; i < kNumLegs; ++i)
    if (faulted_[i]) s.faulted_legs.push_back(i);
  return s;
}

RolloutResult rollout(const RunConfig& cfg) {
  Simulation sim(cfg);
  const long steps = std::lround(cfg.sim.duration / cfg.oscillator.dt);
  sim.run(steps);
  return {sim.log(), sim.summary()};
}

}  // namespace hexcpg
