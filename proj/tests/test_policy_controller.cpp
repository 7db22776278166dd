#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "hexcpg/controller.hpp"
#include "hexcpg/errors.hpp"
#include "hexcpg/policy.hpp"

using namespace hexcpg;

namespace {

const std::string kDataDir = TEST_DATA_DIR;

// Writes `text` to a throwaway file and returns its path.
std::string temp_file(const std::string& name, const std::string& text) {
  const std::string path = "/tmp/hexcpg_test_" + name;
  std::ofstream f(path, std::ios::trunc);
  f << text;
  return path;
}

Proprioception wiggling_proprio(int tick, int frozen_leg) {
  Proprioception p;
  for (int leg = 0; leg < 6; ++leg) {
    // Legs alternate between clearly-raised and clearly-lowered feet; a tiny
    // per-tick wiggle keeps the healthy legs from looking frozen.
    const double base = (leg % 2 == 0) ? kPi / 2.0 : -kPi / 2.0;
    p.joint_angles[3 * leg + 0] = 0.0;
    p.joint_angles[3 * leg + 1] = base + tick * 1e-6;
    p.joint_angles[3 * leg + 2] = 0.0;
  }
  p.joint_angles[3 * frozen_leg + 0] = 0.1;
  p.joint_angles[3 * frozen_leg + 1] = 0.2;
  p.joint_angles[3 * frozen_leg + 2] = -0.3;
  return p;
}

}  // namespace

TEST_CASE("network forward pass matches the frozen fixtures") {
  const PolicySpec spec = PolicySpec::load_network(kDataDir + "/policy_net.json");
  CHECK(spec.input_size == 3);
  CHECK(spec.squash_tanh);
  CHECK(spec.output_size == 2);

  std::ifstream f(kDataDir + "/policy_fixtures.json");
  REQUIRE(f.good());
  const nlohmann::json cases = nlohmann::json::parse(f);
  REQUIRE(cases.size() >= 3);
  for (const auto& c : cases) {
    const std::vector<double> in = c["input"].get<std::vector<double>>();
    const std::vector<double> want = c["want"].get<std::vector<double>>();
    const std::vector<double> got = policy_forward(spec, in);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) CHECK(std::abs(got[i] - want[i]) < 1e-12);
  }
}

TEST_CASE("network evaluation rejects a wrong observation length") {
  const PolicySpec spec = PolicySpec::load_network(kDataDir + "/policy_net.json");
  const std::vector<double> bad(4, 0.0);
  CHECK_THROWS_AS((void)policy_forward(spec, bad), ShapeMismatch);
}

TEST_CASE("malformed network files raise descriptive config errors") {
  SUBCASE("missing file") {
    CHECK_THROWS_AS((void)PolicySpec::load_network("/nonexistent/net.json"), ConfigError);
  }
  SUBCASE("invalid json") {
    const std::string p = temp_file("bad.json", "{ not json");
    CHECK_THROWS_AS((void)PolicySpec::load_network(p), ConfigError);
  }
  SUBCASE("wrong schema version") {
    const std::string p = temp_file("schema.json", R"({"schema_version": 2, "layers": []})");
    try {
      (void)PolicySpec::load_network(p);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.path == "policy.schema_version");
    }
  }
  SUBCASE("layers do not chain") {
    const std::string p = temp_file("chain.json", R"({
      "schema_version": 1, "input_size": 3,
      "layers": [
        {"rows": 2, "cols": 3, "activation": "tanh",
         "weights": [0,0,0,0,0,0], "bias": [0,0]},
        {"rows": 1, "cols": 5, "activation": "identity",
         "weights": [0,0,0,0,0], "bias": [0]}
      ]})");
    try {
      (void)PolicySpec::load_network(p);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.path == "policy.layers[1]");
    }
  }
  SUBCASE("weight count mismatch") {
    const std::string p = temp_file("weights.json", R"({
      "schema_version": 1, "input_size": 2,
      "layers": [{"rows": 2, "cols": 2, "activation": "relu",
                  "weights": [1,2,3], "bias": [0,0]}]})");
    try {
      (void)PolicySpec::load_network(p);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.path == "policy.layers[0].weights");
    }
  }
  SUBCASE("unknown activation") {
    const std::string p = temp_file("act.json", R"({
      "schema_version": 1, "input_size": 1,
      "layers": [{"rows": 1, "cols": 1, "activation": "softmax",
                  "weights": [1], "bias": [0]}]})");
    CHECK_THROWS_AS((void)PolicySpec::load_network(p), ConfigError);
  }
}

TEST_CASE("constant policy returns its values and checks the role size") {
  PolicySpec spec;
  spec.kind = PolicySpec::Kind::Constant;
  spec.constants = {0.1, -0.2, 0.3, 0.0, 0.0, 0.5, -0.5};
  auto p = Policy::make(spec, 7, RandomStream(1), LegGeometry{});
  const std::vector<double> out = p->act({});
  CHECK(out == spec.constants);
  CHECK_THROWS_AS((void)Policy::make(spec, 12, RandomStream(1), LegGeometry{}), ConfigError);
}

TEST_CASE("random policy is reproducible from its stream and stays in [-1, 1]") {
  PolicySpec spec;
  spec.kind = PolicySpec::Kind::Random;
  spec.output_size = 12;
  auto a = Policy::make(spec, 12, RandomStream(99), LegGeometry{});
  auto b = Policy::make(spec, 12, RandomStream(99), LegGeometry{});
  for (int k = 0; k < 10; ++k) {
    const std::vector<double> va = a->act({});
    const std::vector<double> vb = b->act({});
    CHECK(va == vb);
    CHECK(va.size() == 12);
    for (double v : va) {
      CHECK(v >= -1.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("scripted policies: zero and hold_phase") {
  PolicySpec zero;
  zero.script_name = "zero";
  auto pz = Policy::make(zero, 7, RandomStream(0), LegGeometry{});
  CHECK(pz->act({}) == std::vector<double>(7, 0.0));

  PolicySpec hold;
  hold.script_name = "hold_phase";
  auto ph = Policy::make(hold, 12, RandomStream(0), LegGeometry{});
  const std::vector<double> out = ph->act({});
  REQUIRE(out.size() == 12);
  for (int i = 0; i < 6; ++i) CHECK(out[i] == 0.0);
  for (int i = 6; i < 12; ++i) CHECK(out[i] == -1.0);

  CHECK(is_known_script("hold_phase", 12));
  CHECK_FALSE(is_known_script("hold_phase", 7));
  CHECK(is_known_script("zero", 17));
  CHECK_FALSE(is_known_script("warp_drive", 12));
  CHECK_THROWS_AS((void)Policy::make(hold, 7, RandomStream(0), LegGeometry{}), ConfigError);
}

TEST_CASE("fault compensation latches after five frozen ticks and duty-shifts") {
  PolicySpec spec;
  spec.script_name = "fault_compensation";
  const LegGeometry g{};  // feet at z = +/-0.14 for the wiggling legs
  auto p = Policy::make(spec, 12, RandomStream(0), g);
  const int frozen_leg = 3;  // RM

  // No proprioception at all: behaves like hold_phase.
  std::vector<double> out = p->act({});
  for (int i = 0; i < 6; ++i) CHECK(out[i] == 0.0);
  for (int i = 6; i < 12; ++i) CHECK(out[i] == -1.0);

  // Five identical repeats are needed before the latch: the first six
  // proprio-carrying calls (baseline + 5 repeats) still hold phase.
  std::vector<Proprioception> history;
  for (int tick = 0; tick < 6; ++tick) history.push_back(wiggling_proprio(tick, frozen_leg));
  for (int tick = 0; tick < 6; ++tick) {
    PolicyContext ctx;
    ctx.proprio = &history[tick];
    out = p->act(ctx);
    if (tick < 5)
      for (int i = 6; i < 12; ++i) CHECK(out[i] == -1.0);
  }

  // The sixth call latched. Healthy legs now follow their foot height:
  // raised feet (even legs, z = +0.14) swing faster, lowered feet slow down.
  REQUIRE(out.size() == 12);
  for (int i = 0; i < 6; ++i) CHECK(out[i] == 0.0);  // mu untouched
  for (int leg = 0; leg < 6; ++leg) {
    if (leg == frozen_leg) {
      CHECK(out[6 + leg] == -1.0);
    } else {
      CHECK(out[6 + leg] == ((leg % 2 == 0) ? 1.0 : -1.0));
    }
  }

  // Latch is sticky: further ticks keep compensating.
  Proprioception later = wiggling_proprio(17, frozen_leg);
  PolicyContext ctx;
  ctx.proprio = &later;
  out = p->act(ctx);
  CHECK(out[6 + frozen_leg] == -1.0);
  CHECK(out[6 + 0] == 1.0);
  CHECK(out[6 + 1] == -1.0);
}

TEST_CASE("observation layouts") {
  Proprioception p;
  for (int i = 0; i < 18; ++i) p.joint_angles[i] = 0.01 * i;
  p.orientation = {0.9, 0.1, 0.2, 0.3};
  p.angular_velocity = {1.0, 2.0, 3.0};
  p.linear_acceleration = {-1.0, -2.0, -3.0};
  p.morph = MorphParams{0.04, 0.06, 0.035, 0.05, 1.2};
  p.omega_m = 7.5;

  const std::vector<double> mid = assemble_mid_observation(p, {0.25, -0.5});
  REQUIRE(mid.size() == kMidObservationSize);
  CHECK(mid[0] == 0.0);
  CHECK(mid[17] == doctest::Approx(0.17).epsilon(1e-15));
  CHECK(mid[18] == 0.9);
  CHECK(mid[22] == 1.0);
  CHECK(mid[25] == -1.0);
  CHECK(mid[28] == 0.04);
  CHECK(mid[32] == 1.2);
  CHECK(mid[33] == 7.5);
  CHECK(mid[34] == 0.25);
  CHECK(mid[35] == -0.5);

  const std::vector<double> grid = {0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  const std::vector<double> high = assemble_high_observation(p, grid, {1.0, 0.0}, {0.0, -1.0});
  REQUIRE(high.size() == static_cast<std::size_t>(kProprioSize) + grid.size() + 4);
  CHECK(high[33] == 7.5);          // omega_m ends the proprio block
  CHECK(high[34] == 0.5);          // grid follows
  CHECK(high[39] == 1.0);
  CHECK(high[40] == 1.0);          // heading to the next goal
  CHECK(high[41] == 0.0);
  CHECK(high[42] == 0.0);          // heading to the final goal
  CHECK(high[43] == -1.0);
}

TEST_CASE("dual-pathway routing clamps the skill and maps omega_m") {
  const MorphParams morph;
  const MorphRanges ranges;
  const double Omega = 8.0 * kPi;

  HighLevelAction a;
  a.skill = {3.0, 4.0};
  RoutedHigh r = route_dual_pathway(a, morph, ranges, Omega, StackVariant::Full);
  CHECK(r.skill.x == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(r.skill.y == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(r.omega_m == doctest::Approx(Omega).epsilon(1e-12));

  a.skill = {0.3, -0.4};
  r = route_dual_pathway(a, morph, ranges, Omega, StackVariant::Full);
  CHECK(r.skill.x == 0.3);
  CHECK(r.omega_m == doctest::Approx((0.2 + 0.8 * 0.5) * Omega).epsilon(1e-12));

  a.delta_morph = {1.0, -1.0, 0.0, 0.5, 0.0};
  r = route_dual_pathway(a, morph, ranges, Omega, StackVariant::Full);
  CHECK(r.morph.l == doctest::Approx(morph.l + 0.02 * 0.24).epsilon(1e-12));
  CHECK(r.morph.h == doctest::Approx(morph.h - 0.02 * 0.06).epsilon(1e-12));
  CHECK(r.morph.g_p == morph.g_p);
  CHECK(r.morph.g_c == doctest::Approx(morph.g_c + 0.5 * 0.02 * 0.04).epsilon(1e-12));

  r = route_dual_pathway(a, morph, ranges, Omega, StackVariant::NoLpath);
  CHECK(r.morph.l == morph.l);  // morph frozen, skill still routed
  CHECK(r.morph.h == morph.h);
  CHECK(r.omega_m == doctest::Approx((0.2 + 0.8 * 0.5) * Omega).epsilon(1e-12));
}

TEST_CASE("controller stack fires the levels on schedule and holds between") {
  SchedulerConfig sched;  // 12 * 10 = 120 steps per high evaluation
  PolicySpec rand_spec;
  rand_spec.kind = PolicySpec::Kind::Random;
  auto high = Policy::make(PolicySpec{}, 7, RandomStream(1), LegGeometry{});
  auto mid = Policy::make(rand_spec, 12, RandomStream(2), LegGeometry{});
  ControllerStack stack(sched, OscillatorParams{}, MorphParams{}, MorphRanges{},
                        std::move(high), std::move(mid));

  Proprioception p;
  std::array<double, 6> held_mu{};
  for (long k = 0; k < 240; ++k) {
    const auto res = stack.tick(k, p, {}, {1.0, 0.0}, {1.0, 0.0});
    CHECK(res.high_evaluated == (k % 120 == 0));
    CHECK(res.mid_evaluated == (k % 12 == 0));
    if (res.mid_evaluated)
      held_mu = res.inputs.mu;
    else
      CHECK(res.inputs.mu == held_mu);  // zero-order hold
  }
  CHECK(stack.high_evals() == 2);
  CHECK(stack.mid_evals() == 20);
}

TEST_CASE("controller stack clamps the initial skill and seeds omega_m") {
  auto high = Policy::make(PolicySpec{}, 7, RandomStream(1), LegGeometry{});
  auto mid = Policy::make(PolicySpec{}, 12, RandomStream(2), LegGeometry{});
  ControllerStack stack(SchedulerConfig{}, OscillatorParams{}, MorphParams{}, MorphRanges{},
                        std::move(high), std::move(mid), SkillVector{3.0, 4.0});
  CHECK(stack.skill().x == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(stack.skill().y == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(stack.omega_m() == doctest::Approx(8.0 * kPi).epsilon(1e-12));
}

TEST_CASE("noalpha variant moves the coupling onto theta") {
  SchedulerConfig sched;
  sched.variant = StackVariant::NoAlpha;
  auto high = Policy::make(PolicySpec{}, 7, RandomStream(1), LegGeometry{});
  auto mid = Policy::make(PolicySpec{}, 12, RandomStream(2), LegGeometry{});
  ControllerStack stack(sched, OscillatorParams{}, MorphParams{}, MorphRanges{},
                        std::move(high), std::move(mid));
  CHECK(stack.oscillator_params().phase_mode == PhaseMode::CoupledTheta);
}

TEST_CASE("novpath routes a 17-dim high action and never calls a mid policy") {
  SchedulerConfig sched;
  sched.variant = StackVariant::NoVpath;
  PolicySpec spec;
  spec.kind = PolicySpec::Kind::Constant;
  spec.constants.assign(17, 0.0);
  for (int i = 0; i < 6; ++i) spec.constants[i] = 0.5;          // mu
  for (int i = 6; i < 12; ++i) spec.constants[i] = -0.25;       // omega
  spec.constants[12] = 1.0;                                     // delta l
  auto high = Policy::make(spec, 17, RandomStream(1), LegGeometry{});
  ControllerStack stack(sched, OscillatorParams{}, MorphParams{}, MorphRanges{},
                        std::move(high), nullptr, SkillVector{0.5, 0.0});

  Proprioception p;
  const auto res = stack.tick(0, p, {}, {1.0, 0.0}, {1.0, 0.0});
  CHECK(res.high_evaluated);
  CHECK_FALSE(res.mid_evaluated);
  for (int i = 0; i < 6; ++i) {
    CHECK(res.inputs.mu[i] == 0.5);
    CHECK(res.inputs.omega[i] == -0.25);
  }
  // omega_m keeps its initial-skill value; the morph delta is applied.
  CHECK(res.inputs.omega_m == doctest::Approx((0.2 + 0.8 * 0.5) * 8.0 * kPi).epsilon(1e-12));
  CHECK(stack.morph().l == doctest::Approx(0.03 + 0.02 * 0.24).epsilon(1e-12));
  for (long k = 1; k < 360; ++k) (void)stack.tick(k, p, {}, {1.0, 0.0}, {1.0, 0.0});
  CHECK(stack.mid_evals() == 0);
  CHECK(stack.high_evals() == 3);
}

TEST_CASE("novpath rejects a 7-dim high action at evaluation time") {
  SchedulerConfig sched;
  sched.variant = StackVariant::NoVpath;
  auto high = Policy::make(PolicySpec{}, 7, RandomStream(1), LegGeometry{});
  ControllerStack stack(sched, OscillatorParams{}, MorphParams{}, MorphRanges{},
                        std::move(high), nullptr);
  Proprioception p;
  CHECK_THROWS_AS((void)stack.tick(0, p, {}, {1.0, 0.0}, {1.0, 0.0}), ShapeMismatch);
}

TEST_CASE("variant names round-trip and unknown names throw") {
  for (StackVariant v : {StackVariant::Full, StackVariant::NoAlpha, StackVariant::NoVpath,
                         StackVariant::NoLpath})
    CHECK(parse_variant(variant_name(v)) == v);
  CHECK_THROWS_AS((void)parse_variant("quadruped"), ConfigError);
}

TEST_CASE("scheduler validation") {
  SchedulerConfig s;
  s.cpg_dt = 0.0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = SchedulerConfig{};
  s.mid_period = 0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = SchedulerConfig{};
  s.high_period = -2;
  CHECK_THROWS_AS(s.validate(), ConfigError);
}
