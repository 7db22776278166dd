#include "hexcpg/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "hexcpg/errors.hpp"
#include "hexcpg/leg.hpp"

namespace hexcpg {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what, const std::string& path) {
  throw ConfigError(what, path);
}

double need_num(const json& v, const std::string& path) {
  if (!v.is_number()) bad("expected a number", path);
  return v.get<double>();
}

long need_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) bad("expected an integer", path);
  return v.get<long>();
}

bool need_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) bad("expected a boolean", path);
  return v.get<bool>();
}

std::string need_str(const json& v, const std::string& path) {
  if (!v.is_string()) bad("expected a string", path);
  return v.get<std::string>();
}

Vec2 need_vec2(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) bad("expected [x, y]", path);
  return {need_num(v[0], path + "[0]"), need_num(v[1], path + "[1]")};
}

std::array<double, 6> need_arr6(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 6) bad("expected 6 numbers", path);
  std::array<double, 6> out;
  for (int i = 0; i < 6; ++i) out[i] = need_num(v[i], path + "[" + std::to_string(i) + "]");
  return out;
}

Mat6 need_mat6(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 6) bad("expected a 6x6 matrix", path);
  Mat6 m;
  for (int i = 0; i < 6; ++i) m[i] = need_arr6(v[i], path + "[" + std::to_string(i) + "]");
  return m;
}

// Strict section reader: every key must be consumed by one of the handlers.
struct Section {
  const json& obj;
  std::string path;
  std::set<std::string> seen;

  Section(const json& j, std::string p) : obj(j), path(std::move(p)) {
    if (!obj.is_object()) bad("expected a table/object", path);
  }
  bool has(const std::string& key) {
    seen.insert(key);
    return obj.contains(key);
  }
  const json& operator[](const std::string& key) { return obj.at(key); }
  void finish() {
    for (auto it = obj.begin(); it != obj.end(); ++it)
      if (!seen.count(it.key())) bad("unknown key", path + "." + it.key());
  }
};

}  // namespace

FaultSpec parse_fault(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    bad("fault must be LEG:VALUE (e.g. LM:0.3)", "faults");
  FaultSpec f;
  f.leg = parse_leg(text.substr(0, colon));
  if (f.leg < 0) bad("unknown leg '" + text.substr(0, colon) + "'", "faults");
  std::string rest = text.substr(colon + 1);
  const auto colon2 = rest.find(':');
  std::string value = rest.substr(0, colon2 == std::string::npos ? rest.size() : colon2);
  try {
    std::size_t used = 0;
    f.frozen_value = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
  } catch (const std::exception&) {
    bad("invalid fault value '" + value + "'", "faults");
  }
  if (colon2 != std::string::npos) {
    const std::string flag = rest.substr(colon2 + 1);
    if (flag == "nofb")
      f.feedback_frozen = false;
    else
      bad("unknown fault flag '" + flag + "'", "faults");
  }
  return f;
}

std::string fault_to_string(const FaultSpec& f) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), f.frozen_value);
  std::string out = kLegNames[f.leg];
  out += ":";
  out.append(buf, res.ptr);
  if (!f.feedback_frozen) out += ":nofb";
  return out;
}

void PolicyBinding::resolve(const std::string& base_dir) {
  spec = PolicySpec{};
  if (source == "zero" || source == "scripted:zero") {
    spec.kind = PolicySpec::Kind::Scripted;
    spec.script_name = "zero";
  } else if (source.rfind("scripted:", 0) == 0) {
    spec.kind = PolicySpec::Kind::Scripted;
    spec.script_name = source.substr(9);
  } else if (source == "constant") {
    spec.kind = PolicySpec::Kind::Constant;
    spec.constants = values;
    if (values.empty()) bad("constant policy needs values", "policies");
  } else if (source == "random") {
    spec.kind = PolicySpec::Kind::Random;
  } else if (source.rfind("net:", 0) == 0) {
    std::filesystem::path p(source.substr(4));
    if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
    spec = PolicySpec::load_network(p.string());
  } else {
    bad("unknown policy source '" + source + "'", "policies");
  }
}

std::array<MountPose, 6> RunConfig::default_mounts() {
  return {MountPose{0.10, 0.06, 0.0},  MountPose{0.10, -0.06, 0.0},
          MountPose{0.00, 0.07, 0.0},  MountPose{0.00, -0.07, 0.0},
          MountPose{-0.10, 0.06, 0.0}, MountPose{-0.10, -0.06, 0.0}};
}

LegGeometry RunConfig::leg(int i) const {
  LegGeometry g = links;
  g.mount = mounts[static_cast<std::size_t>(i)];
  return g;
}

void RunConfig::validate() const {
  oscillator.validate();
  links.validate();
  morph_ranges.validate();
  morph.validate(morph_ranges);
  scheduler.validate();
  terrain.validate();
  if (task.difficulty < kMinDifficulty || task.difficulty > kMaxDifficulty)
    bad("difficulty must be in [1, 5]", "task.difficulty");
  if (!(task.gamma > 0.0) || task.gamma > 1.0) bad("gamma must be in (0, 1]", "task.gamma");
  if (!(task.v_max > 0.0)) bad("v_max must be > 0", "task.v_max");
  if (!(task.goal_radius > 0.0)) bad("goal_radius must be > 0", "task.goal_radius");
  if (!(sim.duration > 0.0)) bad("duration must be > 0", "sim.duration");
  if (!(sim.body_mass > 0.0)) bad("body_mass must be > 0", "sim.body_mass");
  if (!(sim.gravity > 0.0)) bad("gravity must be > 0", "sim.gravity");
  if (sim.contact_k < 0.0) bad("contact_k must be >= 0", "sim.contact_k");
  if (!(sim.overlap_margin > 0.0)) bad("overlap_margin must be > 0", "sim.overlap_margin");
  if (initial_skill.norm() > 1.0 + 1e-12) bad("initial_skill must lie in the unit disc",
                                              "policies.initial_skill");
  for (const FaultSpec& f : faults)
    if (f.leg < 0 || f.leg >= kNumLegs) bad("fault leg out of range", "faults");
}

json RunConfig::to_json() const {
  json j;
  j["oscillator"] = {{"a", oscillator.a},
                     {"mu_min", oscillator.mu_min},
                     {"mu_max", oscillator.mu_max},
                     {"omega_min", oscillator.omega_min},
                     {"Omega", oscillator.Omega},
                     {"dt", oscillator.dt},
                     {"coupling_weights", oscillator.coupling_weights},
                     {"coupling_bias", oscillator.coupling_bias}};
  json mx = json::array(), my = json::array(), myaw = json::array();
  for (const MountPose& m : mounts) {
    mx.push_back(m.x);
    my.push_back(m.y);
    myaw.push_back(m.yaw);
  }
  j["geometry"] = {{"l1", links.l1}, {"l2", links.l2}, {"l3", links.l3},
                   {"mount_x", mx},  {"mount_y", my},  {"mount_yaw", myaw}};
  j["morph"] = {{"l", morph.l}, {"h", morph.h}, {"g_p", morph.g_p},
                {"g_c", morph.g_c}, {"w_y", morph.w_y}};
  j["morph_ranges"] = {{"l", morph_ranges.l}, {"h", morph_ranges.h},
                       {"g_p", morph_ranges.g_p}, {"g_c", morph_ranges.g_c},
                       {"w_y", morph_ranges.w_y}};
  j["scheduler"] = {{"mid_period", scheduler.mid_period},
                    {"high_period", scheduler.high_period},
                    {"variant", variant_name(scheduler.variant)}};
  j["policies"] = {{"high", high_policy.source},
                   {"high_values", high_policy.values},
                   {"mid", mid_policy.source},
                   {"mid_values", mid_policy.values},
                   {"initial_skill", {initial_skill.x, initial_skill.y}}};
  j["task"] = {{"enabled", task.enabled},
               {"kind", task.kind == TaskKind::Stairs  ? "stairs"
                        : task.kind == TaskKind::Gap   ? "gap"
                        : task.kind == TaskKind::Alley ? "alley"
                                                       : "slope"},
               {"difficulty", task.difficulty},
               {"goal", {task.goal[0], task.goal[1]}},
               {"final_goal", {task.final_goal[0], task.final_goal[1]}},
               {"goal_radius", task.goal_radius},
               {"v_max", task.v_max},
               {"gamma", task.gamma}};
  j["terrain"] = {{"kind", terrain_name(terrain.kind)},
                  {"difficulty", terrain.difficulty},
                  {"start_x", terrain.start_x},
                  {"step_height", terrain.step_height},
                  {"step_depth", terrain.step_depth},
                  {"gap_width", terrain.gap_width},
                  {"gap_depth", terrain.gap_depth},
                  {"alley_width", terrain.alley_width},
                  {"wall_height", terrain.wall_height},
                  {"slope_angle", terrain.slope_angle},
                  {"grid_h", terrain.grid_h},
                  {"grid_w", terrain.grid_w},
                  {"grid_spacing", terrain.grid_spacing}};
  j["sim"] = {{"duration", sim.duration},
              {"seed", sim.seed},
              {"body_mass", sim.body_mass},
              {"gravity", sim.gravity},
              {"contact_k", sim.contact_k},
              {"yaw_gain", sim.yaw_gain},
              {"overlap_margin", sim.overlap_margin}};
  json jf = json::array();
  for (const FaultSpec& f : faults) jf.push_back(fault_to_string(f));
  j["faults"] = jf;
  j["output"] = {{"dir", out_dir}};
  return j;
}

RunConfig RunConfig::from_json(const json& root, const std::string& base_dir) {
  RunConfig cfg;
  Section top(root, "config");

  if (top.has("oscillator")) {
    Section s(root["oscillator"], "oscillator");
    if (s.has("a")) cfg.oscillator.a = need_num(s["a"], "oscillator.a");
    if (s.has("mu_min")) cfg.oscillator.mu_min = need_num(s["mu_min"], "oscillator.mu_min");
    if (s.has("mu_max")) cfg.oscillator.mu_max = need_num(s["mu_max"], "oscillator.mu_max");
    if (s.has("omega_min"))
      cfg.oscillator.omega_min = need_num(s["omega_min"], "oscillator.omega_min");
    if (s.has("Omega")) cfg.oscillator.Omega = need_num(s["Omega"], "oscillator.Omega");
    if (s.has("dt")) cfg.oscillator.dt = need_num(s["dt"], "oscillator.dt");
    if (s.has("coupling_weights"))
      cfg.oscillator.coupling_weights =
          need_mat6(s["coupling_weights"], "oscillator.coupling_weights");
    if (s.has("coupling_bias"))
      cfg.oscillator.coupling_bias = need_mat6(s["coupling_bias"], "oscillator.coupling_bias");
    s.finish();
  }

  if (top.has("geometry")) {
    Section s(root["geometry"], "geometry");
    if (s.has("l1")) cfg.links.l1 = need_num(s["l1"], "geometry.l1");
    if (s.has("l2")) cfg.links.l2 = need_num(s["l2"], "geometry.l2");
    if (s.has("l3")) cfg.links.l3 = need_num(s["l3"], "geometry.l3");
    if (s.has("mount_x")) {
      const auto v = need_arr6(s["mount_x"], "geometry.mount_x");
      for (int i = 0; i < 6; ++i) cfg.mounts[i].x = v[i];
    }
    if (s.has("mount_y")) {
      const auto v = need_arr6(s["mount_y"], "geometry.mount_y");
      for (int i = 0; i < 6; ++i) cfg.mounts[i].y = v[i];
    }
    if (s.has("mount_yaw")) {
      const auto v = need_arr6(s["mount_yaw"], "geometry.mount_yaw");
      for (int i = 0; i < 6; ++i) cfg.mounts[i].yaw = v[i];
    }
    s.finish();
  }

  if (top.has("morph")) {
    Section s(root["morph"], "morph");
    if (s.has("l")) cfg.morph.l = need_num(s["l"], "morph.l");
    if (s.has("h")) cfg.morph.h = need_num(s["h"], "morph.h");
    if (s.has("g_p")) cfg.morph.g_p = need_num(s["g_p"], "morph.g_p");
    if (s.has("g_c")) cfg.morph.g_c = need_num(s["g_c"], "morph.g_c");
    if (s.has("w_y")) cfg.morph.w_y = need_num(s["w_y"], "morph.w_y");
    s.finish();
  }

  if (top.has("morph_ranges")) {
    Section s(root["morph_ranges"], "morph_ranges");
    if (s.has("l")) cfg.morph_ranges.l = need_vec2(s["l"], "morph_ranges.l");
    if (s.has("h")) cfg.morph_ranges.h = need_vec2(s["h"], "morph_ranges.h");
    if (s.has("g_p")) cfg.morph_ranges.g_p = need_vec2(s["g_p"], "morph_ranges.g_p");
    if (s.has("g_c")) cfg.morph_ranges.g_c = need_vec2(s["g_c"], "morph_ranges.g_c");
    if (s.has("w_y")) cfg.morph_ranges.w_y = need_vec2(s["w_y"], "morph_ranges.w_y");
    s.finish();
  }

  if (top.has("scheduler")) {
    Section s(root["scheduler"], "scheduler");
    if (s.has("mid_period"))
      cfg.scheduler.mid_period = static_cast<int>(need_int(s["mid_period"], "scheduler.mid_period"));
    if (s.has("high_period"))
      cfg.scheduler.high_period =
          static_cast<int>(need_int(s["high_period"], "scheduler.high_period"));
    if (s.has("variant"))
      cfg.scheduler.variant = parse_variant(need_str(s["variant"], "scheduler.variant"));
    s.finish();
  }

  if (top.has("policies")) {
    Section s(root["policies"], "policies");
    if (s.has("high")) cfg.high_policy.source = need_str(s["high"], "policies.high");
    if (s.has("high_values")) {
      cfg.high_policy.values.clear();
      const json& v = s["high_values"];
      if (!v.is_array()) bad("expected an array", "policies.high_values");
      for (std::size_t i = 0; i < v.size(); ++i)
        cfg.high_policy.values.push_back(
            need_num(v[i], "policies.high_values[" + std::to_string(i) + "]"));
    }
    if (s.has("mid")) cfg.mid_policy.source = need_str(s["mid"], "policies.mid");
    if (s.has("mid_values")) {
      cfg.mid_policy.values.clear();
      const json& v = s["mid_values"];
      if (!v.is_array()) bad("expected an array", "policies.mid_values");
      for (std::size_t i = 0; i < v.size(); ++i)
        cfg.mid_policy.values.push_back(
            need_num(v[i], "policies.mid_values[" + std::to_string(i) + "]"));
    }
    if (s.has("initial_skill")) {
      const Vec2 z = need_vec2(s["initial_skill"], "policies.initial_skill");
      cfg.initial_skill = SkillVector{z[0], z[1]};
    }
    s.finish();
  }

  if (top.has("task")) {
    Section s(root["task"], "task");
    if (s.has("enabled")) cfg.task.enabled = need_bool(s["enabled"], "task.enabled");
    if (s.has("kind")) {
      const std::string k = need_str(s["kind"], "task.kind");
      if (k == "stairs") cfg.task.kind = TaskKind::Stairs;
      else if (k == "gap") cfg.task.kind = TaskKind::Gap;
      else if (k == "alley") cfg.task.kind = TaskKind::Alley;
      else if (k == "slope") cfg.task.kind = TaskKind::Slope;
      else bad("unknown task kind '" + k + "' (stairs|gap|alley|slope)", "task.kind");
    }
    if (s.has("difficulty"))
      cfg.task.difficulty = static_cast<int>(need_int(s["difficulty"], "task.difficulty"));
    if (s.has("goal")) cfg.task.goal = need_vec2(s["goal"], "task.goal");
    cfg.task.final_goal = cfg.task.goal;
    if (s.has("final_goal")) cfg.task.final_goal = need_vec2(s["final_goal"], "task.final_goal");
    if (s.has("goal_radius")) cfg.task.goal_radius = need_num(s["goal_radius"], "task.goal_radius");
    if (s.has("v_max")) cfg.task.v_max = need_num(s["v_max"], "task.v_max");
    if (s.has("gamma")) cfg.task.gamma = need_num(s["gamma"], "task.gamma");
    s.finish();
  }

  if (top.has("terrain")) {
    Section s(root["terrain"], "terrain");
    if (s.has("kind")) cfg.terrain.kind = parse_terrain(need_str(s["kind"], "terrain.kind"));
    if (s.has("difficulty")) cfg.terrain.difficulty = need_num(s["difficulty"], "terrain.difficulty");
    if (s.has("start_x")) cfg.terrain.start_x = need_num(s["start_x"], "terrain.start_x");
    if (s.has("step_height")) cfg.terrain.step_height = need_num(s["step_height"], "terrain.step_height");
    if (s.has("step_depth")) cfg.terrain.step_depth = need_num(s["step_depth"], "terrain.step_depth");
    if (s.has("gap_width")) cfg.terrain.gap_width = need_num(s["gap_width"], "terrain.gap_width");
    if (s.has("gap_depth")) cfg.terrain.gap_depth = need_num(s["gap_depth"], "terrain.gap_depth");
    if (s.has("alley_width")) cfg.terrain.alley_width = need_num(s["alley_width"], "terrain.alley_width");
    if (s.has("wall_height")) cfg.terrain.wall_height = need_num(s["wall_height"], "terrain.wall_height");
    if (s.has("slope_angle")) cfg.terrain.slope_angle = need_num(s["slope_angle"], "terrain.slope_angle");
    if (s.has("grid_h")) cfg.terrain.grid_h = static_cast<int>(need_int(s["grid_h"], "terrain.grid_h"));
    if (s.has("grid_w")) cfg.terrain.grid_w = static_cast<int>(need_int(s["grid_w"], "terrain.grid_w"));
    if (s.has("grid_spacing"))
      cfg.terrain.grid_spacing = need_num(s["grid_spacing"], "terrain.grid_spacing");
    s.finish();
  }

  if (top.has("sim")) {
    Section s(root["sim"], "sim");
    if (s.has("duration")) cfg.sim.duration = need_num(s["duration"], "sim.duration");
    if (s.has("seed")) {
      const long v = need_int(s["seed"], "sim.seed");
      if (v < 0) bad("seed must be >= 0", "sim.seed");
      cfg.sim.seed = static_cast<std::uint64_t>(v);
    }
    if (s.has("body_mass")) cfg.sim.body_mass = need_num(s["body_mass"], "sim.body_mass");
    if (s.has("gravity")) cfg.sim.gravity = need_num(s["gravity"], "sim.gravity");
    if (s.has("contact_k")) cfg.sim.contact_k = need_num(s["contact_k"], "sim.contact_k");
    if (s.has("yaw_gain")) cfg.sim.yaw_gain = need_num(s["yaw_gain"], "sim.yaw_gain");
    if (s.has("overlap_margin"))
      cfg.sim.overlap_margin = need_num(s["overlap_margin"], "sim.overlap_margin");
    s.finish();
  }

  if (top.has("faults")) {
    const json& v = root["faults"];
    if (!v.is_array()) bad("expected an array of LEG:VALUE strings", "faults");
    for (const auto& item : v) cfg.faults.push_back(parse_fault(need_str(item, "faults")));
  }

  if (top.has("output")) {
    Section s(root["output"], "output");
    if (s.has("dir")) cfg.out_dir = need_str(s["dir"], "output.dir");
    s.finish();
  }

  top.finish();
  cfg.scheduler.cpg_dt = cfg.oscillator.dt;  // single source of truth
  cfg.high_policy.resolve(base_dir);
  cfg.mid_policy.resolve(base_dir);
  cfg.validate();
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
  const json j = load_config_file(path);
  return from_json(j, std::filesystem::path(path).parent_path().string());
}

// --- text config format -------------------------------------------------

namespace {

struct TextCursor {
  const std::string& s;
  std::size_t i = 0;
  int line = 1;
};

void skip_ws(TextCursor& c, bool newlines) {
  while (c.i < c.s.size()) {
    const char ch = c.s[c.i];
    if (ch == '#') {  // comment to end of line
      while (c.i < c.s.size() && c.s[c.i] != '\n') ++c.i;
    } else if (ch == '\n') {
      if (!newlines) return;
      ++c.line;
      ++c.i;
    } else if (std::isspace(static_cast<unsigned char>(ch))) {
      ++c.i;
    } else {
      return;
    }
  }
}

[[noreturn]] void bad_line(const TextCursor& c, const std::string& what) {
  bad(what + " (line " + std::to_string(c.line) + ")", "config");
}

json parse_value(TextCursor& c);

json parse_array(TextCursor& c) {
  json arr = json::array();
  ++c.i;  // '['
  skip_ws(c, true);
  if (c.i < c.s.size() && c.s[c.i] == ']') {
    ++c.i;
    return arr;
  }
  while (true) {
    arr.push_back(parse_value(c));
    skip_ws(c, true);
    if (c.i >= c.s.size()) bad_line(c, "unterminated array");
    if (c.s[c.i] == ',') {
      ++c.i;
      skip_ws(c, true);
      if (c.i < c.s.size() && c.s[c.i] == ']') {  // trailing comma
        ++c.i;
        return arr;
      }
      continue;
    }
    if (c.s[c.i] == ']') {
      ++c.i;
      return arr;
    }
    bad_line(c, "expected ',' or ']' in array");
  }
}

json parse_value(TextCursor& c) {
  skip_ws(c, true);
  if (c.i >= c.s.size()) bad_line(c, "missing value");
  const char ch = c.s[c.i];
  if (ch == '[') return parse_array(c);
  if (ch == '"') {
    ++c.i;
    std::string out;
    while (c.i < c.s.size() && c.s[c.i] != '"') {
      if (c.s[c.i] == '\\' && c.i + 1 < c.s.size()) ++c.i;
      out.push_back(c.s[c.i]);
      ++c.i;
    }
    if (c.i >= c.s.size()) bad_line(c, "unterminated string");
    ++c.i;
    return json(out);
  }
  // bare token: number or boolean
  std::size_t start = c.i;
  while (c.i < c.s.size() && !std::isspace(static_cast<unsigned char>(c.s[c.i])) &&
         c.s[c.i] != ',' && c.s[c.i] != ']' && c.s[c.i] != '#')
    ++c.i;
  std::string tok = c.s.substr(start, c.i - start);
  if (tok == "true") return json(true);
  if (tok == "false") return json(false);
  if (tok.find_first_of(".eE") == std::string::npos) {
    long long iv = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), iv);
    if (res.ec == std::errc() && res.ptr == tok.data() + tok.size()) return json(iv);
  }
  try {
    std::size_t used = 0;
    const double dv = std::stod(tok, &used);
    if (used == tok.size()) return json(dv);
  } catch (const std::exception&) {
  }
  bad_line(c, "invalid value '" + tok + "'");
}

}  // namespace

json parse_config_text(const std::string& text) {
  json root = json::object();
  json* section = &root;
  TextCursor c{text};
  while (true) {
    skip_ws(c, true);
    if (c.i >= c.s.size()) break;
    if (c.s[c.i] == '[') {
      ++c.i;
      std::size_t start = c.i;
      while (c.i < c.s.size() && c.s[c.i] != ']' && c.s[c.i] != '\n') ++c.i;
      if (c.i >= c.s.size() || c.s[c.i] != ']') bad_line(c, "unterminated section header");
      std::string name = c.s.substr(start, c.i - start);
      ++c.i;
      section = &root;
      std::size_t pos = 0;
      while (true) {  // nested tables via dotted names
        const auto dotp = name.find('.', pos);
        const std::string part = name.substr(pos, dotp == std::string::npos ? std::string::npos
                                                                            : dotp - pos);
        if (part.empty()) bad_line(c, "empty section name");
        section = &(*section)[part];
        if (!section->is_object()) *section = json::object();
        if (dotp == std::string::npos) break;
        pos = dotp + 1;
      }
      continue;
    }
    // key = value
    std::size_t start = c.i;
    while (c.i < c.s.size() && c.s[c.i] != '=' && c.s[c.i] != '\n') ++c.i;
    if (c.i >= c.s.size() || c.s[c.i] != '=') bad_line(c, "expected 'key = value'");
    std::string key = c.s.substr(start, c.i - start);
    while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back()))) key.pop_back();
    if (key.empty()) bad_line(c, "empty key");
    ++c.i;  // '='
    (*section)[key] = parse_value(c);
    skip_ws(c, false);
    if (c.i < c.s.size() && c.s[c.i] != '\n') {
      if (c.s[c.i] == '#') {
        while (c.i < c.s.size() && c.s[c.i] != '\n') ++c.i;
      } else {
        bad_line(c, "trailing characters after value");
      }
    }
  }
  return root;
}

json load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) bad("cannot open config file '" + path + "'", "config");
  std::stringstream buf;
  buf << f.rdbuf();
  if (std::filesystem::path(path).extension() == ".json") {
    try {
      return json::parse(buf.str());
    } catch (const json::exception& e) {
      bad(std::string("invalid JSON: ") + e.what(), "config");
    }
  }
  return parse_config_text(buf.str());
}

}  // namespace hexcpg
