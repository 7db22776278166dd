#include "hexcpg/cli.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <CLI11.hpp>

#include "hexcpg/check.hpp"
#include "hexcpg/config.hpp"
#include "hexcpg/errors.hpp"
#include "hexcpg/sim.hpp"

namespace hexcpg {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

int log_level() {
  const char* v = std::getenv("HEXCPG_LOG_LEVEL");
  if (!v) return 1;
  const std::string s(v);
  if (s == "quiet") return 0;
  if (s == "debug") return 2;
  return 1;
}

void note(const std::string& msg) {
  if (log_level() >= 1) std::cerr << msg << '\n';
}

void debug(const std::string& msg) {
  if (log_level() >= 2) std::cerr << msg << '\n';
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  f << content;
}

std::string format_value(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

struct Overrides {
  bool has_seed = false;
  std::uint64_t seed = 0;
  bool has_duration = false;
  double duration = 0.0;
  std::string variant;
  std::vector<std::string> faults;
  std::string out_dir;

  void apply(RunConfig& cfg) const {
    if (has_seed) cfg.sim.seed = seed;
    if (has_duration) cfg.sim.duration = duration;
    if (!variant.empty()) cfg.scheduler.variant = parse_variant(variant);
    for (const std::string& f : faults) cfg.faults.push_back(parse_fault(f));
    if (!out_dir.empty()) cfg.out_dir = out_dir;
  }
};

RunConfig load_config(const std::string& path, const Overrides& ov) {
  RunConfig cfg;
  if (!path.empty()) cfg = RunConfig::from_file(path);
  ov.apply(cfg);
  cfg.validate();
  return cfg;
}

void write_rollout(const fs::path& dir, const RolloutResult& res) {
  fs::create_directories(dir);
  write_file(dir / "trajectory.csv", res.log.to_csv());
  write_file(dir / "trajectory.json", res.log.to_json());
  write_file(dir / "gait.csv", extract_gait_diagram(res.log).to_csv());
  write_file(dir / "summary.json", res.summary.to_json() + "\n");
  note("wrote " + (dir / "trajectory.csv").string() + ", trajectory.json, gait.csv, "
       "summary.json");
}

int cmd_simulate(const std::string& config_path, const Overrides& ov) {
  const RunConfig cfg = load_config(config_path, ov);
  debug("simulate: seed " + std::to_string(cfg.sim.seed) + ", duration " +
        format_value(cfg.sim.duration) + " s, variant " +
        variant_name(cfg.scheduler.variant));
  const RolloutResult res = rollout(cfg);
  write_rollout(cfg.out_dir, res);
  std::cout << res.summary.to_json() << '\n';
  return 0;
}

int cmd_check(const std::string& suite) {
  const json report = run_checks(suite);
  std::cout << report.dump(2) << '\n';
  return report.at("pass").get<bool>() ? 0 : 1;
}

int cmd_sample_skills(std::uint64_t seed, int count, const std::string& format) {
  RandomStream rng(seed);
  if (format == "json") {
    json arr = json::array();
    for (int i = 0; i < count; ++i) {
      const SkillVector z = sample_skill(rng);
      arr.push_back({z.x, z.y});
    }
    std::cout << json{{"seed", seed}, {"samples", arr}}.dump() << '\n';
  } else {
    std::cout << "skill_x,skill_y\n";
    for (int i = 0; i < count; ++i) {
      const SkillVector z = sample_skill(rng);
      std::cout << format_value(z.x) << ',' << format_value(z.y) << '\n';
    }
  }
  return 0;
}

// Sets a numeric leaf addressed by a dotted path, creating tables on the
// way. "skill.angle" is virtual: it rotates policies.initial_skill while
// keeping its norm.
void apply_sweep_param(json& cfg, const std::string& param, double value) {
  if (param == "skill.angle") {
    double n = 1.0;
    if (cfg.contains("policies") && cfg["policies"].contains("initial_skill")) {
      const auto& z = cfg["policies"]["initial_skill"];
      n = std::hypot(z[0].get<double>(), z[1].get<double>());
    }
    cfg["policies"]["initial_skill"] = {n * std::cos(value), n * std::sin(value)};
    return;
  }
  json* node = &cfg;
  std::size_t pos = 0;
  while (true) {
    const auto dot = param.find('.', pos);
    const std::string key = param.substr(pos, dot == std::string::npos ? std::string::npos
                                                                       : dot - pos);
    if (key.empty()) throw ConfigError("empty path component", "sweep --param " + param);
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    if (!node->is_object()) *node = json::object();
    pos = dot + 1;
  }
}

int cmd_sweep(const std::string& config_path, const Overrides& ov, const std::string& param,
              double lo, double hi, int count, int jobs) {
  if (count < 1) throw ConfigError("count must be >= 1", "sweep --count");
  json base = config_path.empty() ? json::object() : load_config_file(config_path);
  const std::string base_dir =
      config_path.empty() ? "" : fs::path(config_path).parent_path().string();

  std::vector<double> values(count);
  for (int i = 0; i < count; ++i)
    values[i] = count == 1 ? lo : lo + (hi - lo) * i / static_cast<double>(count - 1);

  std::vector<RunConfig> cfgs;
  cfgs.reserve(values.size());
  for (double v : values) {
    json j = base;
    apply_sweep_param(j, param, v);
    RunConfig cfg = RunConfig::from_json(j, base_dir);
    ov.apply(cfg);
    cfg.validate();
    cfgs.push_back(std::move(cfg));
  }
  const std::string out_dir = cfgs.front().out_dir;

  std::vector<RolloutResult> results(cfgs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cfgs.size()) return;
      try {
        debug("sweep point " + std::to_string(i) + ": " + param + " = " +
              format_value(values[i]));
        results[i] = rollout(cfgs[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(cfgs.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  json sweep = json::array();
  for (std::size_t i = 0; i < cfgs.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "point_%03zu", i);
    write_rollout(fs::path(out_dir) / name, results[i]);
    sweep.push_back({{"param", param},
                     {"value", values[i]},
                     {"dir", name},
                     {"summary", json::parse(results[i].summary.to_json())}});
  }
  fs::create_directories(out_dir);
  const json report{{"param", param}, {"points", sweep}};
  write_file(fs::path(out_dir) / "sweep.json", report.dump(2) + "\n");
  std::cout << report.dump(2) << '\n';
  return 0;
}

}  // namespace

int run_cli(std::vector<std::string> args) {
  CLI::App app{"hexapod locomotion stack: oscillator network, pose solver and "
               "three-level controller around a kinematic simulator"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides ov;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "config file (.json or text format)");
    sub->add_option("--seed", ov.seed, "override sim.seed")->check(CLI::NonNegativeNumber);
    sub->add_option("--duration", ov.duration, "override sim.duration, seconds");
    sub->add_option("--variant", ov.variant, "override scheduler.variant")
        ->check(CLI::IsMember({"full", "noalpha", "novpath", "nolpath"}));
    sub->add_option("--fault", ov.faults, "inject a fault, LEG:VALUE (repeatable)");
    sub->add_option("--out-dir", ov.out_dir, "override output.dir");
  };

  CLI::App* sim = app.add_subcommand("simulate", "run one rollout and write its artifacts");
  add_common(sim);

  std::string suite = "all";
  CLI::App* chk = app.add_subcommand("check", "run built-in diagnostics");
  chk->add_option("suite", suite, "oscillator|kinematics|sampler|rewards|all");

  std::string param;
  double lo = 0.0, hi = 0.0;
  int count = 5, jobs = 1;
  CLI::App* swp = app.add_subcommand("sweep", "rollouts across one config parameter");
  add_common(swp);
  swp->add_option("--param", param, "dotted config path, e.g. morph.l (skill.angle is "
                  "virtual: rotates the initial skill)")->required();
  swp->add_option("--min", lo, "first value")->required();
  swp->add_option("--max", hi, "last value")->required();
  swp->add_option("--count", count, "number of points");
  swp->add_option("--jobs", jobs, "worker threads");

  std::uint64_t sample_seed = 42;
  int sample_count = 16;
  std::string sample_format = "csv";
  CLI::App* smp = app.add_subcommand("sample-skills", "draw skill vectors from the unit disc");
  smp->add_option("--seed", sample_seed, "sampler seed");
  smp->add_option("--count", sample_count, "number of samples")->check(CLI::PositiveNumber);
  smp->add_option("--format", sample_format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));

  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help/version exit 0, usage errors exit 2
  }

  try {
    ov.has_seed = sim->count("--seed") || swp->count("--seed");
    ov.has_duration = sim->count("--duration") || swp->count("--duration");
    if (sim->parsed()) return cmd_simulate(config_path, ov);
    if (chk->parsed()) return cmd_check(suite);
    if (swp->parsed()) return cmd_sweep(config_path, ov, param, lo, hi, count, jobs);
    if (smp->parsed()) return cmd_sample_skills(sample_seed, sample_count, sample_format);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  args.reserve(static_cast<std::size_t>(argc > 0 ? argc - 1 : 0));
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(std::move(args));
}

}  // namespace hexcpg
