#pragma once

#include <stdexcept>
#include <string>

namespace hexcpg {

// Foot target outside the leg workspace. Carries the violated planar
// distance and the reachable band.
struct Unreachable : std::runtime_error {
  Unreachable(double dist, double lo, double hi)
      : std::runtime_error("foot target unreachable: planar distance " + std::to_string(dist) +
                           " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]"),
        distance(dist), min_reach(lo), max_reach(hi) {}
  double distance;
  double min_reach;
  double max_reach;
};

// Goal coincides with the body position; no heading direction exists.
struct DegenerateGoal : std::runtime_error {
  DegenerateGoal() : std::runtime_error("goal coincides with position; heading undefined") {}
};

// Vector length does not match a declared layout (policy I/O, observations).
struct ShapeMismatch : std::runtime_error {
  explicit ShapeMismatch(const std::string& what) : std::runtime_error(what) {}
};

// Invalid configuration value or file. `path` is the dotted field path
// ("oscillator.dt", "policies.mid") when one applies.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what, std::string where = "")
      : std::runtime_error(where.empty() ? what : where + ": " + what), path(std::move(where)) {}
  std::string path;
};

}  // namespace hexcpg
