#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace hexcpg {

// Fast built-in diagnostics, one suite per core module. Returns
//   { "suite": name, "checks": [ {name, pass, value, threshold}, ... ],
//     "pass": bool }
// where `value` is the measured quantity and `threshold` the limit it is
// held against. Suite names: oscillator, kinematics, sampler, rewards, all.
// Throws ConfigError for an unknown suite name.
nlohmann::json run_checks(const std::string& suite);

}  // namespace hexcpg
