#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hexcpg/kinematics.hpp"
#include "hexcpg/rng.hpp"

namespace hexcpg {

struct Proprioception;  // controller.hpp

enum class Activation { Tanh, Relu, Identity };

Activation parse_activation(const std::string& name);  // throws ConfigError

struct NetLayer {
  int rows = 0;                  // outputs
  int cols = 0;                  // inputs
  Activation act = Activation::Identity;
  std::vector<double> weights;   // row-major, rows x cols
  std::vector<double> bias;      // rows
};

// Declarative policy description. Networks are loaded from a JSON file:
//   { "schema_version": 1, "input_size": N, "squash": "tanh" | "none",
//     "layers": [ { "rows": m, "cols": n, "activation": "tanh" | "relu"
//                   | "identity", "weights": [m*n], "bias": [m] }, ... ] }
// Layer shapes must chain; the file path is validated at load time.
struct PolicySpec {
  enum class Kind { Scripted, Constant, Random, FeedForwardNet };
  Kind kind = Kind::Scripted;
  std::string script_name = "zero";   // Scripted
  std::vector<double> constants;      // Constant
  int output_size = 0;                // Random (and shape checks)
  int input_size = 0;                 // FeedForwardNet
  std::vector<NetLayer> layers;       // FeedForwardNet
  bool squash_tanh = false;           // final tanh saturation

  static PolicySpec load_network(const std::string& path);   // throws ConfigError
  void validate() const;                                     // throws ConfigError
};

// Deterministic evaluation of a Constant or FeedForwardNet spec. For a
// network: affine layers with per-layer activations, then optional final
// tanh squash. Throws ShapeMismatch when obs length differs from the
// declared input size.
std::vector<double> policy_forward(const PolicySpec& spec, std::span<const double> obs);

// Context handed to policies each evaluation. `flat` follows the assembled
// observation layout; scripted policies may also read the structured
// proprioception.
struct PolicyContext {
  std::span<const double> flat;
  const Proprioception* proprio = nullptr;
  double time = 0.0;
};

// Stateful policy instance. Random policies own a RandomStream; scripted
// policies may keep history between evaluations.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::vector<double> act(const PolicyContext& ctx) = 0;

  // role_output: expected action length (7 high, 12 mid, 17 high/NoVpath).
  static std::unique_ptr<Policy> make(const PolicySpec& spec, int role_output,
                                      RandomStream stream, const LegGeometry& geometry);
};

// Scripted policy names:
//   "zero"               (any role)  all-zero action
//   "hold_phase"         (mid)       mu = 0, omega = -1: theta frozen, pure
//                                    coupled-phase gait
//   "fault_compensation" (mid)       detects a leg with frozen feedback and
//                                    duty-shifts the others (omega = +1 in
//                                    swing, -1 in stance); "hold_phase"
//                                    behaviour until a fault is seen
bool is_known_script(const std::string& name, int role_output);

}  // namespace hexcpg
