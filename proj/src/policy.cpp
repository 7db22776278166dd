#include "hexcpg/policy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "hexcpg/controller.hpp"
#include "hexcpg/errors.hpp"
#include "hexcpg/leg.hpp"

namespace hexcpg {

Activation parse_activation(const std::string& name) {
  if (name == "tanh") return Activation::Tanh;
  if (name == "relu") return Activation::Relu;
  if (name == "identity") return Activation::Identity;
  throw ConfigError("unknown activation '" + name + "'", "policy.layers.activation");
}

void PolicySpec::validate() const {
  switch (kind) {
    case Kind::Scripted:
      if (!is_known_script(script_name, output_size))
        throw ConfigError("unknown scripted policy '" + script_name + "'", "policy");
      return;
    case Kind::Constant:
      if (constants.empty()) throw ConfigError("constant policy needs values", "policy");
      return;
    case Kind::Random:
      if (output_size <= 0) throw ConfigError("random policy needs an output size", "policy");
      return;
    case Kind::FeedForwardNet: {
      if (layers.empty()) throw ConfigError("network has no layers", "policy.layers");
      int in = input_size;
      for (std::size_t k = 0; k < layers.size(); ++k) {
        const NetLayer& l = layers[k];
        const std::string where = "policy.layers[" + std::to_string(k) + "]";
        if (l.rows <= 0 || l.cols <= 0) throw ConfigError("non-positive layer shape", where);
        if (l.cols != in)
          throw ConfigError("layer input " + std::to_string(l.cols) +
                                " does not chain with previous output " + std::to_string(in),
                            where);
        if (l.weights.size() != static_cast<std::size_t>(l.rows) * l.cols)
          throw ConfigError("weight count does not match rows*cols", where + ".weights");
        if (l.bias.size() != static_cast<std::size_t>(l.rows))
          throw ConfigError("bias count does not match rows", where + ".bias");
        in = l.rows;
      }
      return;
    }
  }
}

PolicySpec PolicySpec::load_network(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open policy weight file '" + path + "'", "policy");
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("invalid JSON in '" + path + "': " + e.what(), "policy");
  }
  if (!j.contains("schema_version") || j["schema_version"] != 1)
    throw ConfigError("unsupported schema_version in '" + path + "'", "policy.schema_version");
  PolicySpec spec;
  spec.kind = Kind::FeedForwardNet;
  if (!j.contains("input_size") || !j["input_size"].is_number_integer())
    throw ConfigError("missing input_size", "policy.input_size");
  spec.input_size = j["input_size"].get<int>();
  spec.squash_tanh = j.value("squash", "none") == std::string("tanh");
  if (!j.contains("layers") || !j["layers"].is_array())
    throw ConfigError("missing layers array", "policy.layers");
  for (const auto& jl : j["layers"]) {
    NetLayer l;
    l.rows = jl.at("rows").get<int>();
    l.cols = jl.at("cols").get<int>();
    l.act = parse_activation(jl.at("activation").get<std::string>());
    jl.at("weights").get_to(l.weights);
    jl.at("bias").get_to(l.bias);
    spec.layers.push_back(std::move(l));
  }
  spec.output_size = spec.layers.back().rows;
  spec.validate();
  return spec;
}

std::vector<double> policy_forward(const PolicySpec& spec, std::span<const double> obs) {
  if (spec.kind == PolicySpec::Kind::Constant) return spec.constants;
  if (spec.kind != PolicySpec::Kind::FeedForwardNet)
    throw ShapeMismatch("policy_forward expects a constant or network spec");
  if (obs.size() != static_cast<std::size_t>(spec.input_size))
    throw ShapeMismatch("observation length " + std::to_string(obs.size()) +
                        " does not match declared input size " +
                        std::to_string(spec.input_size));
  std::vector<double> x(obs.begin(), obs.end());
  std::vector<double> y;
  for (const NetLayer& l : spec.layers) {
    y.assign(static_cast<std::size_t>(l.rows), 0.0);
    for (int r = 0; r < l.rows; ++r) {
      double acc = l.bias[static_cast<std::size_t>(r)];
      const double* w = &l.weights[static_cast<std::size_t>(r) * l.cols];
      for (int c = 0; c < l.cols; ++c) acc += w[c] * x[static_cast<std::size_t>(c)];
      switch (l.act) {
        case Activation::Tanh: acc = std::tanh(acc); break;
        case Activation::Relu: acc = acc > 0.0 ? acc : 0.0; break;
        case Activation::Identity: break;
      }
      y[static_cast<std::size_t>(r)] = acc;
    }
    x.swap(y);
  }
  if (spec.squash_tanh)
    for (double& v : x) v = std::tanh(v);
  return x;
}

namespace {

class ConstantPolicy final : public Policy {
 public:
  explicit ConstantPolicy(std::vector<double> values) : values_(std::move(values)) {}
  std::vector<double> act(const PolicyContext&) override { return values_; }

 private:
  std::vector<double> values_;
};

class RandomPolicy final : public Policy {
 public:
  RandomPolicy(int n, RandomStream stream) : n_(n), stream_(stream) {}
  std::vector<double> act(const PolicyContext&) override {
    std::vector<double> out(static_cast<std::size_t>(n_));
    for (double& v : out) v = stream_.uniform(-1.0, 1.0);
    return out;
  }

 private:
  int n_;
  RandomStream stream_;
};

class NetPolicy final : public Policy {
 public:
  explicit NetPolicy(PolicySpec spec) : spec_(std::move(spec)) {}
  std::vector<double> act(const PolicyContext& ctx) override {
    return policy_forward(spec_, ctx.flat);
  }

 private:
  PolicySpec spec_;
};

class ZeroPolicy final : public Policy {
 public:
  explicit ZeroPolicy(int n) : n_(n) {}
  std::vector<double> act(const PolicyContext&) override {
    return std::vector<double>(static_cast<std::size_t>(n_), 0.0);
  }

 private:
  int n_;
};

// mu = 0, omega = -1: theta holds still and the gait runs on the coupled
// phase alone.
class HoldPhasePolicy final : public Policy {
 public:
  std::vector<double> act(const PolicyContext&) override {
    std::vector<double> out(12, 0.0);
    for (int i = 0; i < 6; ++i) out[6 + i] = -1.0;
    return out;
  }
};

// Watches reported joint angles between evaluations. A leg whose three
// angles are bit-identical for kFrozenTicks consecutive evaluations is
// treated as faulted; from then on the healthy legs get omega = +1 while
// their foot is above stance height and omega = -1 otherwise, stretching
// stance relative to swing. Before detection behaves like hold_phase.
class FaultCompensationPolicy final : public Policy {
 public:
  explicit FaultCompensationPolicy(const LegGeometry& g) : geometry_(g) {}

  std::vector<double> act(const PolicyContext& ctx) override {
    std::vector<double> out(12, 0.0);
    for (int i = 0; i < 6; ++i) out[6 + i] = -1.0;
    if (!ctx.proprio) return out;
    const Proprioception& p = *ctx.proprio;
    for (int leg = 0; leg < 6; ++leg) {
      const double a0 = p.joint_angles[static_cast<std::size_t>(3 * leg)];
      const double a1 = p.joint_angles[static_cast<std::size_t>(3 * leg + 1)];
      const double a2 = p.joint_angles[static_cast<std::size_t>(3 * leg + 2)];
      if (seen_ && a0 == last_[leg][0] && a1 == last_[leg][1] && a2 == last_[leg][2])
        ++unchanged_[leg];
      else
        unchanged_[leg] = 0;
      last_[leg] = {a0, a1, a2};
    }
    seen_ = true;
    int faulted = -1;
    for (int leg = 0; leg < 6; ++leg)
      if (unchanged_[leg] >= kFrozenTicks) faulted = leg;
    if (faulted >= 0) latched_ = true;
    if (!latched_) return out;
    for (int leg = 0; leg < 6; ++leg) {
      if (unchanged_[leg] >= kFrozenTicks) continue;  // faulted leg: command ignored anyway
      const JointAngles q{last_[leg][0], last_[leg][1], last_[leg][2]};
      const double foot_z = forward_kinematics(q, geometry_).z;
      out[6 + leg] = foot_z > -p.morph.h + 1e-9 ? 1.0 : -1.0;
    }
    return out;
  }

 private:
  static constexpr int kFrozenTicks = 5;
  LegGeometry geometry_;
  std::array<std::array<double, 3>, 6> last_{};
  std::array<int, 6> unchanged_{};
  bool seen_ = false;
  bool latched_ = false;
};

}  // namespace

bool is_known_script(const std::string& name, int role_output) {
  if (name == "zero") return true;
  if (role_output == 12) return name == "hold_phase" || name == "fault_compensation";
  return false;
}

std::unique_ptr<Policy> Policy::make(const PolicySpec& spec, int role_output,
                                     RandomStream stream, const LegGeometry& geometry) {
  switch (spec.kind) {
    case PolicySpec::Kind::Constant: {
      if (spec.constants.size() != static_cast<std::size_t>(role_output))
        throw ConfigError("constant policy has " + std::to_string(spec.constants.size()) +
                              " values, expected " + std::to_string(role_output),
                          "policy");
      return std::make_unique<ConstantPolicy>(spec.constants);
    }
    case PolicySpec::Kind::Random:
      return std::make_unique<RandomPolicy>(role_output, stream);
    case PolicySpec::Kind::FeedForwardNet: {
      PolicySpec checked = spec;
      checked.validate();
      if (checked.layers.back().rows != role_output)
        throw ConfigError("network output " + std::to_string(checked.layers.back().rows) +
                              " does not match expected action size " +
                              std::to_string(role_output),
                          "policy.layers");
      return std::make_unique<NetPolicy>(std::move(checked));
    }
    case PolicySpec::Kind::Scripted: {
      if (!is_known_script(spec.script_name, role_output))
        throw ConfigError("unknown scripted policy '" + spec.script_name + "'", "policy");
      if (spec.script_name == "zero") return std::make_unique<ZeroPolicy>(role_output);
      if (spec.script_name == "hold_phase") return std::make_unique<HoldPhasePolicy>();
      return std::make_unique<FaultCompensationPolicy>(geometry);
    }
  }
  throw ConfigError("invalid policy kind", "policy");
}

}  // namespace hexcpg
