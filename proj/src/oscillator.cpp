#include "hexcpg/oscillator.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "hexcpg/errors.hpp"
#include "hexcpg/leg.hpp"

namespace hexcpg {

Mat6 default_coupling_bias() {
  Mat6 psi{};
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      if (kTripodGroup[i] == kTripodGroup[j])
        psi[i][j] = 0.0;
      else
        psi[i][j] = kTripodGroup[i] == 0 ? kPi : -kPi;
    }
  }
  return psi;
}

OscillatorParams::OscillatorParams() {
  for (auto& row : coupling_weights) row.fill(1.0);
  coupling_bias = default_coupling_bias();
}

void OscillatorParams::validate() const {
  if (!(a > 0.0)) throw ConfigError("convergence rate must be > 0", "oscillator.a");
  if (!(mu_max > mu_min)) throw ConfigError("mu_max must exceed mu_min", "oscillator.mu_max");
  if (!(mu_min > 0.0)) throw ConfigError("mu_min must be > 0", "oscillator.mu_min");
  if (omega_min < 0.0) throw ConfigError("omega_min must be >= 0", "oscillator.omega_min");
  if (!(Omega > 0.0)) throw ConfigError("Omega must be > 0", "oscillator.Omega");
  if (!(dt > 0.0)) throw ConfigError("dt must be > 0", "oscillator.dt");
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if (std::abs(coupling_bias[i][j] + coupling_bias[j][i]) > 1e-12)
        throw ConfigError("coupling bias must be antisymmetric", "oscillator.coupling_bias");
}

double map_amplitude_factor(double mu, const OscillatorParams& p) {
  return p.mu_min + (mu + 1.0) * 0.5 * (p.mu_max - p.mu_min);
}

double map_frequency_factor(double omega, double omega_m, double omega_min) {
  return omega_min + (omega + 1.0) * 0.5 * (omega_m - omega_min);
}

double compute_omega_max(double skill_norm, double Omega) {
  if (skill_norm < 0.0) skill_norm = 0.0;
  if (skill_norm > 1.0) skill_norm = 1.0;
  return (0.2 + 0.8 * skill_norm) * Omega;
}

namespace {

// sum_j r_j * m_ij * sin(phase_j - phase_i - psi_ij)
inline double coupling_term(const std::array<double, 6>& r, const std::array<double, 6>& phase,
                            const Mat6& m, const Mat6& psi, int i) {
  double acc = 0.0;
  for (int j = 0; j < 6; ++j)
    acc += r[j] * m[i][j] * std::sin(phase[j] - phase[i] - psi[i][j]);
  return acc;
}

}  // namespace

OscillatorDerivatives derivatives(const OscillatorState& s, const ControlInputs& u,
                                  const OscillatorParams& p) {
  OscillatorDerivatives d;
  const double gain = 0.25 * p.a * p.a;
  for (int i = 0; i < 6; ++i) {
    d.r[i] = s.v[i];
    d.v[i] = gain * (map_amplitude_factor(u.mu[i], p) - s.r[i]) - p.a * s.v[i];
  }
  const double half_wm = 0.5 * u.omega_m;
  if (p.phase_mode == PhaseMode::EmbeddedAlpha) {
    for (int i = 0; i < 6; ++i) {
      d.theta[i] = map_frequency_factor(u.omega[i], u.omega_m, p.omega_min);
      d.alpha[i] = half_wm +
                   coupling_term(s.r, s.alpha, p.coupling_weights, p.coupling_bias, i);
    }
  } else {
    for (int i = 0; i < 6; ++i) {
      d.theta[i] = map_frequency_factor(u.omega[i], u.omega_m, p.omega_min) +
                   coupling_term(s.r, s.theta, p.coupling_weights, p.coupling_bias, i);
      d.alpha[i] = 0.0;
    }
  }
  return d;
}

namespace {

inline void axpy(std::array<double, 6>& out, const std::array<double, 6>& x,
                 const std::array<double, 6>& dx, double h) {
  for (int i = 0; i < 6; ++i) out[i] = x[i] + h * dx[i];
}

}  // namespace

OscillatorState step(const OscillatorState& s, const ControlInputs& u,
                     const OscillatorParams& p) {
  const OscillatorDerivatives d0 = s.prev_deriv ? *s.prev_deriv : derivatives(s, u, p);

  OscillatorState pred;
  axpy(pred.r, s.r, d0.r, p.dt);
  axpy(pred.v, s.v, d0.v, p.dt);
  axpy(pred.theta, s.theta, d0.theta, p.dt);
  axpy(pred.alpha, s.alpha, d0.alpha, p.dt);
  const OscillatorDerivatives d1 = derivatives(pred, u, p);

  OscillatorState out;
  const double h2 = 0.5 * p.dt;
  for (int i = 0; i < 6; ++i) {
    out.r[i] = s.r[i] + h2 * (d0.r[i] + d1.r[i]);
    out.v[i] = s.v[i] + h2 * (d0.v[i] + d1.v[i]);
    out.theta[i] = s.theta[i] + h2 * (d0.theta[i] + d1.theta[i]);
    out.alpha[i] = s.alpha[i] + h2 * (d0.alpha[i] + d1.alpha[i]);
  }
  out.prev_deriv = d1;
  return out;
}

std::array<double, 6> mixed_phase(const OscillatorState& s) {
  std::array<double, 6> phi;
  for (int i = 0; i < 6; ++i) phi[i] = s.alpha[i] + s.theta[i];
  return phi;
}

OscillatorState default_state(const OscillatorParams& p) {
  OscillatorState s;
  const double r0 = map_amplitude_factor(0.0, p);
  s.r.fill(r0);
  s.v.fill(0.0);
  std::array<double, 6> lock{};
  for (int i = 0; i < 6; ++i) lock[i] = kTripodGroup[i] == 0 ? 0.0 : -kPi;
  if (p.phase_mode == PhaseMode::EmbeddedAlpha) {
    s.theta.fill(0.0);
    s.alpha = lock;
  } else {
    s.theta = lock;
    s.alpha.fill(0.0);
  }
  return s;
}

std::string state_to_json(const OscillatorState& s) {
  nlohmann::json j;
  j["r"] = s.r;
  j["v"] = s.v;
  j["theta"] = s.theta;
  j["alpha"] = s.alpha;
  return j.dump();
}

OscillatorState state_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  OscillatorState s;
  for (const char* key : {"r", "v", "theta", "alpha"})
    if (!j.contains(key) || !j[key].is_array() || j[key].size() != 6)
      throw ConfigError("oscillator state snapshot needs 6-element array", key);
  j["r"].get_to(s.r);
  j["v"].get_to(s.v);
  j["theta"].get_to(s.theta);
  j["alpha"].get_to(s.alpha);
  return s;
}

}  // namespace hexcpg
