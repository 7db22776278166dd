#pragma once

#include <array>
#include <optional>
#include <string>

#include "hexcpg/vec.hpp"

namespace hexcpg {

// Phase-dynamics wiring of the oscillator network.
//   EmbeddedAlpha: the default two-phase form. Each leg carries a shared
//     phase alpha (coupled across legs, advancing at omega_m/2) plus an
//     independent phase theta driven only by its own frequency command.
//   CoupledTheta: single-phase ablation. The inter-leg coupling is moved
//     onto theta and alpha is removed (held constant). With this wiring a
//     zero frequency command freezes the gait entirely.
enum class PhaseMode { EmbeddedAlpha, CoupledTheta };

struct OscillatorParams {
  double a = 50.0;          // amplitude convergence rate, 1/s
  double mu_min = 1.0;      // amplitude set-point bounds
  double mu_max = 4.0;
  double omega_min = 0.0;   // theta-rate lower bound, rad/s
  double Omega = 8.0 * kPi; // frequency scale, rad/s
  double dt = 0.005;        // integration step, s
  PhaseMode phase_mode = PhaseMode::EmbeddedAlpha;
  Mat6 coupling_weights;    // m_ij, default all ones
  Mat6 coupling_bias;       // psi_ij, default tripod pattern (antisymmetric)

  OscillatorParams();
  // Throws ConfigError when a field is out of range or the bias matrix is
  // not antisymmetric.
  void validate() const;
};

// Default coupling bias: 0 between legs of the same tripod group, +pi from
// group {LF,RM,LH} toward group {RF,LM,RH} and -pi in the other direction.
// This is the alternating 0 / +-pi pattern written in the oscillator-position
// ordering, permuted into the leg storage order (see kTripodGroup).
Mat6 default_coupling_bias();

struct OscillatorDerivatives {
  std::array<double, 6> r{}, v{}, theta{}, alpha{};
};

struct OscillatorState {
  std::array<double, 6> r{};      // amplitudes
  std::array<double, 6> v{};      // amplitude rates
  std::array<double, 6> theta{};  // independent phases (rad, unwrapped)
  std::array<double, 6> alpha{};  // shared phases (rad, unwrapped)
  // Derivatives stored by the previous step; the trapezoidal update uses
  // them as the left endpoint. Absent on a fresh state (first step
  // bootstraps from the initial state's derivatives).
  std::optional<OscillatorDerivatives> prev_deriv;
};

struct ControlInputs {
  std::array<double, 6> mu{};     // amplitude commands, [-1, 1]
  std::array<double, 6> omega{};  // frequency commands, [-1, 1]
  double omega_m = 8.0 * kPi;     // current max frequency, rad/s
};

// mu in [-1,1] -> amplitude set-point in [mu_min, mu_max] (affine).
double map_amplitude_factor(double mu, const OscillatorParams& p);

// omega in [-1,1] -> theta rate in [omega_min, omega_m] (affine).
double map_frequency_factor(double omega, double omega_m, double omega_min = 0.0);

// ||z|| in [0,1] -> omega_m = (0.2 + 0.8 ||z||) * Omega.
double compute_omega_max(double skill_norm, double Omega);

// Time derivatives of the full 24-dim state under the given inputs.
OscillatorDerivatives derivatives(const OscillatorState& s, const ControlInputs& u,
                                  const OscillatorParams& p);

// One trapezoidal step of length p.dt (Heun's method): the stored previous
// derivatives give the left endpoint, the right endpoint is evaluated at the
// forward-Euler predictor state, and the new state stores that right
// endpoint for the next step.
OscillatorState step(const OscillatorState& s, const ControlInputs& u,
                     const OscillatorParams& p);

// Mixed phase per leg: phi_i = alpha_i + theta_i.
std::array<double, 6> mixed_phase(const OscillatorState& s);

// Canonical start state: amplitudes at the mu = 0 fixed point with zero
// rate, theta = 0, and the coupled phase set to the exact tripod lock
// (group {LF,RM,LH} at 0, group {RF,LM,RH} at -pi). Under CoupledTheta the
// lock pattern is placed on theta instead and alpha is zeroed.
OscillatorState default_state(const OscillatorParams& p);

// JSON snapshot with field names {r, v, theta, alpha}; from_json leaves
// prev_deriv empty so the next step re-bootstraps.
std::string state_to_json(const OscillatorState& s);
OscillatorState state_from_json(const std::string& text);

}  // namespace hexcpg
