#pragma once

#include <cmath>

#include "hexcpg/oscillator.hpp"

namespace hexcpg::testing {

// Classical RK4 at a fine fixed step over the same vector field. Slow but
// accurate to ~h^4; serves as the independent reference the production
// trapezoidal integrator is held against.
inline OscillatorState rk4_advance(OscillatorState s, const ControlInputs& u,
                                   const OscillatorParams& p, double duration,
                                   double h = 1e-5) {
  const auto shifted = [](const OscillatorState& a, const OscillatorDerivatives& d,
                          double scale) {
    OscillatorState out = a;
    for (int i = 0; i < 6; ++i) {
      out.r[i] += scale * d.r[i];
      out.v[i] += scale * d.v[i];
      out.theta[i] += scale * d.theta[i];
      out.alpha[i] += scale * d.alpha[i];
    }
    return out;
  };
  const long n = std::lround(duration / h);
  for (long k = 0; k < n; ++k) {
    const OscillatorDerivatives k1 = derivatives(s, u, p);
    const OscillatorDerivatives k2 = derivatives(shifted(s, k1, h / 2.0), u, p);
    const OscillatorDerivatives k3 = derivatives(shifted(s, k2, h / 2.0), u, p);
    const OscillatorDerivatives k4 = derivatives(shifted(s, k3, h), u, p);
    for (int i = 0; i < 6; ++i) {
      s.r[i] += h / 6.0 * (k1.r[i] + 2.0 * k2.r[i] + 2.0 * k3.r[i] + k4.r[i]);
      s.v[i] += h / 6.0 * (k1.v[i] + 2.0 * k2.v[i] + 2.0 * k3.v[i] + k4.v[i]);
      s.theta[i] += h / 6.0 * (k1.theta[i] + 2.0 * k2.theta[i] + 2.0 * k3.theta[i] + k4.theta[i]);
      s.alpha[i] += h / 6.0 * (k1.alpha[i] + 2.0 * k2.alpha[i] + 2.0 * k3.alpha[i] + k4.alpha[i]);
    }
  }
  s.prev_deriv.reset();
  return s;
}

// Largest absolute difference across all 24 state components.
inline double state_distance(const OscillatorState& a, const OscillatorState& b) {
  double worst = 0.0;
  for (int i = 0; i < 6; ++i) {
    worst = std::max(worst, std::abs(a.r[i] - b.r[i]));
    worst = std::max(worst, std::abs(a.v[i] - b.v[i]));
    worst = std::max(worst, std::abs(a.theta[i] - b.theta[i]));
    worst = std::max(worst, std::abs(a.alpha[i] - b.alpha[i]));
  }
  return worst;
}

}  // namespace hexcpg::testing
