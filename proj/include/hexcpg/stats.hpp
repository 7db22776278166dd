#pragma once

#include <span>

#include "hexcpg/skill.hpp"

namespace hexcpg {

// Upper regularized incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a),
// a > 0, x >= 0. Series expansion for x < a + 1, Lentz continued fraction
// otherwise; absolute error well below 1e-12 in the range used here.
double regularized_gamma_q(double a, double x);

// Survival function of the chi-square distribution: P(X >= stat).
double chi_square_p_value(double stat, int dof);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

// Goodness-of-fit of samples against the uniform distribution on the unit
// disc, using an equal-probability polar grid: radial cut points at
// sqrt(k / radial_bins) and uniform angular sectors.
ChiSquareResult disc_uniformity_chi_square(std::span<const SkillVector> samples,
                                           int radial_bins, int angular_bins);

}  // namespace hexcpg
