#include "hexcpg/stats.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hexcpg/vec.hpp"

namespace hexcpg {

namespace {

double gamma_q_series(double a, double x) {
  // 1 - P(a,x) with P via the power series around x = 0.
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < 500; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  const double p = sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  return 1.0 - p;
}

double gamma_q_cf(double a, double x) {
  // Modified Lentz continued fraction for Q(a,x).
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("regularized_gamma_q domain");
  if (x == 0.0) return 1.0;
  return x < a + 1.0 ? gamma_q_series(a, x) : gamma_q_cf(a, x);
}

double chi_square_p_value(double stat, int dof) {
  if (dof <= 0) throw std::invalid_argument("chi-square dof must be positive");
  if (stat <= 0.0) return 1.0;
  return regularized_gamma_q(0.5 * dof, 0.5 * stat);
}

ChiSquareResult disc_uniformity_chi_square(std::span<const SkillVector> samples,
                                           int radial_bins, int angular_bins) {
  if (radial_bins < 1 || angular_bins < 1)
    throw std::invalid_argument("disc_uniformity_chi_square needs positive bin counts");
  std::vector<std::size_t> counts(static_cast<std::size_t>(radial_bins) * angular_bins, 0);
  for (const auto& z : samples) {
    const double r2 = z.x * z.x + z.y * z.y;
    // radius^2 is uniform on [0,1], so equal-probability radial cells are
    // uniform cuts of r^2.
    int ri = static_cast<int>(r2 * radial_bins);
    if (ri >= radial_bins) ri = radial_bins - 1;
    double ang = std::atan2(z.y, z.x);
    if (ang < 0.0) ang += 2.0 * kPi;
    int ai = static_cast<int>(ang / (2.0 * kPi) * angular_bins);
    if (ai >= angular_bins) ai = angular_bins - 1;
    ++counts[static_cast<std::size_t>(ri) * angular_bins + ai];
  }
  const double expected =
      static_cast<double>(samples.size()) / (static_cast<double>(radial_bins) * angular_bins);
  ChiSquareResult res;
  res.dof = radial_bins * angular_bins - 1;
  for (std::size_t c : counts) {
    const double diff = static_cast<double>(c) - expected;
    res.statistic += diff * diff / expected;
  }
  res.p_value = chi_square_p_value(res.statistic, res.dof);
  return res;
}

}  // namespace hexcpg
