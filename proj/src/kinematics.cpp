#include "hexcpg/kinematics.hpp"

#include <algorithm>
#include <cmath>

#include "hexcpg/errors.hpp"

namespace hexcpg {

void MorphRanges::validate() const {
  auto check = [](const Vec2& band, const char* name) {
    if (!(band[1] > band[0]))
      throw ConfigError("range max must exceed min", std::string("morph_ranges.") + name);
  };
  check(l, "l");
  check(h, "h");
  check(g_p, "g_p");
  check(g_c, "g_c");
  check(w_y, "w_y");
}

void MorphParams::validate(const MorphRanges& r) const {
  auto check = [](double v, const Vec2& band, const char* name) {
    if (v < band[0] - 1e-12 || v > band[1] + 1e-12)
      throw ConfigError("value outside allowed range", std::string("morph.") + name);
  };
  check(l, r.l, "l");
  check(h, r.h, "h");
  check(g_p, r.g_p, "g_p");
  check(g_c, r.g_c, "g_c");
  check(w_y, r.w_y, "w_y");
}

MorphParams apply_morph_delta(const MorphParams& m, const std::array<double, 5>& delta,
                              const MorphRanges& ranges) {
  auto move = [](double v, double d, const Vec2& band) {
    v += 0.02 * (band[1] - band[0]) * d;
    return std::clamp(v, band[0], band[1]);
  };
  MorphParams out = m;
  out.l = move(m.l, delta[0], ranges.l);
  out.h = move(m.h, delta[1], ranges.h);
  out.g_p = move(m.g_p, delta[2], ranges.g_p);
  out.g_c = move(m.g_c, delta[3], ranges.g_c);
  out.w_y = move(m.w_y, delta[4], ranges.w_y);
  return out;
}

void LegGeometry::validate() const {
  if (!(l1 > 0.0)) throw ConfigError("link length must be > 0", "geometry.l1");
  if (!(l2 > 0.0)) throw ConfigError("link length must be > 0", "geometry.l2");
  if (!(l3 > 0.0)) throw ConfigError("link length must be > 0", "geometry.l3");
}

bool within_joint_limits(const JointAngles& q, double limit) {
  return std::abs(q.j0) <= limit && std::abs(q.j1) <= limit && std::abs(q.j2) <= limit;
}

FootPosition foot_position(double r, double phi, const MorphParams& m, const LegGeometry& g) {
  FootPosition p;
  const double s = std::sin(phi);
  p.x = -m.l * (r - 1.0) * std::cos(phi);
  p.y = g.L() * m.w_y;
  p.z = -m.h + (s > 0.0 ? m.g_c : m.g_p) * s;
  return p;
}

FootPosition forward_kinematics(const JointAngles& q, const LegGeometry& g) {
  const double radial = g.l1 + g.l2 * std::cos(q.j1) + g.l3 * std::cos(q.j1 + q.j2);
  FootPosition p;
  p.x = std::cos(q.j0) * radial;
  p.y = std::sin(q.j0) * radial;
  p.z = g.l2 * std::sin(q.j1) + g.l3 * std::sin(q.j1 + q.j2);
  return p;
}

namespace {

JointAngles planar_solve(double j0, double pr, double pz, const LegGeometry& g) {
  // Two-link solve in the leg's pitch plane, knee-down branch (j2 <= 0).
  const double d2 = pr * pr + pz * pz;
  double D = (d2 - g.l2 * g.l2 - g.l3 * g.l3) / (2.0 * g.l2 * g.l3);
  D = std::clamp(D, -1.0, 1.0);
  JointAngles q;
  q.j0 = j0;
  q.j2 = -std::acos(D);
  q.j1 = std::atan2(pz, pr) - std::atan2(g.l3 * std::sin(q.j2), g.l2 + g.l3 * std::cos(q.j2));
  return q;
}

}  // namespace

JointAngles inverse_kinematics(const FootPosition& p, const LegGeometry& g) {
  const double j0 = std::atan2(p.y, p.x);
  const double pr = std::hypot(p.x, p.y) - g.l1;
  const double d = std::hypot(pr, p.z);
  const double lo = std::abs(g.l2 - g.l3);
  const double hi = g.l2 + g.l3;
  const double tol = 1e-12 * hi;
  if (d < lo - tol || d > hi + tol) throw Unreachable(d, lo, hi);
  return planar_solve(j0, pr, p.z, g);
}

JointAngles inverse_kinematics_clamped(const FootPosition& p, const LegGeometry& g,
                                       bool* clamped) {
  const double j0 = std::atan2(p.y, p.x);
  double pr = std::hypot(p.x, p.y) - g.l1;
  double pz = p.z;
  const double d = std::hypot(pr, pz);
  const double margin = 1e-9;
  const double lo = std::abs(g.l2 - g.l3) + margin;
  const double hi = g.l2 + g.l3 - margin;
  bool did = false;
  if (d < 1e-15) {
    // Target sits on the femur joint: direction undefined, push straight out.
    pr = lo;
    pz = 0.0;
    did = true;
  } else if (d < lo) {
    const double s = lo / d;
    pr *= s;
    pz *= s;
    did = true;
  } else if (d > hi) {
    const double s = hi / d;
    pr *= s;
    pz *= s;
    did = true;
  }
  if (clamped) *clamped = did;
  return planar_solve(j0, pr, pz, g);
}

}  // namespace hexcpg
