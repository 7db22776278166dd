#pragma once

#include <array>

#include "hexcpg/vec.hpp"

namespace hexcpg {

// Allowed band for each morphological parameter (min, max).
struct MorphRanges {
  Vec2 l{-0.12, 0.12};   // step length, m (sign sets walking direction)
  Vec2 h{0.02, 0.08};    // body height, m
  Vec2 g_p{0.03, 0.06};  // ground penetration depth, m
  Vec2 g_c{0.04, 0.08};  // ground clearance, m
  Vec2 w_y{1.1, 1.5};    // lateral width multiplier

  void validate() const;  // throws ConfigError on an inverted band
};

// Morphological parameters m_p. Defaults are sized so that the whole foot
// trajectory stays reachable for the default leg geometry at any amplitude.
struct MorphParams {
  double l = 0.03;
  double h = 0.05;
  double g_p = 0.03;
  double g_c = 0.04;
  double w_y = 1.1;

  std::array<double, 5> as_array() const { return {l, h, g_p, g_c, w_y}; }
  // Throws ConfigError when a value lies outside `r`.
  void validate(const MorphRanges& r) const;
};

// Incremental morph update: each parameter moves by 2% of its band per unit
// of delta (delta components are expected in [-1, 1]) and is then clamped
// into the band.
MorphParams apply_morph_delta(const MorphParams& m, const std::array<double, 5>& delta,
                              const MorphRanges& ranges);

// Mount of a leg base on the body: position and yaw in the body frame.
// Yaw 0 means the leg-local frame is axis-aligned with the body frame.
struct MountPose {
  double x = 0.0, y = 0.0, yaw = 0.0;
};

// 3R leg: coxa yaw (j0, about z) then two pitch joints (j1 femur, j2 tibia,
// about the local y axis; positive pitch raises the foot). All-zero angles
// put the leg straight and horizontal along leg-frame +x at full extension
// (l1 + l2 + l3, 0, 0).
struct LegGeometry {
  double l1 = 0.04;  // coxa length, m
  double l2 = 0.06;  // femur length, m
  double l3 = 0.08;  // tibia length, m
  MountPose mount;

  double L() const { return l1 + l2; }  // lateral scale used by the pose map
  void validate() const;                // throws ConfigError on a non-positive link
};

// Foot position in the leg-local frame (x forward, y outward, z up), m.
struct FootPosition {
  double x = 0.0, y = 0.0, z = 0.0;
};

// Joint angles, rad. The IK solver returns the knee-down branch
// (tibia folded under the femur, j2 <= 0).
struct JointAngles {
  double j0 = 0.0, j1 = 0.0, j2 = 0.0;
};

inline constexpr double kDefaultJointLimit = kPi / 2.0;
bool within_joint_limits(const JointAngles& q, double limit = kDefaultJointLimit);

// Rhythm-to-pose map. Given a leg's amplitude r and mixed phase phi:
//   x = -l (r - 1) cos(phi)
//   y = L w_y
//   z = -h + g_c sin(phi)  while sin(phi) > 0 (swing)
//       -h + g_p sin(phi)  otherwise          (stance)
FootPosition foot_position(double r, double phi, const MorphParams& m, const LegGeometry& g);

// Closed-form forward kinematics of the 3R chain, leg-local frame.
FootPosition forward_kinematics(const JointAngles& q, const LegGeometry& g);

// Closed-form inverse kinematics, knee-down branch. Throws Unreachable when
// the planar distance from the femur joint to the target (after removing
// coxa yaw and the coxa link) lies outside [|l2 - l3|, l2 + l3].
JointAngles inverse_kinematics(const FootPosition& p, const LegGeometry& g);

// Same solve, but first radially clamps the planar target into the
// reachable band (used by the simulator so extreme morph commands degrade
// gracefully instead of faulting). Sets *clamped when clamping happened.
JointAngles inverse_kinematics_clamped(const FootPosition& p, const LegGeometry& g,
                                       bool* clamped = nullptr);

}  // namespace hexcpg
