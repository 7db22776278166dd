#pragma once

#include <cmath>

#include "hexcpg/rng.hpp"

namespace hexcpg {

// Skill vector z in the closed unit disc. Its direction is the commanded
// movement direction; its norm scales the gait frequency.
struct SkillVector {
  double x = 0.0;
  double y = 0.0;
  double norm() const { return std::hypot(x, y); }
};

// Uniform sample over the unit disc via z = (sqrt(R) cos b, sqrt(R) sin b),
// R ~ U(0,1) drawn first, b ~ U(0, 2pi) second (draw order is pinned).
SkillVector sample_skill(RandomStream& rng);

// Gait frequency commanded by a skill: (0.2 + 0.8 ||z||) * Omega.
double skill_frequency(const SkillVector& z, double Omega);

}  // namespace hexcpg
