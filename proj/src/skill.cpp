#include "hexcpg/skill.hpp"

#include "hexcpg/oscillator.hpp"
#include "hexcpg/vec.hpp"

namespace hexcpg {

std::uint64_t RandomStream::splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

double RandomStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::uint64_t RandomStream::next_u64() { return engine_(); }

RandomStream RandomStream::split(std::uint64_t stream_id) const {
  return RandomStream(splitmix64(seed_ ^ splitmix64(stream_id + 0x5851f42d4c957f2dULL)));
}

SkillVector sample_skill(RandomStream& rng) {
  const double radius_sq = rng.uniform();
  const double angle = rng.uniform() * 2.0 * kPi;
  const double r = std::sqrt(radius_sq);
  return SkillVector{r * std::cos(angle), r * std::sin(angle)};
}

double skill_frequency(const SkillVector& z, double Omega) {
  return compute_omega_max(z.norm(), Omega);
}

}  // namespace hexcpg
