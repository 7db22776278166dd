#pragma once

#include <cstdint>
#include <random>

namespace hexcpg {

// Deterministic random stream, identical across platforms.
//
// Algorithm (pinned, do not change without bumping log schema version):
//   * engine: std::mt19937_64 seeded via one splitmix64 round of the seed,
//   * uniform doubles: top 53 bits of one engine draw, i.e. (x >> 11) * 2^-53,
//     giving values in [0, 1).
// std::uniform_real_distribution is deliberately avoided: its draw sequence
// is implementation-defined and would break byte-identical logs.
//
// split(id) derives an independent child stream from the *root* seed and the
// id only, so child streams do not depend on how much the parent has drawn.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  double uniform();                        // [0, 1)
  double uniform(double lo, double hi);    // [lo, hi)
  std::uint64_t next_u64();

  RandomStream split(std::uint64_t stream_id) const;
  std::uint64_t seed() const { return seed_; }

  static std::uint64_t splitmix64(std::uint64_t x);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace hexcpg
