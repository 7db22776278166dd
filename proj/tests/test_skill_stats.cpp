#include <cmath>
#include <fstream>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "hexcpg/rng.hpp"
#include "hexcpg/skill.hpp"
#include "hexcpg/stats.hpp"
#include "hexcpg/vec.hpp"

using namespace hexcpg;

namespace {

nlohmann::json load_fixtures() {
  std::ifstream f(std::string(TEST_DATA_DIR) + "/reward_fixtures.json");
  REQUIRE(f.good());
  return nlohmann::json::parse(f);
}

}  // namespace

TEST_CASE("splitmix64 mix matches the published vectors") {
  // first two outputs of the splitmix64 sequence seeded with 0
  CHECK(RandomStream::splitmix64(0) == 0xe220a8397b1dcdafULL);
  CHECK(RandomStream::splitmix64(0x9e3779b97f4a7c15ULL) == 0x6e789e6aa1b965f4ULL);
}

TEST_CASE("streams are deterministic and split streams are decoupled") {
  RandomStream a(77), b(77);
  for (int k = 0; k < 100; ++k) CHECK(a.uniform() == b.uniform());

  RandomStream root(77);
  RandomStream s1 = root.split(1);
  RandomStream s1_again = RandomStream(77).split(1);
  RandomStream s2 = root.split(2);
  CHECK(s1.uniform() == s1_again.uniform());
  CHECK(s1.uniform() != s2.uniform());

  // splitting does not consume from the parent
  RandomStream c(77);
  (void)c.split(9);
  RandomStream d(77);
  CHECK(c.uniform() == d.uniform());
}

TEST_CASE("uniform stays in range and uses 53-bit resolution") {
  RandomStream rng(5);
  double lo = 1.0, hi = 0.0;
  for (int k = 0; k < 20000; ++k) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo < 0.01);
  CHECK(hi > 0.99);
  const double x = rng.uniform(-3.0, 5.0);
  CHECK(x >= -3.0);
  CHECK(x < 5.0);
}

TEST_CASE("skill sampling pins its draw order: radius first, angle second") {
  RandomStream a(31415), b(31415);
  const SkillVector z = sample_skill(a);
  const double R = b.uniform();
  const double beta = b.uniform(0.0, 2.0 * kPi);
  CHECK(z.x == std::sqrt(R) * std::cos(beta));
  CHECK(z.y == std::sqrt(R) * std::sin(beta));
}

TEST_CASE("skill samples are uniform on the unit disc") {
  RandomStream rng(6021023);
  const int n = 200000;
  std::vector<SkillVector> samples;
  samples.reserve(n);
  double mean_norm = 0.0;
  int in_half = 0;
  for (int k = 0; k < n; ++k) {
    samples.push_back(sample_skill(rng));
    const double r = samples.back().norm();
    CHECK(r <= 1.0);
    mean_norm += r;
    if (r <= 0.5) ++in_half;
  }
  mean_norm /= n;
  CHECK(std::abs(mean_norm - 2.0 / 3.0) < 0.005);
  CHECK(std::abs(static_cast<double>(in_half) / n - 0.25) < 0.005);
  const ChiSquareResult res = disc_uniformity_chi_square(samples, 8, 8);
  CHECK(res.dof == 63);
  CHECK(res.p_value > 1e-3);
}

TEST_CASE("the uniformity test rejects a biased sampler") {
  RandomStream rng(99);
  std::vector<SkillVector> biased;
  for (int k = 0; k < 20000; ++k) {
    SkillVector z = sample_skill(rng);
    z.x = std::abs(z.x);  // fold onto the right half-disc
    biased.push_back(z);
  }
  CHECK(disc_uniformity_chi_square(biased, 8, 8).p_value < 1e-6);
}

TEST_CASE("skill frequency scales between a fifth and the full rate") {
  const double Omega = 8.0 * kPi;
  CHECK(skill_frequency({0.0, 0.0}, Omega) == doctest::Approx(0.2 * Omega).epsilon(1e-15));
  CHECK(skill_frequency({1.0, 0.0}, Omega) == doctest::Approx(Omega).epsilon(1e-15));
  CHECK(skill_frequency({0.6, 0.8}, Omega) == doctest::Approx(Omega).epsilon(1e-14));
}

TEST_CASE("regularized gamma tail matches the frozen references") {
  const nlohmann::json fx = load_fixtures();
  for (const auto& c : fx.at("gamma_q")) {
    const double got = regularized_gamma_q(c.at("a"), c.at("x"));
    CHECK(std::abs(got - c.at("want").get<double>()) < 1e-12);
  }
}

TEST_CASE("chi-square survival function analytic cases") {
  // dof 2: P(X >= x) = exp(-x/2)
  CHECK(chi_square_p_value(3.0, 2) == doctest::Approx(std::exp(-1.5)).epsilon(1e-12));
  CHECK(chi_square_p_value(0.0, 5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(chi_square_p_value(1000.0, 3) < 1e-12);
}

TEST_CASE("angle wrapping lands in the half-open principal interval") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(kPi) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(wrap_angle(-kPi) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(wrap_angle(2.5 * kPi) == doctest::Approx(0.5 * kPi).epsilon(1e-12));
  CHECK(wrap_angle(-7.0 * kPi) == doctest::Approx(kPi).epsilon(1e-12));
}
