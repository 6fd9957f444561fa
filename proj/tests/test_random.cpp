#include "dinv/random.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace dinv;

TEST_CASE("stream is a pure function of (seed, stream, index)") {
  SeededStream a(42, 3), b(42, 3);
  for (int i = 0; i < 100; ++i) CHECK(a.next_bits() == b.next_bits());
  SeededStream c(42, 3);
  c.seek(50);
  CHECK(c.bits_at(50) == SeededStream(42, 3).bits_at(50));
  CHECK(c.normal() == SeededStream(42, 3).normal_at(50));
}

TEST_CASE("different seeds and streams differ") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 4; ++s)
    for (std::uint64_t k = 0; k < 4; ++k) seen.insert(SeededStream(s, k).bits_at(0));
  CHECK(seen.size() == 16);
  CHECK(SeededStream().seed() == SeededStream::kDefaultSeed);
}

TEST_CASE("uniforms lie in the open unit interval with the right moments") {
  SeededStream s(1);
  double sum = 0, sum2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sum2 += u * u;
  }
  CHECK(std::abs(sum / n - 0.5) < 4 * std::sqrt(1.0 / 12 / n));
  CHECK(std::abs(sum2 / n - 1.0 / 3) < 0.005);
}

TEST_CASE("normals have mean 0 and variance 1") {
  SeededStream s(2);
  double sum = 0, sum2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal();
    REQUIRE(std::isfinite(z));
    sum += z;
    sum2 += z * z;
  }
  CHECK(std::abs(sum / n) < 4 / std::sqrt(double(n)));
  CHECK(std::abs(sum2 / n - 1.0) < 4 * std::sqrt(2.0 / n));
}
