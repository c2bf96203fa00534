#include <doctest.h>

#include "mrz/rng.hpp"

using mrz::SplitMix64;

TEST_CASE("identical seeds yield identical streams") {
  SplitMix64 a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
}

TEST_CASE("mix is stateless and stable") {
  const std::uint64_t v = SplitMix64::mix(42, 7);
  CHECK(SplitMix64::mix(42, 7) == v);
  CHECK(SplitMix64::mix(42, 8) != v);
  CHECK(SplitMix64::mix(43, 7) != v);
}

TEST_CASE("derived streams do not collide for nearby indices") {
  SplitMix64 a = SplitMix64::stream(1, 0);
  SplitMix64 b = SplitMix64::stream(1, 1);
  int equal = 0;
  for (int i = 0; i < 64; ++i) {
    if (a.next() == b.next()) ++equal;
  }
  CHECK(equal == 0);
}

TEST_CASE("uniform draws stay in range") {
  SplitMix64 rng(9);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.next_double();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double e = rng.next_exponential();
    CHECK(e >= 0.0);
    CHECK(rng.next_below(17) < 17);
  }
}
