#include <doctest.h>

#include <cstdint>
#include <vector>

#include "polyglue/rng.hpp"

using polyglue::RngStream;

TEST_CASE("identical (seed, stream) reproduces the sequence") {
  RngStream a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("distinct streams differ") {
  RngStream a(42, 0), b(42, 1);
  int same = 0;
  for (int i = 0; i < 64; ++i) same += (a.next_u64() == b.next_u64());
  CHECK(same == 0);
}

TEST_CASE("uniform_below stays in range and covers it") {
  RngStream rng(1, 0);
  std::vector<int> seen(10, 0);
  for (int i = 0; i < 10000; ++i) {
    const auto v = rng.uniform_below(10);
    REQUIRE(v < 10);
    ++seen[v];
  }
  for (const int c : seen) CHECK(c > 800);
}

TEST_CASE("uniform01 lies in [0,1) with mean near 1/2") {
  RngStream rng(3, 5);
  double acc = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    acc += u;
  }
  CHECK(acc / 100000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("poisson mean matches its rate") {
  RngStream rng(9, 2);
  double acc = 0.0;
  const int reps = 200000;
  for (int i = 0; i < reps; ++i) acc += static_cast<double>(rng.poisson(0.5));
  CHECK(acc / reps == doctest::Approx(0.5).epsilon(0.02));
}
