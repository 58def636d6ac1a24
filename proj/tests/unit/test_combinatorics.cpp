#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "polyglue/combinatorics.hpp"
#include "polyglue/rng.hpp"

using namespace polyglue;

TEST_CASE("double factorial of odd numbers") {
  CHECK(double_factorial_odd(1) == 1);              // empty product base
  CHECK(double_factorial_odd(3) == 15);             // 1*3*5
  CHECK(double_factorial_odd(7) == 135135);         // 1*3*...*13
  CHECK_THROWS(double_factorial_odd(0));
}

TEST_CASE("rooted map counts from the recursion") {
  const auto c = rooted_map_counts(4);
  REQUIRE(c.size() == 4);
  CHECK(c[0] == 2);
  CHECK(c[1] == 10);
  CHECK(c[2] == 74);
  CHECK(c[3] == 706);
}

TEST_CASE("connected pair fraction small cases") {
  CHECK(connected_pair_fraction(1) == mpq_class(1));
  CHECK(connected_pair_fraction(2) == mpq_class(5, 6));
}

TEST_CASE("connected pair fraction asymptotics and monotonicity") {
  // Not monotone at the very start: 5/6 > 37/45, so the non-decreasing run
  // begins at n = 3.
  CHECK(connected_pair_fraction(3) < connected_pair_fraction(2));
  mpq_class previous(0);
  for (unsigned n = 3; n <= 100; ++n) {
    const mpq_class frac = connected_pair_fraction(n);
    CHECK(frac > 0);
    CHECK(frac <= 1);
    CHECK(frac >= previous);
    previous = frac;
    if (n >= 10) {
      // |frac - (1 - 1/2n)| <= 3/n^2, exact rational comparison
      const mpq_class target(2 * n - 1, 2 * n);
      const mpq_class diff = abs(frac - target);
      CHECK(diff * n * n <= 3);
    }
  }
}

TEST_CASE("cycle type sampler: m=1 and m=2 laws") {
  RngStream rng(11, 0);
  {
    const auto part = sample_cycle_type(1, rng);
    CHECK(part.parts == std::vector<std::uint64_t>{1});
    CHECK(part.total == 1);
  }
  int singles = 0;
  const int reps = 100000;
  double parts_sum = 0;
  for (int i = 0; i < reps; ++i) {
    const auto part = sample_cycle_type(2, rng);
    CHECK(part.parts[0] + (part.parts.size() > 1 ? part.parts[1] : 0) == 2);
    singles += (part.parts.size() == 1);
    parts_sum += static_cast<double>(part.parts.size());
  }
  // {2} w.p. 1/2, {1,1} w.p. 1/2; E[#parts] = 1.5 = H_2
  CHECK(static_cast<double>(singles) / reps == doctest::Approx(0.5).epsilon(0.02));
  CHECK(parts_sum / reps == doctest::Approx(1.5).epsilon(0.01));
}

TEST_CASE("cycle type sampler: mean part count is H_m within 3 SE") {
  RngStream rng(12, 0);
  const int reps = 100000;
  const int m = 100;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < reps; ++i) {
    const auto parts = sample_cycle_type(m, rng);
    std::uint64_t total = 0;
    for (const auto p : parts.parts) total += p;
    REQUIRE(total == m);
    const auto k = static_cast<double>(parts.parts.size());
    sum += k;
    sum_sq += k * k;
  }
  double harmonic = 0.0;
  for (int i = 1; i <= m; ++i) harmonic += 1.0 / i;
  const double mean = sum / reps;
  const double var = sum_sq / reps - mean * mean;
  const double se = std::sqrt(var / reps);
  CHECK(std::abs(mean - harmonic) <= 3 * se);
}

TEST_CASE("pairing sampler validity and tiny laws") {
  RngStream rng(13, 0);
  CHECK_THROWS(sample_pairing(3, rng));
  {
    const auto p = sample_pairing(2, rng);
    CHECK(p == std::vector<std::uint32_t>{1, 0});
  }
  // m=4: three pairings, each w.p. 1/3 (chi-square at the 1% level below is
  // exercised in the stats tests; here a plain 5-sigma band).
  std::map<std::vector<std::uint32_t>, int> counts;
  const int reps = 100000;
  for (int i = 0; i < reps; ++i) counts[sample_pairing(4, rng)] += 1;
  REQUIRE(counts.size() == 3);
  for (const auto& [pairing, c] : counts) {
    CHECK(c > reps / 3 - 5 * 150);
    CHECK(c < reps / 3 + 5 * 150);
  }
}

TEST_CASE("pairing sampler covers all 15 pairings of m=6") {
  RngStream rng(14, 0);
  std::map<std::vector<std::uint32_t>, int> counts;
  for (int i = 0; i < 10000; ++i) counts[sample_pairing(6, rng)] += 1;
  CHECK(counts.size() == 15);  // 5!! = 15
}

TEST_CASE("stick breaking respects mass conservation and ordering") {
  RngStream rng(15, 0);
  for (int i = 0; i < 1000; ++i) {
    const auto sticks = sample_pd1(rng, 1e-6);
    double total = sticks.residual_mass;
    for (std::size_t j = 0; j < sticks.sticks.size(); ++j) {
      CHECK(sticks.sticks[j] > 0.0);
      if (j > 0) CHECK(sticks.sticks[j] <= sticks.sticks[j - 1]);
      total += sticks.sticks[j];
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sticks.residual_mass < 1e-6);
  }
}

TEST_CASE("poisson parity pmf: wrong parity, normalization, known value") {
  CHECK(poisson_parity_pmf(2.0, Parity::kOdd, 4) == 0.0);
  // (lambda=1, odd, k=1) -> 1 / (1! sinh 1)
  CHECK(poisson_parity_pmf(1.0, Parity::kOdd, 1) ==
        doctest::Approx(1.0 / std::sinh(1.0)).epsilon(1e-12));
  for (const double lambda : {0.5, std::log(1e4)}) {
    for (const Parity parity : {Parity::kOdd, Parity::kEven}) {
      double total = 0.0;
      for (std::uint64_t k = 0; k < 200; ++k)
        total += poisson_parity_pmf(lambda, parity, k);
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}
