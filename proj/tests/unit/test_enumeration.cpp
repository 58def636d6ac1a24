#include <doctest.h>

#include <cmath>
#include <set>

#include "polyglue/combinatorics.hpp"
#include "polyglue/enumeration.hpp"
#include "polyglue/rng.hpp"
#include "polyglue/surface.hpp"

using namespace polyglue;

TEST_CASE("pairing enumeration visit counts are (2|P|-1)!!") {
  for (const std::uint32_t n : {1u, 2u, 3u, 4u, 5u}) {
    std::uint64_t visits = 0;
    enumerate_pairings(2 * n, [&](const Permutation&) { ++visits; });
    CHECK(mpz_class(static_cast<unsigned long>(visits)) == double_factorial_odd(n));
  }
  CHECK_THROWS(enumerate_pairings(Configuration({18}), [](const Permutation&) {}));
}

TEST_CASE("each pairing visited exactly once") {
  std::set<Permutation> seen;
  enumerate_pairings(6, [&](const Permutation& p) { CHECK(seen.insert(p).second); });
  CHECK(seen.size() == 15);
}

TEST_CASE("gluing law of the square by enumeration") {
  const auto law = exact_summary_law(Configuration({4}));
  // {V=3: 2/3, V=1: 1/3}
  REQUIRE(law.size() == 2);
  CHECK(law.at("3.1.2.0") == mpq_class(2, 3));
  CHECK(law.at("1.1.2.1") == mpq_class(1, 3));
}

TEST_CASE("connected fraction of {3,3} by enumeration") {
  std::uint64_t connected = 0, total = 0;
  const Configuration config({3, 3});
  enumerate_pairings(config, [&](const Permutation& pairing) {
    const auto [map, summary] = glue(config, pairing);
    connected += summary.connected();
    ++total;
  });
  CHECK(total == 15);
  CHECK(connected > 0);
}

TEST_CASE("connected permutation pair counts match the recursion") {
  const auto c = rooted_map_counts(3);
  CHECK(rooted_map_count_by_enumeration(1) == c[0]);  // 2
  CHECK(rooted_map_count_by_enumeration(2) == c[1]);  // 10
  CHECK(rooted_map_count_by_enumeration(3) == c[2]);  // 74
}

TEST_CASE("exact unicellular vertex laws") {
  {
    const auto law = exact_unicellular_vertex_law(1);
    REQUIRE(law.size() == 1);
    CHECK(law.at(2) == mpq_class(1));
  }
  {
    const auto law = exact_unicellular_vertex_law(2);
    CHECK(law.at(3) == mpq_class(2, 3));
    CHECK(law.at(1) == mpq_class(1, 3));
  }
  for (unsigned n = 1; n <= 5; ++n) {
    const auto law = exact_unicellular_vertex_law(n);
    mpq_class total(0);
    for (const auto& [v, p] : law) {
      // support is contained in {k : k = n+1 mod 2}
      CHECK(v % 2 == (n + 1) % 2);
      total += p;
    }
    CHECK(total == 1);
  }
}

TEST_CASE("unicellular exact mean matches Monte Carlo within 4 SE") {
  const unsigned n = 5;
  const auto law = exact_unicellular_vertex_law(n);
  double exact_mean = 0.0;
  for (const auto& [v, p] : law) exact_mean += static_cast<double>(v) * p.get_d();

  RngStream rng(31, 0);
  const Configuration config({2 * n});
  const int reps = 20000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < reps; ++i) {
    const auto [map, summary] = sample_gluing(config, rng);
    const auto v = static_cast<double>(summary.vertices());
    sum += v;
    sum_sq += v * v;
  }
  const double mc_mean = sum / reps;
  const double se = std::sqrt((sum_sq / reps - mc_mean * mc_mean) / reps);
  CHECK(std::abs(mc_mean - exact_mean) <= 4 * se);
}
