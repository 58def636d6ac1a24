#include <doctest.h>

#include <map>

#include "polyglue/configmodel.hpp"
#include "polyglue/enumeration.hpp"
#include "polyglue/rng.hpp"

using namespace polyglue;

TEST_CASE("degree sequence validation") {
  CHECK_THROWS(DegreeSequence{{1, 2}}.validate());  // odd sum
  CHECK_THROWS(DegreeSequence{{}}.validate());
  CHECK_THROWS(DegreeSequence{{0, 2}}.validate());
  DegreeSequence{{2, 2}}.validate();
}

TEST_CASE("config model tiny laws") {
  RngStream rng(51, 0);
  {
    // [1,1]: a single edge.
    const MultiGraph g = sample_config_model(DegreeSequence{{1, 1}}, rng);
    CHECK(g.vertex_count() == 2);
    CHECK(g.multiplicity(0, 1) == 1);
    CHECK(diameter(g) == 1);
  }
  {
    // [2]: one loop, [1,1] = 2.
    const MultiGraph g = sample_config_model(DegreeSequence{{2}}, rng);
    CHECK(g.vertex_count() == 1);
    CHECK(g.multiplicity(0, 0) == 2);
    CHECK(diameter(g) == 0);
  }
  {
    // [2,2]: double edge w.p. 2/3, two loops w.p. 1/3.
    int double_edge = 0;
    const int reps = 30000;
    for (int i = 0; i < reps; ++i) {
      const MultiGraph g = sample_config_model(DegreeSequence{{2, 2}}, rng);
      double_edge += (g.multiplicity(0, 1) == 2);
    }
    CHECK(static_cast<double>(double_edge) / reps ==
          doctest::Approx(2.0 / 3).epsilon(0.02));
  }
}

TEST_CASE("diameter edge cases") {
  {
    // Two isolated loops: disconnected.
    MultiGraph g;
    g.degrees = {2, 2};
    g.edges[{0, 0}] = 2;
    g.edges[{1, 1}] = 2;
    CHECK(!diameter(g).has_value());
  }
  {
    // Path of three vertices: diameter 2; loops and multi-edges ignored.
    MultiGraph g;
    g.degrees = {4, 2, 1};
    g.edges[{0, 1}] = 2;
    g.edges[{1, 2}] = 1;
    g.edges[{0, 0}] = 2;
    CHECK(diameter(g) == 2);
  }
}

TEST_CASE("diameter is invariant under loop multiplicity changes") {
  RngStream rng(52, 0);
  for (int rep = 0; rep < 300; ++rep) {
    const auto parts = sample_cycle_type(40, rng);
    DegreeSequence degrees;
    degrees.degrees.assign(parts.parts.begin(), parts.parts.end());
    MultiGraph g = sample_config_model(degrees, rng);
    const auto base = diameter(g);
    for (std::uint32_t v = 0; v < g.vertex_count(); ++v) g.edges[{v, v}] += 2;
    CHECK(diameter(g) == base);
  }
}

TEST_CASE("duality bridge: dual gluing law equals config model law, exactly") {
  // Graph(dual(glue(P, uniform))) is a configuration model with degrees P:
  // the pairings coincide, so the two outcome laws agree pairing by pairing.
  const std::vector<std::uint32_t> perimeters{3, 2, 1};
  const Configuration config(perimeters);

  auto graph_key = [](const MultiGraph& g) {
    std::string key;
    for (const auto d : g.degrees) key += std::to_string(d) + ";";
    for (const auto& [edge, count] : g.edges)
      key += std::to_string(edge.first) + "," + std::to_string(edge.second) + "=" +
             std::to_string(count) + ";";
    return key;
  };

  std::map<std::string, int> dual_law;
  std::uint64_t total = 0;
  enumerate_pairings(config, [&](const Permutation& pairing) {
    const auto [map, summary] = glue(config, pairing);
    dual_law[graph_key(graph_of(dual(map)))] += 1;
    ++total;
  });

  // The same enumeration drives the configuration model by hand: vertex of
  // each leg is the polygon owning that side label.
  DegreeSequence degrees{perimeters};
  std::map<std::string, int> config_law;
  enumerate_pairings(static_cast<std::uint32_t>(degrees.sum()),
                     [&](const Permutation& pairing) {
                       std::vector<std::uint32_t> vertex_of_leg{0, 0, 0, 1, 1, 2};
                       MultiGraph g;
                       g.degrees = {3, 2, 1};
                       for (Dart l = 0; l < 6; ++l) {
                         const Dart p = pairing[l];
                         if (p < l) continue;
                         std::uint32_t i = vertex_of_leg[l];
                         std::uint32_t j = vertex_of_leg[p];
                         if (i > j) std::swap(i, j);
                         g.edges[{i, j}] += (i == j) ? 2 : 1;
                       }
                       config_law[graph_key(g)] += 1;
                     });

  CHECK(total == 15);
  CHECK(dual_law == config_law);
}

TEST_CASE("xi limit model: A=0 gives 0, small runs are monotone in A") {
  {
    LimitModelParams params;
    params.degree_cutoff = 0;
    params.replicas = 10;
    CHECK(xi_limit_model(params).estimate == 0.0);
  }
  {
    LimitModelParams params;
    params.degree_cutoff = 40;
    params.replicas = 4000;
    params.seed = 7;
    const XiEstimate est = xi_limit_model(params);
    REQUIRE(est.sensitivity.size() >= 4);
    double previous = -1.0;
    for (const auto& [a, value] : est.sensitivity) {
      CHECK(value >= previous);  // shared draws make this deterministic
      previous = value;
    }
    CHECK(est.estimate > 0.1);
    CHECK(est.estimate < 0.5);
  }
}

TEST_CASE("diameter experiment at n=2 matches enumeration, chi-square") {
  // Exact law: mix over cycle types of S_4 (weights 1/4!) of the leg-pairing
  // law. Categories: diameter values and disconnection.
  // Cycle types of S_4: [4]x6, [3,1]x8, [2,2]x3, [2,1,1]x6, [1,1,1,1]x1.
  std::map<std::string, double> exact;
  const std::vector<std::pair<std::vector<std::uint32_t>, int>> types = {
      {{4}, 6}, {{3, 1}, 8}, {{2, 2}, 3}, {{2, 1, 1}, 6}, {{1, 1, 1, 1}, 1}};
  for (const auto& [degs, count] : types) {
    std::uint64_t total = 0;
    std::map<std::string, std::uint64_t> outcomes;
    std::vector<std::uint32_t> vertex_of_leg;
    for (std::uint32_t v = 0; v < degs.size(); ++v)
      for (std::uint32_t i = 0; i < degs[v]; ++i) vertex_of_leg.push_back(v);
    enumerate_pairings(4, [&](const Permutation& pairing) {
      MultiGraph g;
      g.degrees.assign(degs.begin(), degs.end());
      std::sort(g.degrees.begin(), g.degrees.end(), std::greater<std::uint64_t>());
      for (Dart l = 0; l < 4; ++l) {
        const Dart p = pairing[l];
        if (p < l) continue;
        std::uint32_t i = vertex_of_leg[l];
        std::uint32_t j = vertex_of_leg[p];
        if (i > j) std::swap(i, j);
        g.edges[{i, j}] += (i == j) ? 2 : 1;
      }
      const auto d = diameter(g);
      outcomes[d.has_value() ? std::to_string(*d) : "inf"] += 1;
      ++total;
    });
    for (const auto& [key, c] : outcomes)
      exact[key] += (static_cast<double>(count) / 24.0) *
                    (static_cast<double>(c) / static_cast<double>(total));
  }

  const DiameterHistogram hist = diameter_experiment(2, 100000, /*seed=*/5);
  const std::vector<std::uint64_t> observed = {hist.count_0, hist.count_1,
                                               hist.count_2,
                                               hist.count_disconnected};
  const std::vector<double> expected = {exact["0"], exact["1"], exact["2"],
                                        exact["inf"]};
  double mass = 0.0;
  for (const auto e : expected) mass += e;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(hist.count_3 == 0);
  CHECK(hist.count_4_plus == 0);
  const ChiSquareResult chi = chi_square(observed, expected);
  CHECK(chi.p_value > 0.01);
}
