#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "polyglue/enumeration.hpp"
#include "polyglue/experiments.hpp"
#include "polyglue/peeling.hpp"
#include "polyglue/rng.hpp"
#include "polyglue/surface.hpp"

using namespace polyglue;

namespace {

Configuration random_config(RngStream& rng, std::uint32_t max_n) {
  const std::uint32_t n = 1 + static_cast<std::uint32_t>(rng.uniform_below(max_n));
  std::uint32_t remaining = 2 * n;
  std::vector<std::uint32_t> perimeters;
  while (remaining > 0) {
    const auto p = 1 + static_cast<std::uint32_t>(rng.uniform_below(remaining));
    perimeters.push_back(p);
    remaining -= p;
  }
  return Configuration(perimeters);
}

// Presampled run following an explicit pairing, checking the structural
// invariants after every step.
MapSummary peel_with_pairing(const Configuration& config, const Permutation& alpha,
                             PeelStrategy& strategy, bool check_each_step) {
  SurfaceState state(config, strategy.needs_hole_min());
  if (strategy.needs_red()) {
    auto* aux = strategy.aux_rng();
    state.init_red(state.boundary_dart(aux->uniform_below(state.boundary_size())));
  }
  std::uint32_t previous_holes = state.hole_count();
  while (!state.done()) {
    const Dart a = strategy.choose(state);
    const Dart b = alpha[a];
    const PeelEvent ev = state.peel(a, b);
    if (ev.red_swallowed && strategy.needs_red() && !state.done()) {
      auto* aux = strategy.aux_rng();
      state.resample_red(state.boundary_dart(aux->uniform_below(state.boundary_size())));
    }
    // |boundary| = 2n - 2i and the hole-count increments
    CHECK(state.boundary_size() == 2 * state.n() - 2 * state.step());
    const std::int32_t dh = static_cast<std::int32_t>(state.hole_count()) -
                            static_cast<std::int32_t>(previous_holes);
    CHECK(dh >= -2);
    CHECK(dh <= 1);
    if (dh >= 0) CHECK(ev.same_hole);
    const bool closure = ev.kind == PeelKind::kStrongClosure ||
                         ev.kind == PeelKind::kWeakClosure ||
                         ev.kind == PeelKind::kLoopClosure ||
                         ev.kind == PeelKind::kBigonClosure ||
                         ev.kind == PeelKind::kLoopLoopMerge;
    CHECK(closure == (ev.vertices_created >= 1));
    previous_holes = state.hole_count();
    if (check_each_step) state.check_invariants();
  }
  const MapSummary summary = state.final_summary();
  CHECK(state.true_vertices() == summary.vertices());  // X_n = V
  return summary;
}

}  // namespace

TEST_CASE("initial state examples") {
  {
    SurfaceState s(Configuration({3, 5}));
    CHECK(s.hole_count() == 2);
    CHECK(s.boundary_size() == 8);
    CHECK(s.loop_hole_count() == 0);
  }
  {
    SurfaceState s(Configuration({1, 1}));
    CHECK(s.hole_count() == 2);
    CHECK(s.loop_hole_count() == 2);
  }
  {
    SurfaceState s(Configuration({2}));
    CHECK(s.hole_count() == 1);
    CHECK(s.bigon_hole_count() == 1);
    CHECK(s.tau() == 0);
  }
}

TEST_CASE("peel step argument validation") {
  SurfaceState s(Configuration({4}));
  CHECK_THROWS(s.peel(0, 0));
  CHECK_THROWS(s.peel(0, 7));
  s.peel(0, 1);
  CHECK_THROWS(s.peel(0, 2));  // 0 already glued
}

TEST_CASE("single-step worked cases") {
  {
    // Different components: merged hole of perimeter p1+p2-2.
    SurfaceState s(Configuration({3, 5}));
    const PeelEvent ev = s.peel(0, 4);
    CHECK(ev.kind == PeelKind::kMergeComponents);
    CHECK(s.hole_count() == 1);
    CHECK(s.hole_perimeters() == std::vector<std::uint32_t>{6});
    CHECK(ev.vertices_created == 0);
  }
  {
    // Adjacent partner on the same hole: a true vertex appears.
    SurfaceState s(Configuration({4}));
    const PeelEvent ev = s.peel(0, 1);
    CHECK(ev.kind == PeelKind::kStrongClosure);
    CHECK(ev.vertices_created == 1);
    CHECK(s.hole_perimeters() == std::vector<std::uint32_t>{2});
    CHECK(s.true_vertices() == 1);
  }
  {
    SurfaceState s(Configuration({4}));
    const PeelEvent ev = s.peel(1, 0);  // partner is prev(peeled)
    CHECK(ev.kind == PeelKind::kWeakClosure);
    CHECK(ev.vertices_created == 1);
  }
  {
    // Bigon self-gluing: two true vertices, hole vanishes.
    SurfaceState s(Configuration({2}));
    const PeelEvent ev = s.peel(0, 1);
    CHECK(ev.kind == PeelKind::kBigonClosure);
    CHECK(ev.vertices_created == 2);
    CHECK(s.done());
    CHECK(s.final_summary().vertices() == 2);
  }
  {
    // Two loops: one true vertex.
    SurfaceState s(Configuration({1, 1}));
    const PeelEvent ev = s.peel(0, 1);
    CHECK(ev.kind == PeelKind::kLoopLoopMerge);
    CHECK(ev.vertices_created == 1);
    CHECK(s.final_summary().vertices() == 1);
  }
  {
    // Generic split records both arc perimeters.
    SurfaceState s(Configuration({8}));
    const PeelEvent ev = s.peel(0, 3);
    CHECK(ev.kind == PeelKind::kSplitHole);
    CHECK(ev.split_first == 2);
    CHECK(ev.split_second == 4);
    auto perims = s.hole_perimeters();
    std::sort(perims.begin(), perims.end());
    CHECK(perims == std::vector<std::uint32_t>{2, 4});
  }
  {
    // Same component, different holes: genus merge.
    SurfaceState s(Configuration({6}));
    s.peel(0, 2);  // split into [1], [3,4,5]
    const PeelEvent ev = s.peel(1, 4);
    CHECK(ev.kind == PeelKind::kGenusMerge);
    s.peel(3, 5);
    CHECK(s.done());
    const MapSummary summary = s.final_summary();
    CHECK(summary.genus() == 1);
    CHECK(summary.vertices() == 2);
  }
}

TEST_CASE("glue equality, exhaustive over pairings and strategies") {
  const std::vector<std::vector<std::uint32_t>> configs = {
      {4}, {3, 3}, {2, 2}, {1, 1, 2}};
  int checked = 0;
  for (const auto& perimeters : configs) {
    const Configuration config(perimeters);
    enumerate_pairings(config, [&](const Permutation& alpha) {
      const auto [map, expected] = glue(config, alpha);
      for (int variant = 0; variant < 5; ++variant) {
        std::unique_ptr<PeelStrategy> strategy;
        switch (variant) {
          case 0: strategy = strategy_min_hole(); break;
          case 1: strategy = strategy_uniform(RngStream(7, checked)); break;
          case 2: strategy = strategy_uniform(RngStream(8, checked)); break;
          case 3: strategy = strategy_red_vertex(RngStream(9, checked)); break;
          default: strategy = strategy_red_vertex(RngStream(10, checked)); break;
        }
        const MapSummary got =
            peel_with_pairing(config, alpha, *strategy, /*check_each_step=*/true);
        CHECK(got == expected);
        ++checked;
      }
    });
  }
  CHECK(checked == 5 * (3 + 15 + 3 + 3));
}

TEST_CASE("glue equality, fuzzed configurations") {
  RngStream rng(41, 0);
  for (int rep = 0; rep < 2000; ++rep) {
    const Configuration config = random_config(rng, 100);
    const auto alpha =
        sample_pairing(static_cast<std::uint32_t>(config.total_sides()), rng);
    const auto [map, expected] = glue(config, alpha);
    std::unique_ptr<PeelStrategy> strategy;
    switch (rep % 3) {
      case 0: strategy = strategy_min_hole(); break;
      case 1: strategy = strategy_uniform(RngStream(42, rep)); break;
      default: strategy = strategy_red_vertex(RngStream(43, rep)); break;
    }
    const MapSummary got =
        peel_with_pairing(config, alpha, *strategy, /*check_each_step=*/false);
    CHECK(got == expected);
  }
}

TEST_CASE("run on trivial configurations") {
  RngStream rng(44, 0);
  {
    auto strategy = strategy_min_hole();
    PeelRunOptions options;
    options.record_events = true;
    const auto result = run(Configuration({2}), *strategy, options, rng);
    REQUIRE(result.completed);
    REQUIRE(result.log.events.size() == 1);
    CHECK(result.log.events[0].kind == PeelKind::kBigonClosure);
    CHECK(result.summary.vertices() == 2);
  }
  {
    auto strategy = strategy_min_hole();
    PeelRunOptions options;
    options.record_events = true;
    const auto result = run(Configuration({1, 1}), *strategy, options, rng);
    CHECK(result.log.events[0].kind == PeelKind::kLoopLoopMerge);
    CHECK(result.summary.vertices() == 1);
  }
}

TEST_CASE("min-hole strategy tie-breaks by minimal label") {
  {
    SurfaceState s(Configuration({3, 5}), /*track_hole_min=*/true);
    CHECK(s.min_dart_of_min_hole() == 0);  // the 3-hole starts at label 0
  }
  {
    SurfaceState s(Configuration({5, 3}), /*track_hole_min=*/true);
    CHECK(s.min_dart_of_min_hole() == 5);  // minimal label inside the 3-hole
  }
  {
    SurfaceState s(Configuration({3, 3}), /*track_hole_min=*/true);
    CHECK(s.min_dart_of_min_hole() == 0);  // tie: minimal label across both
  }
}

TEST_CASE("uniform strategy picks boundary edges uniformly at step 0") {
  const Configuration config({5, 5});  // n = 5
  std::vector<std::uint64_t> counts(10, 0);
  auto strategy = strategy_uniform(RngStream(45, 0));
  SurfaceState state(config);
  const int reps = 100000;
  for (int i = 0; i < reps; ++i) counts[strategy->choose(state)] += 1;
  for (const auto c : counts) {
    CHECK(c > reps / 10 - 5 * 95);
    CHECK(c < reps / 10 + 5 * 95);
  }
}

TEST_CASE("presampled and on-the-fly agree in law at n <= 3, exactly") {
  for (const auto& perimeters : std::vector<std::vector<std::uint32_t>>{
           {2}, {1, 1}, {4}, {3, 1}, {2, 1, 1}, {6}, {1, 2, 3}}) {
    const Configuration config(perimeters);
    const ExactDistribution glue_law = exact_summary_law(config);
    for (const StrategyKind kind :
         {StrategyKind::kMinHole, StrategyKind::kUniform, StrategyKind::kRedVertex}) {
      const ExactDistribution peel_law = exact_on_the_fly_law(config, kind);
      REQUIRE(peel_law.size() == glue_law.size());
      mpq_class total(0);
      for (const auto& [key, p] : peel_law) {
        REQUIRE(glue_law.count(key) == 1);
        CHECK(p == glue_law.at(key));
        total += p;
      }
      CHECK(total == 1);
    }
  }
}

TEST_CASE("tracked labels on {2} land on distinct final vertices") {
  // The single pairing of the bigon creates two vertices; the two endpoints
  // of either side are exactly those two vertices.
  RngStream label_rng(46, 0);
  SurfaceState state(Configuration({2}));
  track_labels(state, 1, label_rng);
  state.peel(0, 1);
  REQUIRE(state.done());
  const auto& fates = state.label_fates();
  REQUIRE(fates.size() == 2);
  CHECK(fates[0].swallowed_step == 0);
  CHECK(fates[1].swallowed_step == 0);
  CHECK(state.final_summary().vertices() == 2);
}

TEST_CASE("red marker: strong closure swallows it, weak closure does not") {
  {
    SurfaceState s(Configuration({4}));
    s.init_red(0);  // red corner = head of dart 0
    const PeelEvent ev = s.peel(0, 1);
    CHECK(ev.kind == PeelKind::kStrongClosure);
    CHECK(ev.red_swallowed);
  }
  {
    SurfaceState s(Configuration({4}));
    s.init_red(1);  // peel left of red = dart 1; partner prev(1) = 0 is weak
    const PeelEvent ev = s.peel(1, 0);
    CHECK(ev.kind == PeelKind::kWeakClosure);
    CHECK(!ev.red_swallowed);
    CHECK(s.red_active());
  }
  {
    // Loop closure: red on a loop glued to another loop.
    SurfaceState s(Configuration({1, 1}));
    s.init_red(0);
    const PeelEvent ev = s.peel(0, 1);
    CHECK(ev.kind == PeelKind::kLoopClosure);
    CHECK(ev.red_swallowed);
  }
}

TEST_CASE("tau records the first single-hole time") {
  RngStream rng(47, 0);
  auto strategy = strategy_min_hole();
  PeelRunOptions options;
  options.mode = PeelMode::kOnTheFly;
  options.stop_at_single_hole = true;
  const Configuration config({3, 3, 3, 3});  // #P = 4, n = 6
  for (int rep = 0; rep < 200; ++rep) {
    const auto result = run(config, *strategy, options, rng);
    if (result.log.tau != kNoStep) {
      CHECK(result.log.tau >= config.polygon_count() - 1);
      CHECK(result.log.tau <= 2 * config.half_total());
    }
  }
}

TEST_CASE("split-merge one-step law matches the uniform peeling simulator") {
  // Perimeter chain: merging holes I != J gives p_I + p_J - 2; same hole
  // splits p into {k, p-2-k}. Exact enumeration over ordered pairs.
  const Configuration config({4, 3, 1});
  const ExactDistribution law = exact_uniform_step_law(config);
  mpq_class total(0);
  for (const auto& [key, p] : law) total += p;
  CHECK(total == 1);
  // From {4,3,1}: gluing the loop into the 4-gon leaves {3,3}; into the
  // 3-gon leaves {2,4}; merging 4 and 3 leaves {5,1}; splits of the 4-gon
  // leave {0+2,...}: adjacent gives {2,3,1} etc.
  CHECK(law.count("3,3") == 1);
  CHECK(law.count("1,5") == 1);
  // 8 ordered loop<->4-gon pairs out of 8*7
  mpq_class expected(2 * 4 * 1, 8 * 7);
  expected.canonicalize();
  CHECK(law.at("3,3") == expected);
}

TEST_CASE("state invariants hold along random trajectories") {
  RngStream rng(48, 0);
  for (int rep = 0; rep < 50; ++rep) {
    const Configuration config = random_config(rng, 40);
    SurfaceState state(config, /*track_hole_min=*/true);
    RngStream partner_rng(49, rep);
    while (!state.done()) {
      const Dart a = state.boundary_dart(partner_rng.uniform_below(state.boundary_size()));
      const Dart b = state.random_other_boundary_dart(a, partner_rng);
      state.peel(a, b);
      state.check_invariants();
    }
    state.final_summary();
  }
}
