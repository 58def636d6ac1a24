#include "polyglue/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "polyglue/combinatorics.hpp"

namespace polyglue {

void parallel_replicas(std::uint64_t count,
                       const std::function<void(std::uint64_t)>& fn) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = static_cast<unsigned>(
      std::min<std::uint64_t>(hw, std::max<std::uint64_t>(1, count / 64)));
  if (workers <= 1) {
    for (std::uint64_t r = 0; r < count; ++r) fn(r);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) {
    const std::uint64_t begin = count * t / workers;
    const std::uint64_t end = count * (t + 1) / workers;
    threads.emplace_back([&fn, begin, end] {
      for (std::uint64_t r = begin; r < end; ++r) fn(r);
    });
  }
  for (auto& th : threads) th.join();
}

namespace {

// Lean per-gluing decomposition: vertex cycles of phi.alpha, degrees and
// component count, without building a MultiGraph.
struct GluedView {
  std::uint32_t vertex_count = 0;
  std::uint32_t component_count = 0;
  std::vector<std::uint32_t> vertex_of;
  std::vector<std::uint64_t> degree;
  std::vector<Dart> min_dart;
};

GluedView decompose(const Permutation& alpha, const Permutation& phi) {
  const std::size_t m = alpha.size();
  GluedView view;
  view.vertex_of.assign(m, 0);
  std::vector<char> seen(m, 0);
  for (Dart d = 0; d < m; ++d) {
    if (seen[d]) continue;
    const auto v = static_cast<std::uint32_t>(view.degree.size());
    std::uint64_t deg = 0;
    Dart e = d;
    while (!seen[e]) {
      seen[e] = 1;
      view.vertex_of[e] = v;
      ++deg;
      e = phi[alpha[e]];
    }
    view.degree.push_back(deg);
    view.min_dart.push_back(d);
  }
  view.vertex_count = static_cast<std::uint32_t>(view.degree.size());

  std::vector<std::uint32_t> parent(m);
  std::iota(parent.begin(), parent.end(), 0u);
  std::function<std::uint32_t(std::uint32_t)> find = [&](std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (Dart d = 0; d < m; ++d) {
    parent[find(d)] = find(alpha[d]);
    parent[find(d)] = find(phi[d]);
  }
  std::uint32_t components = 0;
  for (Dart d = 0; d < m; ++d)
    if (find(d) == d) ++components;
  view.component_count = components;
  return view;
}

// Ranks of the k largest-degree vertices (ties by smallest dart), padded
// with -1u when fewer vertices exist.
std::vector<std::uint32_t> top_k_vertices(const GluedView& view, std::uint32_t k) {
  std::vector<std::uint32_t> order(view.vertex_count);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (view.degree[a] != view.degree[b]) return view.degree[a] > view.degree[b];
    return view.min_dart[a] < view.min_dart[b];
  });
  order.resize(std::min<std::size_t>(order.size(), k), static_cast<std::uint32_t>(-1));
  order.resize(k, static_cast<std::uint32_t>(-1));
  return order;
}

}  // namespace

GluingBatchStats gluing_batch(const Configuration& config, std::uint64_t replicas,
                              std::uint64_t seed, const GluingBatchOptions& options) {
  const auto m = static_cast<std::uint32_t>(config.total_sides());
  const Permutation phi = canonical_face_permutation(config);
  const std::uint32_t k = options.edge_table_k;

  GluingBatchStats stats;
  stats.n = config.half_total();
  stats.replicas = replicas;
  stats.vertex_counts.resize(replicas);
  stats.face_counts.resize(replicas);
  stats.genus_values.resize(replicas);
  stats.loop_mass.resize(replicas);
  std::vector<std::uint8_t> connected_flags(replicas);
  if (k > 0) stats.edge_table_sums.assign(replicas, std::vector<double>(k * k, 0.0));
  if (options.root_degree) stats.root_degree_fraction.resize(replicas);

  const bool triples = options.triangle_triples;
  std::vector<std::map<std::array<std::uint32_t, 3>, std::uint64_t>> triple_counts;
  std::uint64_t triangle_faces = 0;
  if (triples) {
    for (const auto p : config.perimeters()) triangle_faces += (p == 3);
    if (triangle_faces == 0)
      throw std::invalid_argument("gluing_batch: no triangles for triple counts");
    triple_counts.resize(replicas);
  }

  const double inv_2n = 1.0 / static_cast<double>(m);

  parallel_replicas(replicas, [&](std::uint64_t r) {
    RngStream rng = RngStream::substream(seed, stream_purpose::kGluing, r);
    const Permutation alpha = sample_pairing(m, rng);
    const GluedView view = decompose(alpha, phi);

    stats.vertex_counts[r] = view.vertex_count;
    stats.face_counts[r] = config.polygon_count();
    connected_flags[r] = (view.component_count == 1);
    // Total genus over components: sum of (2 - V_c + E_c - F_c)/2.
    const std::int64_t genus2 = 2 * static_cast<std::int64_t>(view.component_count) -
                                static_cast<std::int64_t>(view.vertex_count) +
                                static_cast<std::int64_t>(config.half_total()) -
                                static_cast<std::int64_t>(config.polygon_count());
    stats.genus_values[r] = genus2 / 2;

    std::uint64_t loop_edges = 0;
    for (Dart d = 0; d < m; ++d) {
      const Dart e = alpha[d];
      if (e < d) continue;
      loop_edges += (view.vertex_of[d] == view.vertex_of[e]);
    }
    stats.loop_mass[r] = 2.0 * static_cast<double>(loop_edges) * inv_2n;

    if (k > 0 || triples) {
      const auto top = top_k_vertices(view, std::max(k, triples ? 2u : 0u));
      std::vector<std::uint32_t> rank_of(view.vertex_count, static_cast<std::uint32_t>(-1));
      for (std::uint32_t i = 0; i < top.size(); ++i)
        if (top[i] != static_cast<std::uint32_t>(-1)) rank_of[top[i]] = i;

      if (k > 0) {
        auto& table = stats.edge_table_sums[r];
        for (Dart d = 0; d < m; ++d) {
          const Dart e = alpha[d];
          if (e < d) continue;
          const std::uint32_t ri = rank_of[view.vertex_of[d]];
          const std::uint32_t rj = rank_of[view.vertex_of[e]];
          if (ri >= k || rj >= k) continue;
          // [i,i] counts loops twice; off-diagonal entries are mirrored.
          if (ri == rj) {
            table[ri * k + ri] += 2.0 * inv_2n;
          } else {
            table[ri * k + rj] += inv_2n;
            table[rj * k + ri] += inv_2n;
          }
        }
      }
      if (triples) {
        Dart offset = 0;
        for (const auto p : config.perimeters()) {
          if (p == 3) {
            // Corner vertices in face order starting from the smallest label:
            // the corner after dart d sits at the tail of phi(d).
            const std::uint32_t v1 = rank_of[view.vertex_of[offset + 1]];
            const std::uint32_t v2 = rank_of[view.vertex_of[offset + 2]];
            const std::uint32_t v3 = rank_of[view.vertex_of[offset]];
            if (v1 < 2 && v2 < 2 && v3 < 2) triple_counts[r][{v1, v2, v3}] += 1;
          }
          offset += p;
        }
      }
    }
    if (options.root_degree) {
      const Dart root = static_cast<Dart>(rng.uniform_below(m));
      stats.root_degree_fraction[r] =
          static_cast<double>(view.degree[view.vertex_of[root]]) * inv_2n;
    }
  });

  for (std::uint64_t r = 0; r < replicas; ++r) stats.connected += connected_flags[r];
  if (triples) {
    for (std::uint32_t i = 0; i < 2; ++i)
      for (std::uint32_t j = 0; j < 2; ++j)
        for (std::uint32_t l = 0; l < 2; ++l) stats.triple_means[{i, j, l}] = 0.0;
    const double w =
        1.0 / (static_cast<double>(replicas) * static_cast<double>(triangle_faces));
    for (std::uint64_t r = 0; r < replicas; ++r)
      for (const auto& [key, count] : triple_counts[r])
        stats.triple_means[key] += w * static_cast<double>(count);
  }
  return stats;
}

CycleTypeBatchStats cycle_type_batch(std::uint64_t n, std::uint64_t replicas,
                                     std::uint64_t seed) {
  CycleTypeBatchStats stats;
  stats.n = n;
  stats.replicas = replicas;
  stats.vertex_counts.resize(replicas);
  stats.parity_odd.resize(replicas);
  stats.loops.resize(replicas);
  stats.bigons.resize(replicas);
  std::vector<std::uint8_t> connected_flags(replicas);
  std::vector<std::uint8_t> goodness_fail(replicas);

  parallel_replicas(replicas, [&](std::uint64_t r) {
    RngStream rng = RngStream::substream(seed, stream_purpose::kCycleType, r);
    const CyclePartition parts = sample_cycle_type(2 * n, rng);
    std::vector<std::uint32_t> perimeters(parts.parts.begin(), parts.parts.end());
    const Configuration config(std::move(perimeters));
    const Permutation phi = canonical_face_permutation(config);
    const Permutation alpha =
        sample_pairing(static_cast<std::uint32_t>(2 * n), rng);
    const GluedView view = decompose(alpha, phi);

    stats.vertex_counts[r] = view.vertex_count;
    stats.parity_odd[r] = ((n + config.polygon_count()) % 2 == 1);
    stats.loops[r] = config.loop_count();
    stats.bigons[r] = config.bigon_count();
    connected_flags[r] = (view.component_count == 1);
    const GoodnessReport good = goodness_report(config);
    goodness_fail[r] = (good.loop_ratio >= 1.0 || good.bigon_ratio >= 1.0);
  });

  for (std::uint64_t r = 0; r < replicas; ++r) {
    stats.connected += connected_flags[r];
    stats.odd_parity += stats.parity_odd[r];
    stats.goodness_failures += goodness_fail[r];
  }
  return stats;
}

UniformMapBatchStats uniform_map_batch(std::uint64_t n, std::uint64_t replicas,
                                       std::uint64_t seed, bool collect_loop_mass) {
  UniformMapBatchStats stats;
  stats.n = n;
  stats.replicas = replicas;
  stats.vertex_counts.resize(replicas);
  stats.face_counts.resize(replicas);
  stats.genus_values.resize(replicas);
  if (collect_loop_mass) stats.loop_mass.resize(replicas);
  std::vector<std::uint64_t> attempts(replicas, 0);
  const auto m = static_cast<std::uint32_t>(2 * n);

  parallel_replicas(replicas, [&](std::uint64_t r) {
    RngStream rng = RngStream::substream(seed, stream_purpose::kUniformMap, r);
    while (true) {
      ++attempts[r];
      const Permutation alpha = sample_pairing(m, rng);
      const Permutation phi = sample_permutation(m, rng);
      const GluedView view = decompose(alpha, phi);
      if (view.component_count != 1) continue;

      std::uint32_t faces = 0;
      std::vector<char> seen(m, 0);
      for (Dart d = 0; d < m; ++d) {
        if (seen[d]) continue;
        ++faces;
        Dart e = d;
        while (!seen[e]) {
          seen[e] = 1;
          e = phi[e];
        }
      }
      stats.vertex_counts[r] = view.vertex_count;
      stats.face_counts[r] = faces;
      stats.genus_values[r] =
          (2 - static_cast<std::int64_t>(view.vertex_count) - faces +
           static_cast<std::int64_t>(n)) /
          2;
      if (collect_loop_mass) {
        std::uint64_t loop_edges = 0;
        for (Dart d = 0; d < m; ++d) {
          const Dart e = alpha[d];
          if (e < d) continue;
          loop_edges += (view.vertex_of[d] == view.vertex_of[e]);
        }
        stats.loop_mass[r] = static_cast<double>(loop_edges) / static_cast<double>(n);
      }
      break;
    }
  });

  stats.attempts = std::accumulate(attempts.begin(), attempts.end(), std::uint64_t{0});
  return stats;
}

TauBatchStats min_hole_tau_batch(const Configuration& config, std::uint64_t replicas,
                                 std::uint64_t seed) {
  TauBatchStats stats;
  stats.replicas = replicas;
  stats.tau.resize(replicas);
  stats.x_at_tau.resize(replicas);
  std::vector<std::uint8_t> defined(replicas);

  parallel_replicas(replicas, [&](std::uint64_t r) {
    RngStream pairing_rng = RngStream::substream(seed, stream_purpose::kPeelPairing, r);
    auto strategy = strategy_min_hole();
    PeelRunOptions options;
    options.mode = PeelMode::kOnTheFly;
    options.stop_at_single_hole = true;
    const PeelRunResult result = run(config, *strategy, options, pairing_rng);
    stats.tau[r] = result.log.tau;
    stats.x_at_tau[r] = static_cast<std::int64_t>(result.log.true_vertices_at_stop);
    defined[r] = (result.log.tau != kNoStep);
  });

  for (std::uint64_t r = 0; r < replicas; ++r) stats.tau_defined += defined[r];
  return stats;
}

RedBatchStats red_vertex_batch(const Configuration& config, std::uint64_t replicas,
                               std::uint64_t seed, std::uint32_t track_k) {
  RedBatchStats stats;
  stats.n = config.half_total();
  stats.replicas = replicas;
  stats.theta1_over_n.resize(replicas);
  stats.ratio1.resize(replicas);
  stats.ratio2.resize(replicas);
  std::vector<std::uint8_t> has_two(replicas, 0);
  std::vector<double> sigma1(replicas, -1.0);
  std::vector<std::uint8_t> swallowed(replicas, 0);
  std::vector<std::uint8_t> sup_flag(replicas, 0);
  std::vector<std::uint8_t> early_loop(replicas, 0);
  std::vector<std::int32_t> dl(replicas, 0), dlb(replicas, 0);

  const double n = static_cast<double>(config.half_total());
  const double sqrt_n = std::sqrt(n);

  parallel_replicas(replicas, [&](std::uint64_t r) {
    RngStream pairing_rng = RngStream::substream(seed, stream_purpose::kPeelPairing, r);
    RngStream label_rng = RngStream::substream(seed, stream_purpose::kPeelLabels, r);
    auto strategy = strategy_red_vertex(
        RngStream::substream(seed, stream_purpose::kPeelStrategy, r));
    PeelRunOptions options;
    options.mode = PeelMode::kOnTheFly;
    options.track_k = track_k;
    const PeelRunResult result =
        run(config, *strategy, options, pairing_rng, track_k ? &label_rng : nullptr);
    const TrajectoryLog& log = result.log;

    const auto& thetas = log.strong_closure_steps;
    const ClosureReport report = closure_report(log);
    stats.theta1_over_n[r] = thetas.empty() ? 1.0 : static_cast<double>(thetas[0]) / n;
    stats.ratio1[r] = report.increment_ratios.empty() ? 1.0 : report.increment_ratios[0];
    if (report.increment_ratios.size() >= 2) {
      has_two[r] = 1;
      stats.ratio2[r] = report.increment_ratios[1];
    } else {
      stats.ratio2[r] = 1.0;
    }
    if (track_k > 0) {
      const LabelFate& first = log.labels.front();
      if (first.sigma_step != kNoStep)
        sigma1[r] = static_cast<double>(first.sigma_step) / n;
      for (const auto& fate : log.labels)
        if (fate.swallowed_step != kNoStep &&
            static_cast<double>(fate.swallowed_step) <= 0.9 * n)
          swallowed[r] += 1;
    }
    const MonitorReport mon = monitors(log);
    sup_flag[r] = (static_cast<double>(mon.sup_loops) >= sqrt_n);
    early_loop[r] = (mon.first_loop_closure != kNoStep &&
                     static_cast<double>(mon.first_loop_closure) <= 0.9 * n);
    dl[r] = mon.max_delta_loops;
    dlb[r] = mon.max_delta_loops_bigons;
  });

  for (std::uint64_t r = 0; r < replicas; ++r) {
    stats.runs_with_two_thetas += has_two[r];
    if (sigma1[r] >= 0.0) {
      stats.sigma1_over_n.push_back(sigma1[r]);
      ++stats.sigma1_defined;
    }
    stats.swallowed_early += swallowed[r];
    stats.tracked_labels += 2 * track_k;
    stats.sup_loops_ge_sqrt_n += sup_flag[r];
    stats.early_loop_closure += early_loop[r];
    stats.max_delta_loops = std::max(stats.max_delta_loops, dl[r]);
    stats.max_delta_loops_bigons = std::max(stats.max_delta_loops_bigons, dlb[r]);
  }
  return stats;
}

PdMomentOracle pd1_moment_oracle(std::uint64_t draws, std::uint64_t seed, double delta) {
  PdMomentOracle oracle;
  for (std::uint32_t i = 0; i < 2; ++i)
    for (std::uint32_t j = 0; j < 2; ++j)
      for (std::uint32_t l = 0; l < 2; ++l) oracle.triples[{i, j, l}] = 0.0;
  const double w = 1.0 / static_cast<double>(draws);
  RngStream rng = RngStream::substream(seed, stream_purpose::kOracle, 1);
  for (std::uint64_t d = 0; d < draws; ++d) {
    const StickPartition sticks = sample_pd1(rng, delta);
    const double x1 = sticks.sticks.empty() ? 0.0 : sticks.sticks[0];
    const double x2 = sticks.sticks.size() > 1 ? sticks.sticks[1] : 0.0;
    oracle.mean_largest += w * x1;
    oracle.mean_largest_sq += w * x1 * x1;
    oracle.mean_x1_x2 += w * x1 * x2;
    double sum_sq = 0.0;
    for (const double s : sticks.sticks) sum_sq += s * s;
    oracle.mean_sum_squares += w * sum_sq;
    const double x[2] = {x1, x2};
    for (std::uint32_t i = 0; i < 2; ++i)
      for (std::uint32_t j = 0; j < 2; ++j)
        for (std::uint32_t l = 0; l < 2; ++l)
          oracle.triples[{i, j, l}] += w * x[i] * x[j] * x[l];
  }
  return oracle;
}

CycleTypeMomentOracle cycle_type_moment_oracle(std::uint64_t m, std::uint64_t draws,
                                               std::uint64_t seed) {
  CycleTypeMomentOracle oracle;
  const double w = 1.0 / static_cast<double>(draws);
  const double inv_m = 1.0 / static_cast<double>(m);
  RngStream rng = RngStream::substream(seed, stream_purpose::kOracle, 2);
  for (std::uint64_t d = 0; d < draws; ++d) {
    const CyclePartition parts = sample_cycle_type(m, rng);
    oracle.mean_largest_fraction +=
        w * static_cast<double>(parts.parts.front()) * inv_m;
    double sum_sq = 0.0;
    for (const auto p : parts.parts) {
      const double f = static_cast<double>(p) * inv_m;
      sum_sq += f * f;
    }
    oracle.mean_sum_squares += w * sum_sq;
  }
  return oracle;
}

namespace {

// Per-replica summary of one random-graph side for the conjecture probe.
struct SideSample {
  double vertices = 0.0;
  double loop_mass = 0.0;
  std::array<double, 3> top_degree{};
  std::array<double, 3> small_degree{};
};

SideSample side_sample(const GluedView& view, const Permutation& alpha,
                       std::uint64_t n) {
  SideSample s;
  const double inv_2n = 1.0 / static_cast<double>(2 * n);
  s.vertices = view.vertex_count;
  std::uint64_t loop_edges = 0;
  for (Dart d = 0; d < alpha.size(); ++d) {
    const Dart e = alpha[d];
    if (e < d) continue;
    loop_edges += (view.vertex_of[d] == view.vertex_of[e]);
  }
  s.loop_mass = 2.0 * static_cast<double>(loop_edges) * inv_2n;
  std::vector<std::uint64_t> degrees(view.degree);
  std::sort(degrees.begin(), degrees.end(), std::greater<std::uint64_t>());
  for (std::size_t i = 0; i < 3 && i < degrees.size(); ++i)
    s.top_degree[i] = static_cast<double>(degrees[i]) * inv_2n;
  for (const auto d : view.degree)
    if (d >= 1 && d <= 3) s.small_degree[d - 1] += 1.0;
  return s;
}

struct SideMoments {
  double mean_v = 0, var_v = 0;
  double mean_loop = 0, var_loop = 0;
  std::array<double, 3> mean_top{}, var_top{};
  std::array<double, 3> mean_small{}, var_small{};
};

SideMoments moments_of(const std::vector<SideSample>& samples) {
  SideMoments m;
  const double inv = 1.0 / static_cast<double>(samples.size());
  for (const auto& s : samples) {
    m.mean_v += inv * s.vertices;
    m.mean_loop += inv * s.loop_mass;
    for (int i = 0; i < 3; ++i) {
      m.mean_top[i] += inv * s.top_degree[i];
      m.mean_small[i] += inv * s.small_degree[i];
    }
  }
  for (const auto& s : samples) {
    m.var_v += inv * (s.vertices - m.mean_v) * (s.vertices - m.mean_v);
    m.var_loop += inv * (s.loop_mass - m.mean_loop) * (s.loop_mass - m.mean_loop);
    for (int i = 0; i < 3; ++i) {
      m.var_top[i] += inv * (s.top_degree[i] - m.mean_top[i]) *
                      (s.top_degree[i] - m.mean_top[i]);
      m.var_small[i] += inv * (s.small_degree[i] - m.mean_small[i]) *
                        (s.small_degree[i] - m.mean_small[i]);
    }
  }
  return m;
}

double tv_vs_parity_poisson(const std::vector<SideSample>& samples, std::uint64_t n,
                            Parity parity) {
  std::vector<std::int64_t> values;
  values.reserve(samples.size());
  for (const auto& s : samples)
    values.push_back(static_cast<std::int64_t>(s.vertices));
  const double lambda = std::log(static_cast<double>(n));
  std::vector<std::int64_t> support;
  double mass = 0.0;
  for (std::int64_t k = 0; mass < 1.0 - 1e-12 && k < 4096; ++k) {
    const double p = poisson_parity_pmf(lambda, parity, static_cast<std::uint64_t>(k));
    if (p > 0.0) {
      support.push_back(k);
      mass += p;
    }
  }
  return tv_empirical_vs_pmf(
      values,
      [&](std::int64_t k) {
        return poisson_parity_pmf(lambda, parity, static_cast<std::uint64_t>(k));
      },
      support);
}

ProbeResult probe_against(const Configuration& config, std::uint64_t replicas,
                          std::uint64_t seed, bool uniform_side) {
  const auto m = static_cast<std::uint32_t>(config.total_sides());
  const std::uint64_t n = config.half_total();
  const Permutation phi = canonical_face_permutation(config);
  const Parity parity = parity_of(n + config.polygon_count());

  std::vector<SideSample> gluing(replicas), other(replicas);
  parallel_replicas(replicas, [&](std::uint64_t r) {
    RngStream rng = RngStream::substream(seed, stream_purpose::kGluing, r);
    const Permutation alpha = sample_pairing(m, rng);
    gluing[r] = side_sample(decompose(alpha, phi), alpha, n);

    RngStream rng2 = RngStream::substream(seed, stream_purpose::kUniformMap, r);
    if (uniform_side) {
      // Uniform map with matching vertex parity, by rejection.
      while (true) {
        const Permutation a2 = sample_pairing(m, rng2);
        const Permutation p2 = sample_permutation(m, rng2);
        const GluedView view = decompose(a2, p2);
        if (view.component_count != 1) continue;
        if (parity_of(view.vertex_count) != parity) continue;
        other[r] = side_sample(view, a2, n);
        break;
      }
    } else {
      const Permutation a2 = sample_pairing(m, rng2);
      other[r] = side_sample(decompose(a2, phi), a2, n);
    }
  });

  const SideMoments mg = moments_of(gluing);
  const SideMoments mo = moments_of(other);
  ProbeResult out;
  out.n = n;
  out.replicas = replicas;
  out.tv_gluing_vs_poisson = tv_vs_parity_poisson(gluing, n, parity);
  out.tv_uniform_vs_poisson = tv_vs_parity_poisson(other, n, parity);
  {
    std::map<std::int64_t, double> law_g, law_o;
    const double w = 1.0 / static_cast<double>(replicas);
    for (const auto& s : gluing) law_g[static_cast<std::int64_t>(s.vertices)] += w;
    for (const auto& s : other) law_o[static_cast<std::int64_t>(s.vertices)] += w;
    double sum = 0.0;
    for (const auto& [k, p] : law_g)
      sum += std::abs(p - (law_o.count(k) ? law_o.at(k) : 0.0));
    for (const auto& [k, p] : law_o)
      if (!law_g.count(k)) sum += p;
    out.vertex_law_gap = 0.5 * sum;
  }
  const double inv_r = 1.0 / static_cast<double>(replicas);
  out.vertex_mean_gap = mg.mean_v - mo.mean_v;
  out.vertex_mean_se = std::sqrt((mg.var_v + mo.var_v) * inv_r);
  out.loop_mass_gap = mg.mean_loop - mo.mean_loop;
  out.loop_mass_se = std::sqrt((mg.var_loop + mo.var_loop) * inv_r);
  for (int i = 0; i < 3; ++i) {
    out.top_degree_gap[i] = mg.mean_top[i] - mo.mean_top[i];
    out.top_degree_se[i] = std::sqrt((mg.var_top[i] + mo.var_top[i]) * inv_r);
    out.small_degree_gap[i] = mg.mean_small[i] - mo.mean_small[i];
    out.small_degree_se[i] = std::sqrt((mg.var_small[i] + mo.var_small[i]) * inv_r);
  }
  return out;
}

}  // namespace

ProbeResult probe_conjecture(const Configuration& config, std::uint64_t replicas,
                             std::uint64_t seed) {
  return probe_against(config, replicas, seed, /*uniform_side=*/true);
}

ProbeResult probe_self(const Configuration& config, std::uint64_t replicas,
                       std::uint64_t seed) {
  return probe_against(config, replicas, seed, /*uniform_side=*/false);
}

namespace {

void walk_on_the_fly(const SurfaceState& state, const mpq_class& prob,
                     StrategyKind kind, ExactDistribution& law) {
  if (state.done()) {
    law[state.final_summary().key()] += prob;
    return;
  }
  const std::uint64_t s = state.boundary_size();

  std::vector<Dart> choices;
  switch (kind) {
    case StrategyKind::kMinHole:
      choices.push_back(state.min_dart_of_min_hole());
      break;
    case StrategyKind::kRedVertex:
      choices.push_back(state.red_position());
      break;
    case StrategyKind::kUniform:
      choices.assign(state.boundary_darts().begin(), state.boundary_darts().end());
      break;
  }
  const mpq_class choice_prob =
      prob / mpq_class(static_cast<unsigned long>(choices.size()));

  for (const Dart a : choices) {
    const mpq_class partner_prob =
        choice_prob / mpq_class(static_cast<unsigned long>(s - 1));
    for (const Dart b : state.boundary_darts()) {
      if (b == a) continue;
      SurfaceState next_state = state;
      const PeelEvent ev = next_state.peel(a, b);
      if (kind == StrategyKind::kRedVertex && ev.red_swallowed && !next_state.done()) {
        const std::uint64_t s2 = next_state.boundary_size();
        const mpq_class resample_prob =
            partner_prob / mpq_class(static_cast<unsigned long>(s2));
        for (const Dart rd : next_state.boundary_darts()) {
          SurfaceState resampled = next_state;
          resampled.resample_red(rd);
          walk_on_the_fly(resampled, resample_prob, kind, law);
        }
      } else {
        walk_on_the_fly(next_state, partner_prob, kind, law);
      }
    }
  }
}

}  // namespace

ExactDistribution exact_on_the_fly_law(const Configuration& config,
                                       StrategyKind strategy) {
  if (config.half_total() > 3)
    throw std::invalid_argument("exact_on_the_fly_law: size guard |P| <= 3");
  ExactDistribution law;
  SurfaceState initial(config, strategy == StrategyKind::kMinHole);
  if (strategy == StrategyKind::kRedVertex) {
    const std::uint64_t m = initial.boundary_size();
    const mpq_class init_prob(1, static_cast<unsigned long>(m));
    for (const Dart rd : initial.boundary_darts()) {
      SurfaceState with_red = initial;
      with_red.init_red(rd);
      walk_on_the_fly(with_red, init_prob, strategy, law);
    }
  } else {
    walk_on_the_fly(initial, mpq_class(1), strategy, law);
  }
  for (auto& [key, p] : law) p.canonicalize();
  return law;
}

ExactDistribution exact_uniform_step_law(const Configuration& config) {
  if (config.half_total() > 64)
    throw std::invalid_argument("exact_uniform_step_law: configuration too large");
  const SurfaceState initial(config, false);
  const std::uint64_t s = initial.boundary_size();
  ExactDistribution law;
  const mpq_class pair_prob(1, static_cast<unsigned long>(s * (s - 1)));
  for (const Dart a : initial.boundary_darts()) {
    for (const Dart b : initial.boundary_darts()) {
      if (a == b) continue;
      SurfaceState next_state = initial;
      next_state.peel(a, b);
      auto perims = next_state.hole_perimeters();
      std::sort(perims.begin(), perims.end());
      std::string key;
      for (std::size_t i = 0; i < perims.size(); ++i) {
        if (i > 0) key += ',';
        key += std::to_string(perims[i]);
      }
      law[key] += pair_prob;
    }
  }
  for (auto& [key, p] : law) p.canonicalize();
  return law;
}

}  // namespace polyglue
