#include "polyglue/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "polyglue/combinatorics.hpp"
#include "polyglue/configmodel.hpp"
#include "polyglue/enumeration.hpp"
#include "polyglue/experiments.hpp"
#include "polyglue/peeling.hpp"
#include "polyglue/stats.hpp"
#include "polyglue/surface.hpp"

namespace polyglue {

namespace {

constexpr std::uint64_t kTrianglesN = 9999;  // largest multiple of 3 under 1e4

Configuration triangles(std::uint64_t n) {
  if ((2 * n) % 3 != 0) throw std::invalid_argument("triangles: 3 must divide 2n");
  return Configuration(std::vector<std::uint32_t>((2 * n) / 3, 3));
}

double poisson_pmf(double lambda, std::int64_t k) {
  if (k < 0) return 0.0;
  return std::exp(-lambda + static_cast<double>(k) * std::log(lambda) -
                  std::lgamma(static_cast<double>(k) + 1.0));
}

std::vector<std::int64_t> poisson_support(double lambda) {
  std::vector<std::int64_t> support;
  double mass = 0.0;
  for (std::int64_t k = 0; mass < 1.0 - 1e-12 && k < 4096; ++k) {
    support.push_back(k);
    mass += poisson_pmf(lambda, k);
  }
  return support;
}

std::vector<std::int64_t> parity_poisson_support(double lambda, Parity parity) {
  std::vector<std::int64_t> support;
  double mass = 0.0;
  for (std::int64_t k = 0; mass < 1.0 - 1e-12 && k < 4096; ++k) {
    const double p = poisson_parity_pmf(lambda, parity, static_cast<std::uint64_t>(k));
    if (p > 0.0) {
      support.push_back(k);
      mass += p;
    }
  }
  return support;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Lazily computed shared batches: several checks read the same heavy run.
struct Context {
  std::uint64_t seed = 0;

  const GluingBatchStats& triangle_gluings() {
    if (!triangle_gluings_) {
      GluingBatchOptions options;
      options.edge_table_k = 2;
      options.root_degree = true;
      options.triangle_triples = true;
      triangle_gluings_ =
          gluing_batch(triangles(kTrianglesN), 10000, seed, options);
    }
    return *triangle_gluings_;
  }

  const TauBatchStats& tau_batch() {
    if (!tau_batch_)
      tau_batch_ = min_hole_tau_batch(triangles(kTrianglesN), 10000, seed);
    return *tau_batch_;
  }

  const RedBatchStats& red_batch() {
    if (!red_batch_)
      red_batch_ = red_vertex_batch(triangles(kTrianglesN), 10000, seed, 2);
    return *red_batch_;
  }

  const UniformMapBatchStats& uniform_maps() {
    if (!uniform_maps_) uniform_maps_ = uniform_map_batch(10000, 10000, seed);
    return *uniform_maps_;
  }

  const DiameterHistogram& diameter_10k() {
    if (!diameter_10k_) diameter_10k_ = diameter_experiment(10000, 2000, seed);
    return *diameter_10k_;
  }

  const DiameterHistogram& diameter_100k() {
    if (!diameter_100k_) diameter_100k_ = diameter_experiment(100000, 2000, seed + 1);
    return *diameter_100k_;
  }

  const XiEstimate& xi() {
    if (!xi_) {
      LimitModelParams params;
      params.degree_cutoff = 30;
      params.stick_delta = 1e-6;
      params.replicas = 100000;
      params.seed = seed;
      // extend the sensitivity ladder past the main cutoff
      XiEstimate primary = xi_limit_model(params);
      params.degree_cutoff = 40;
      const XiEstimate wide = xi_limit_model(params);
      for (const auto& [a, est] : wide.sensitivity)
        if (a == 40) primary.sensitivity.emplace_back(a, est);
      xi_ = primary;
    }
    return *xi_;
  }

  const PdMomentOracle& pd_oracle() {
    if (!pd_oracle_) pd_oracle_ = pd1_moment_oracle(1000000, seed);
    return *pd_oracle_;
  }

 private:
  std::optional<GluingBatchStats> triangle_gluings_;
  std::optional<TauBatchStats> tau_batch_;
  std::optional<RedBatchStats> red_batch_;
  std::optional<UniformMapBatchStats> uniform_maps_;
  std::optional<DiameterHistogram> diameter_10k_;
  std::optional<DiameterHistogram> diameter_100k_;
  std::optional<XiEstimate> xi_;
  std::optional<PdMomentOracle> pd_oracle_;
};

void add(std::vector<Verdict>& out, const std::string& check, int criterion,
         double statistic, double threshold, const std::string& comparison,
         bool pass, const std::string& detail = {}) {
  Verdict v;
  v.check = check;
  v.criterion = criterion;
  v.statistic = statistic;
  v.threshold = threshold;
  v.comparison = comparison;
  v.pass = pass;
  v.detail = detail;
  out.push_back(std::move(v));
}

// A check whose specified tolerance cannot be met at finite n (documented in
// the suite header); the measured value is still compared against the
// specified threshold, and additionally against a predicted finite-n band.
void add_infeasible(std::vector<Verdict>& out, const std::string& check,
                    int criterion, double statistic, double threshold,
                    double band_low, double band_high, const std::string& detail) {
  Verdict v;
  v.check = check;
  v.criterion = criterion;
  v.statistic = statistic;
  v.threshold = threshold;
  v.comparison = "<=";
  v.pass = statistic <= threshold;
  v.infeasible_as_specified = true;
  v.sanity_pass = statistic >= band_low && statistic <= band_high;
  v.detail = detail;
  out.push_back(std::move(v));
}

// ---------------------------------------------------------------- fast checks

void check_counts(std::vector<Verdict>& out) {
  const auto c = rooted_map_counts(4);
  bool pass = (c[0] == 2 && c[1] == 10 && c[2] == 74 && c[3] == 706);
  for (unsigned n = 1; n <= 3; ++n)
    pass = pass && (rooted_map_count_by_enumeration(n) == c[n - 1]);
  add(out, "rooted-map-counts-vs-enumeration-n1-3", 1, pass ? 1 : 0, 1, "==", pass,
      "c = 2, 10, 74 by brute force over pairing x permutation pairs");
  const bool pass4 = (rooted_map_count_by_enumeration(4) == c[3]);
  add(out, "rooted-map-count-n4", 1, pass4 ? 706 : -1, 706, "==", pass4,
      "c_4 = 706 by recursion and by enumeration of 4.2e6 pairs");
}

void check_connected_fraction(std::vector<Verdict>& out) {
  bool pass = true;
  double worst = 0.0;
  for (unsigned n = 10; n <= 100; ++n) {
    const mpq_class frac = connected_pair_fraction(n);
    const mpq_class target(2 * n - 1, 2 * n);
    const mpq_class scaled = abs(frac - target) * n * n;
    worst = std::max(worst, scaled.get_d());
    if (scaled > 3) pass = false;
  }
  add(out, "connected-fraction-asymptotic", 2, worst, 3.0, "<=", pass,
      "n^2 |fraction - (1 - 1/2n)| on 10 <= n <= 100, exact rationals");
}

MapSummary peel_presampled(const Configuration& config, const Permutation& alpha,
                           PeelStrategy& strategy) {
  SurfaceState state(config, strategy.needs_hole_min());
  if (strategy.needs_red()) {
    auto* aux = strategy.aux_rng();
    state.init_red(state.boundary_dart(aux->uniform_below(state.boundary_size())));
  }
  while (!state.done()) {
    const Dart a = strategy.choose(state);
    const PeelEvent ev = state.peel(a, alpha[a]);
    if (ev.red_swallowed && strategy.needs_red() && !state.done()) {
      auto* aux = strategy.aux_rng();
      state.resample_red(state.boundary_dart(aux->uniform_below(state.boundary_size())));
    }
  }
  return state.final_summary();
}

void check_glue_peel_exhaustive(std::vector<Verdict>& out, std::uint64_t seed) {
  bool pass = true;
  std::uint64_t cases = 0;
  for (const auto& perimeters : std::vector<std::vector<std::uint32_t>>{
           {4}, {3, 3}, {2, 2}, {1, 1, 2}}) {
    const Configuration config(perimeters);
    enumerate_pairings(config, [&](const Permutation& alpha) {
      const auto [map, expected] = glue(config, alpha);
      for (int variant = 0; variant < 3; ++variant) {
        std::unique_ptr<PeelStrategy> strategy;
        if (variant == 0) strategy = strategy_min_hole();
        if (variant == 1) strategy = strategy_uniform(RngStream(seed, 900 + cases));
        if (variant == 2) strategy = strategy_red_vertex(RngStream(seed, 1900 + cases));
        pass = pass && (peel_presampled(config, alpha, *strategy) == expected);
        ++cases;
      }
    });
  }
  add(out, "glue-peel-equality-exhaustive", 3, pass ? 1 : 0, 1, "==", pass,
      "all pairings of {4},{3,3},{2,2},{1,1,2} x all strategies, " +
          std::to_string(cases) + " runs");
}

void check_glue_peel_fuzz(std::vector<Verdict>& out, std::uint64_t seed) {
  RngStream rng(seed, 77);
  bool pass = true;
  for (int rep = 0; rep < 10000 && pass; ++rep) {
    const std::uint32_t n = 1 + static_cast<std::uint32_t>(rng.uniform_below(100));
    std::uint32_t remaining = 2 * n;
    std::vector<std::uint32_t> perimeters;
    while (remaining > 0) {
      const auto p = 1 + static_cast<std::uint32_t>(rng.uniform_below(remaining));
      perimeters.push_back(p);
      remaining -= p;
    }
    const Configuration config(perimeters);
    const auto alpha = sample_pairing(2 * n, rng);
    const auto [map, expected] = glue(config, alpha);
    std::unique_ptr<PeelStrategy> strategy;
    switch (rep % 3) {
      case 0: strategy = strategy_min_hole(); break;
      case 1: strategy = strategy_uniform(RngStream(seed, 3000 + rep)); break;
      default: strategy = strategy_red_vertex(RngStream(seed, 4000 + rep)); break;
    }
    pass = (peel_presampled(config, alpha, *strategy) == expected);
  }
  add(out, "glue-peel-equality-fuzz", 3, pass ? 1 : 0, 1, "==", pass,
      "10^4 random (config, pairing, strategy) instances, n <= 100");
}

void check_mode_equivalence_exact(std::vector<Verdict>& out) {
  bool pass = true;
  for (const auto& perimeters : std::vector<std::vector<std::uint32_t>>{
           {2}, {1, 1}, {4}, {3, 1}, {2, 1, 1}, {6}, {1, 2, 3}}) {
    const Configuration config(perimeters);
    const ExactDistribution glue_law = exact_summary_law(config);
    for (const StrategyKind kind :
         {StrategyKind::kMinHole, StrategyKind::kUniform, StrategyKind::kRedVertex}) {
      const ExactDistribution peel_law = exact_on_the_fly_law(config, kind);
      pass = pass && (peel_law == glue_law);
    }
  }
  add(out, "mode-equivalence-exact-n-le-3", 4, pass ? 1 : 0, 1, "==", pass,
      "on-the-fly decision tree law == uniform pairing law, exact rationals");
}

void check_unicellular_exact(std::vector<Verdict>& out) {
  bool pass = true;
  for (unsigned n = 1; n <= 7; ++n) {
    const auto law = exact_unicellular_vertex_law(n);
    mpq_class total(0);
    for (const auto& [v, p] : law) {
      pass = pass && (v % 2 == (n + 1) % 2);
      total += p;
    }
    pass = pass && (total == 1);
  }
  pass = pass && (exact_unicellular_vertex_law(2).at(3) == mpq_class(2, 3));
  add(out, "unicellular-exact-laws", 0, pass ? 1 : 0, 1, "==", pass,
      "vertex pmf of the glued 2n-gon for n <= 7: parity support and mass");
}

// --------------------------------------------------------------- full checks

void check_mode_equivalence_chi2(std::vector<Verdict>& out, std::uint64_t seed) {
  const Configuration config({1, 2, 3, 4});  // n = 5
  const ExactDistribution law = exact_summary_law(config);
  std::vector<std::string> keys;
  std::vector<double> probs;
  for (const auto& [key, p] : law) {
    keys.push_back(key);
    probs.push_back(p.get_d());
  }

  const std::uint64_t reps = 100000;
  double min_p = 1.0;
  for (const StrategyKind kind :
       {StrategyKind::kMinHole, StrategyKind::kUniform, StrategyKind::kRedVertex}) {
    for (const PeelMode mode : {PeelMode::kOnTheFly, PeelMode::kPresampled}) {
      std::map<std::string, std::uint64_t> counts;
      for (std::uint64_t r = 0; r < reps; ++r) {
        RngStream pairing_rng = RngStream::substream(seed, 200, r);
        std::unique_ptr<PeelStrategy> strategy;
        if (kind == StrategyKind::kMinHole) strategy = strategy_min_hole();
        if (kind == StrategyKind::kUniform)
          strategy = strategy_uniform(RngStream::substream(seed, 201, r));
        if (kind == StrategyKind::kRedVertex)
          strategy = strategy_red_vertex(RngStream::substream(seed, 202, r));
        PeelRunOptions options;
        options.mode = mode;
        const auto result = run(config, *strategy, options, pairing_rng);
        counts[result.summary.key()] += 1;
      }
      std::vector<std::uint64_t> observed;
      for (const auto& key : keys) observed.push_back(counts[key]);
      std::uint64_t covered = 0;
      for (const auto o : observed) covered += o;
      if (covered != reps) {
        min_p = 0.0;  // an outcome outside the exact support
        break;
      }
      min_p = std::min(min_p, chi_square(observed, probs).p_value);
    }
  }
  add(out, "mode-equivalence-chi2-n5", 4, min_p, 0.01, ">=", min_p >= 0.01,
      "both modes x three strategies vs the exact law of {1,2,3,4}, 1e5 runs each");
}

double tv_parity_poisson(const std::vector<std::int64_t>& sample, double lambda,
                         Parity parity) {
  return tv_empirical_vs_pmf(
      sample,
      [&](std::int64_t k) {
        return poisson_parity_pmf(lambda, parity, static_cast<std::uint64_t>(k));
      },
      parity_poisson_support(lambda, parity));
}

void check_vertex_tv(std::vector<Verdict>& out, Context& ctx) {
  const auto& batch = ctx.triangle_gluings();
  const double lambda = std::log(static_cast<double>(batch.n));
  const Parity parity = parity_of(batch.n + 2 * batch.n / 3);
  const double tv = tv_parity_poisson(batch.vertex_counts, lambda, parity);
  add_infeasible(out, "vertex-count-tv-parity-poisson", 5, tv, 0.15, 0.14, 0.22,
                 "triangles n=9999, 1e4 gluings vs Poisson^odd(log n); the true "
                 "vertex-count mean is H_2n = log n + 1.27, so this TV sits near "
                 "0.17 at every reachable n (see the shifted diagnostic)");
  // Diagnostic at the true finite-n location: mean H_2n = log(2n) + gamma.
  const double shifted =
      std::log(2.0 * static_cast<double>(batch.n)) + 0.57721566490153286;
  const double tv_shifted = tv_parity_poisson(batch.vertex_counts, shifted, parity);
  add(out, "vertex-count-tv-shifted-poisson", 0, tv_shifted, 0.07, "<=",
      tv_shifted <= 0.07,
      "same sample vs Poisson^odd(H_2n): the residual is the Bernoulli-sum "
      "variance deficit, vanishing like 1/log n");
}

void check_xtau_tv(std::vector<Verdict>& out, Context& ctx) {
  const auto& batch = ctx.tau_batch();
  const double lambda = std::log(3.0);
  std::vector<std::int64_t> values;
  for (std::uint64_t r = 0; r < batch.replicas; ++r)
    if (batch.tau[r] != kNoStep) values.push_back(batch.x_at_tau[r]);
  const double tv = tv_empirical_vs_pmf(
      values, [&](std::int64_t k) { return poisson_pmf(lambda, k); },
      poisson_support(lambda));
  add(out, "xtau-tv-poisson-log3", 5, tv, 0.15, "<=", tv <= 0.15,
      "X_tau under the minimal-hole algorithm, triangles n=9999, " +
          std::to_string(values.size()) + " runs reaching a single hole");
}

void check_euler_scaling(std::vector<Verdict>& out, Context& ctx) {
  const auto& batch = ctx.uniform_maps();
  std::vector<double> v(batch.replicas), f(batch.replicas);
  for (std::uint64_t r = 0; r < batch.replicas; ++r) {
    v[r] = static_cast<double>(batch.vertex_counts[r]);
    f[r] = static_cast<double>(batch.face_counts[r]);
  }
  const double corr = std::abs(correlation(v, f));
  add(out, "vertices-faces-correlation", 6, corr, 0.1, "<=", corr <= 0.1,
      "1e4 uniform maps at n=1e4; correlation is normalization invariant");
}

void check_faces_tv(std::vector<Verdict>& out, Context& ctx) {
  const auto& batch = ctx.uniform_maps();
  const double lambda = std::log(static_cast<double>(batch.n));
  const double tv = tv_empirical_vs_pmf(
      batch.face_counts, [&](std::int64_t k) { return poisson_pmf(lambda, k); },
      poisson_support(lambda));
  add_infeasible(out, "faces-tv-poisson-log-n", 0, tv, 0.1, 0.1, 0.22,
                 "faces of 1e4 uniform maps at n=1e4 vs Poisson(log n); the face "
                 "count is the cycle count of S_2n with mean H_2n = log n + 1.27, "
                 "so this TV cannot drop to 0.1 at desk scale");
  const double shifted =
      std::log(2.0 * static_cast<double>(batch.n)) + 0.57721566490153286;
  const double tv_shifted = tv_empirical_vs_pmf(
      batch.face_counts, [&](std::int64_t k) { return poisson_pmf(shifted, k); },
      poisson_support(shifted));
  add(out, "faces-tv-shifted-poisson", 0, tv_shifted, 0.07, "<=", tv_shifted <= 0.07,
      "same sample vs Poisson(H_2n)");
}

void check_diameter(std::vector<Verdict>& out, Context& ctx) {
  const auto& hist = ctx.diameter_10k();
  add(out, "diameter-2-or-3-mass", 7, hist.p23(), 0.95, ">=", hist.p23() >= 0.95,
      "n=1e4, 2000 replicas");
  const bool in_band = hist.p3() >= 0.2 && hist.p3() <= 0.4;
  add(out, "diameter-3-probability", 7, hist.p3(), 0.3, "in [0.2,0.4]", in_band,
      "P(diam=3) at n=1e4; the paper reports xi ~ 0.3 without error bars");
}

void check_xi(std::vector<Verdict>& out, Context& ctx) {
  const auto& xi = ctx.xi();
  const auto& hist = ctx.diameter_10k();
  const bool in_band = xi.estimate >= 0.2 && xi.estimate <= 0.4;
  add(out, "xi-limit-model-band", 7, xi.estimate, 0.3, "in [0.2,0.4]", in_band,
      "A=30, delta=1e-6, 1e5 replicas; 95% CI [" + fmt(xi.ci_95.low) + ", " +
          fmt(xi.ci_95.high) + "]");
  const double gap = std::abs(xi.estimate - hist.p3());
  add(out, "xi-limit-vs-finite-n", 7, gap, 0.05, "<=", gap <= 0.05,
      "limit-model estimate against P(diam=3) at n=1e4");

  const auto& wide = ctx.diameter_100k();
  bool sens_pass = true;
  double worst = 0.0;
  std::string detail = "A: ";
  double previous = -1.0;
  for (const auto& [a, est] : xi.sensitivity) {
    sens_pass = sens_pass && (est >= previous);  // shared-seed monotonicity
    previous = est;
    if (a == 10 || a == 20 || a == 40) {
      const double d = std::abs(est - wide.p3());
      worst = std::max(worst, d);
      detail += std::to_string(a) + "->" + fmt(est) + " ";
    }
  }
  detail += "vs P(diam=3)=" + fmt(wide.p3()) + " at n=1e5";
  add(out, "xi-sensitivity-cross-validation", 7, worst, 0.05, "<=",
      sens_pass && worst <= 0.05, detail);
}

void check_closure_times(std::vector<Verdict>& out, Context& ctx) {
  const auto& batch = ctx.red_batch();
  const auto beta_cdf = [](double x) {
    return 1.0 - std::sqrt(std::max(0.0, 1.0 - std::min(1.0, x)));
  };
  const double ks1 = ks_statistic(batch.ratio1, beta_cdf);
  add(out, "closure-ratio1-ks-beta", 8, ks1, 0.05, "<=", ks1 <= 0.05,
      "theta^(1)/n vs Beta(1,1/2), triangles n=9999, 1e4 runs");

  std::vector<double> second;
  std::vector<double> first_paired;
  for (std::uint64_t r = 0; r < batch.replicas; ++r) {
    if (batch.ratio2[r] < 1.0) {
      second.push_back(batch.ratio2[r]);
      first_paired.push_back(batch.ratio1[r]);
    }
  }
  const double ks2 = ks_statistic(second, beta_cdf);
  add(out, "closure-ratio2-ks-beta", 8, ks2, 0.05, "<=", ks2 <= 0.05,
      "(theta^(2)-theta^(1))/(n-theta^(1)), " + std::to_string(second.size()) +
          " runs with a second closure");
  const double corr = std::abs(correlation(first_paired, second));
  add(out, "closure-increments-correlation", 8, corr, 0.05, "<=", corr <= 0.05,
      "independence of the first two normalized increments");
}

void check_labels(std::vector<Verdict>& out, Context& ctx) {
  const auto& batch = ctx.red_batch();
  const auto beta_cdf = [](double x) {
    return 1.0 - std::sqrt(std::max(0.0, 1.0 - std::min(1.0, x)));
  };
  const double ks = ks_statistic(batch.sigma1_over_n, beta_cdf);
  add(out, "sigma1-ks-beta", 0, ks, 0.05, "<=", ks <= 0.05,
      "tracked-label hit time sigma^(1)/n vs Beta(1,1/2), " +
          std::to_string(batch.sigma1_defined) + " defined");
  const double swallow_rate = static_cast<double>(batch.swallowed_early) /
                              static_cast<double>(batch.tracked_labels);
  add(out, "label-swallow-frequency", 0, swallow_rate, 0.02, "<=",
      swallow_rate <= 0.02, "labels swallowed before 0.9n across 1e4 runs");
}

void check_pd_universality(std::vector<Verdict>& out, Context& ctx) {
  const auto& batch = ctx.triangle_gluings();
  const auto& oracle = ctx.pd_oracle();

  const double loop_mass = mean(batch.loop_mass);
  const bool loop_pass = loop_mass >= 0.48 && loop_mass <= 0.52;
  add(out, "loop-mass-mean", 9, loop_mass, 0.5, "in [0.48,0.52]", loop_pass,
      "mean of sum_i [i,i]/2n over 1e4 triangle gluings; E sum X_i^2 = 1/2");

  double mean_11 = 0.0;
  for (const auto& table : batch.edge_table_sums) mean_11 += table[0];
  mean_11 /= static_cast<double>(batch.replicas);
  const double gap_11 = std::abs(mean_11 - oracle.mean_largest_sq);
  add(out, "edge-11-vs-stick-oracle", 9, gap_11, 0.02, "<=", gap_11 <= 0.02,
      "mean [1,1]/2n = " + fmt(mean_11) + " vs E[X_1^2] = " +
          fmt(oracle.mean_largest_sq) + " from 1e6 stick draws");

  const double ks = ks_statistic(batch.root_degree_fraction,
                                 [](double x) { return std::clamp(x, 0.0, 1.0); });
  add(out, "root-degree-ks-uniform", 9, ks, 0.05, "<=", ks <= 0.05,
      "deg(root)/2n vs Uniform[0,1] over 1e4 gluings");

  double worst_triple = 0.0;
  for (const auto& [key, value] : batch.triple_means) {
    const double target = oracle.triples.at(key);
    worst_triple = std::max(worst_triple, std::abs(value - target));
  }
  add(out, "triangle-triples-vs-oracle", 9, worst_triple, 0.02, "<=",
      worst_triple <= 0.02,
      "[i,j,k]/(n/3) for i,j,k <= 2 vs E[X_i X_j X_k] stick oracle");
}

void check_monitors(std::vector<Verdict>& out, Context& ctx) {
  const auto& batch = ctx.red_batch();
  const bool deltas =
      batch.max_delta_loops <= 2 && batch.max_delta_loops_bigons <= 2;
  add(out, "per-step-loop-bigon-deltas", 10,
      std::max(batch.max_delta_loops, batch.max_delta_loops_bigons), 2, "<=", deltas,
      "max delta L and max delta (L+B) over every step of 1e4 trajectories");
  const double sup_rate = static_cast<double>(batch.sup_loops_ge_sqrt_n) /
                          static_cast<double>(batch.replicas);
  add(out, "sup-loops-below-sqrt-n", 10, sup_rate, 0.01, "<=", sup_rate <= 0.01,
      "P(sup L_i >= sqrt(n)) over 1e4 runs, triangles n=9999");
  const double early_rate = static_cast<double>(batch.early_loop_closure) /
                            static_cast<double>(batch.replicas);
  add(out, "first-loop-closure-late", 10, early_rate, 0.05, "<=", early_rate <= 0.05,
      "P(first loop closure <= 0.9n)");
}

void check_cycle_type_gluings(std::vector<Verdict>& out, std::uint64_t seed) {
  const CycleTypeBatchStats batch = cycle_type_batch(10000, 10000, seed);
  const double lambda = std::log(static_cast<double>(batch.n));
  const double odd_weight = static_cast<double>(batch.odd_parity) /
                            static_cast<double>(batch.replicas);
  const auto pmf = [&](std::int64_t k) {
    const auto ku = static_cast<std::uint64_t>(k);
    return odd_weight * poisson_parity_pmf(lambda, Parity::kOdd, ku) +
           (1.0 - odd_weight) * poisson_parity_pmf(lambda, Parity::kEven, ku);
  };
  const double tv =
      tv_empirical_vs_pmf(batch.vertex_counts, pmf, poisson_support(lambda));
  add_infeasible(out, "cycle-type-vertex-tv", 0, tv, 0.15, 0.14, 0.22,
                 "U_{2n} gluings at n=1e4 vs the parity mixture of Poisson(log n); "
                 "same finite-n location shift as the triangle check; goodness "
                 "failures: " + std::to_string(batch.goodness_failures));

  // Loop counts of U_{2n} approach Poisson(1), chi-square at 1%.
  std::map<std::uint32_t, std::uint64_t> loop_hist;
  for (const auto l : batch.loops) ++loop_hist[std::min(l, 8u)];
  std::vector<std::uint64_t> observed;
  std::vector<double> expected;
  for (std::uint32_t k = 0; k <= 8; ++k) {
    observed.push_back(loop_hist.count(k) ? loop_hist.at(k) : 0);
    double p = poisson_pmf(1.0, k);
    if (k == 8) {
      p = 1.0;
      for (std::uint32_t j = 0; j < 8; ++j) p -= poisson_pmf(1.0, j);
    }
    expected.push_back(p);
  }
  const double p_loops = chi_square(observed, expected).p_value;
  add(out, "config-loops-poisson-1", 0, p_loops, 0.01, ">=", p_loops >= 0.01,
      "loop counts of U_{2n} vs Poisson(1), n=1e4");
}

void check_small_parts_joint(std::vector<Verdict>& out, std::uint64_t seed) {
  // Joint law of (#1s, #2s, #3s) in U_{2n} vs independent Poisson(1/i).
  const std::uint64_t n = 10000;
  const std::uint64_t reps = 10000;
  std::map<std::array<std::uint32_t, 3>, std::uint64_t> counts;
  RngStream rng(seed, 321);
  for (std::uint64_t r = 0; r < reps; ++r) {
    const auto parts = sample_cycle_type(2 * n, rng);
    std::array<std::uint32_t, 3> key{};
    for (const auto p : parts.parts)
      if (p <= 3) ++key[p - 1];
    key[0] = std::min(key[0], 4u);
    key[1] = std::min(key[1], 3u);
    key[2] = std::min(key[2], 2u);
    counts[key] += 1;
  }
  auto tail_pmf = [](double lambda, std::uint32_t k, std::uint32_t cap) {
    if (k < cap) return poisson_pmf(lambda, k);
    double p = 1.0;
    for (std::uint32_t j = 0; j < cap; ++j) p -= poisson_pmf(lambda, j);
    return p;
  };
  std::vector<std::uint64_t> observed;
  std::vector<double> expected;
  for (std::uint32_t a = 0; a <= 4; ++a)
    for (std::uint32_t b = 0; b <= 3; ++b)
      for (std::uint32_t c = 0; c <= 2; ++c) {
        const std::array<std::uint32_t, 3> key{a, b, c};
        observed.push_back(counts.count(key) ? counts.at(key) : 0);
        expected.push_back(tail_pmf(1.0, a, 4) * tail_pmf(0.5, b, 3) *
                           tail_pmf(1.0 / 3.0, c, 2));
      }
  const double p = chi_square(observed, expected).p_value;
  add(out, "small-parts-joint-poisson", 0, p, 0.01, ">=", p >= 0.01,
      "(#1,#2,#3)-gons of U_{2n} vs independent Poisson(1,1/2,1/3), n=1e4");
}

void check_connectivity_and_tau(std::vector<Verdict>& out, std::uint64_t seed) {
  const Configuration config = triangles(3000);
  GluingBatchOptions options;
  const GluingBatchStats batch = gluing_batch(config, 1000, seed + 2, options);
  const double connected_rate =
      static_cast<double>(batch.connected) / static_cast<double>(batch.replicas);
  add(out, "triangles-connectivity", 0, connected_rate, 0.99, ">=",
      connected_rate >= 0.99, "triangles n=3000, 1000 gluings");

  const TauBatchStats tau = min_hole_tau_batch(config, 1000, seed + 3);
  const double bound = 1.2 * static_cast<double>(config.polygon_count()) + 50.0;
  std::uint64_t late = 0;
  for (std::uint64_t r = 0; r < tau.replicas; ++r)
    if (tau.tau[r] == kNoStep || static_cast<double>(tau.tau[r]) >= bound) ++late;
  const double late_rate = static_cast<double>(late) / static_cast<double>(tau.replicas);
  add(out, "tau-hits-one-quickly", 0, late_rate, 0.05, "<=", late_rate <= 0.05,
      "P(tau >= 1.2 #P + 50) under the minimal-hole algorithm, n=3000");
}

void check_rejection_rate(std::vector<Verdict>& out, std::uint64_t seed) {
  const UniformMapBatchStats batch = uniform_map_batch(2, 100000, seed + 4);
  const double rejections =
      static_cast<double>(batch.attempts - batch.replicas);
  const double rate = rejections / static_cast<double>(batch.attempts);
  // Each attempt is disconnected with probability 1/6 = 1 - 5/6.
  const double p = 1.0 / 6.0;
  const double se =
      std::sqrt(p * (1 - p) / static_cast<double>(batch.attempts));
  const double z = std::abs(rate - p) / se;
  add(out, "uniform-map-rejection-rate-n2", 0, z, 4.0, "<=", z <= 4.0,
      "rejection fraction " + fmt(rate) + " vs 1/6 over " +
          std::to_string(batch.attempts) + " attempts");
}

void check_strong_closure_frequency(std::vector<Verdict>& out, std::uint64_t seed) {
  // Under Algorithm R in on-the-fly mode, conditionally on the red marker
  // not sitting on a loop, step i is a strong closure with probability
  // exactly 1/(2(n-i)-1).
  const Configuration config(std::vector<std::uint32_t>(8, 5));  // n = 20
  const std::uint32_t n = 20;
  const std::uint64_t reps = 100000;
  std::vector<std::uint64_t> eligible(n, 0), closures(n, 0);
  for (std::uint64_t r = 0; r < reps; ++r) {
    RngStream pairing_rng = RngStream::substream(seed, 210, r);
    RngStream aux = RngStream::substream(seed, 211, r);
    SurfaceState state(config);
    state.init_red(state.boundary_dart(aux.uniform_below(state.boundary_size())));
    while (!state.done()) {
      const std::uint32_t i = state.step();
      const bool on_loop = state.red_on_loop();
      const Dart a = state.red_position();
      const Dart b = state.random_other_boundary_dart(a, pairing_rng);
      const PeelEvent ev = state.peel(a, b);
      if (!on_loop) {
        ++eligible[i];
        closures[i] += (ev.red_swallowed && ev.kind != PeelKind::kLoopClosure);
      }
      if (ev.red_swallowed && !state.done())
        state.resample_red(state.boundary_dart(aux.uniform_below(state.boundary_size())));
    }
  }
  double expected = 0.0, variance = 0.0;
  std::uint64_t observed = 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    const double p = 1.0 / static_cast<double>(2 * (n - i) - 1);
    expected += static_cast<double>(eligible[i]) * p;
    variance += static_cast<double>(eligible[i]) * p * (1 - p);
    observed += closures[i];
  }
  const double z =
      std::abs(static_cast<double>(observed) - expected) / std::sqrt(variance);
  add(out, "strong-closure-frequency", 0, z, 4.0, "<=", z <= 4.0,
      "observed " + std::to_string(observed) + " vs expected " + fmt(expected) +
          " strong closures over 1e5 runs at n=20");
}

void check_split_merge_step(std::vector<Verdict>& out, std::uint64_t seed) {
  // One uniform-peeling step from a fixed state against the exact
  // enumeration of ordered (edge, partner) pairs.
  const Configuration config({7, 5, 4, 3, 2, 1, 11, 7});  // n = 20
  const ExactDistribution law = exact_uniform_step_law(config);
  std::vector<std::string> keys;
  std::vector<double> probs;
  for (const auto& [key, p] : law) {
    keys.push_back(key);
    probs.push_back(p.get_d());
  }
  std::map<std::string, std::uint64_t> counts;
  const std::uint64_t reps = 100000;
  RngStream rng(seed, 322);
  for (std::uint64_t r = 0; r < reps; ++r) {
    SurfaceState state(config);
    const Dart a = state.boundary_dart(rng.uniform_below(state.boundary_size()));
    const Dart b = state.random_other_boundary_dart(a, rng);
    state.peel(a, b);
    auto perims = state.hole_perimeters();
    std::sort(perims.begin(), perims.end());
    std::string key;
    for (std::size_t i = 0; i < perims.size(); ++i) {
      if (i > 0) key += ',';
      key += std::to_string(perims[i]);
    }
    counts[key] += 1;
  }
  std::vector<std::uint64_t> observed;
  std::uint64_t covered = 0;
  for (const auto& key : keys) {
    observed.push_back(counts.count(key) ? counts.at(key) : 0);
    covered += observed.back();
  }
  double p_value = 0.0;
  if (covered == reps) p_value = chi_square(observed, probs).p_value;
  add(out, "split-merge-one-step-law", 0, p_value, 0.01, ">=", p_value >= 0.01,
      "uniform peeling transition from a mixed 8-hole state, 1e5 steps");
}

void check_neighbor_degree(std::vector<Verdict>& out, std::uint64_t seed) {
  // In ConfigModel(U_{2n}) nearly every vertex has a neighbor of degree
  // comparable to n.
  const std::uint64_t n = 10000;
  const std::uint64_t reps = 500;
  std::uint64_t bad = 0;
  for (std::uint64_t r = 0; r < reps; ++r) {
    RngStream rng = RngStream::substream(seed, 212, r);
    const auto parts = sample_cycle_type(2 * n, rng);
    DegreeSequence degrees;
    degrees.degrees.assign(parts.parts.begin(), parts.parts.end());
    const MultiGraph g = sample_config_model(degrees, rng);
    const double cutoff = 0.01 * 2.0 * static_cast<double>(n);
    std::vector<char> has_big_neighbor(g.vertex_count(), 0);
    for (const auto& [key, count] : g.edges) {
      const auto [i, j] = key;
      if (static_cast<double>(g.degrees[i]) >= cutoff) has_big_neighbor[j] = 1;
      if (static_cast<double>(g.degrees[j]) >= cutoff) has_big_neighbor[i] = 1;
    }
    for (std::uint32_t v = 0; v < g.vertex_count(); ++v)
      if (!has_big_neighbor[v]) {
        ++bad;
        break;
      }
  }
  const double rate = static_cast<double>(bad) / static_cast<double>(reps);
  add(out, "all-vertices-meet-large-degrees", 0, rate, 0.02, "<=", rate <= 0.02,
      "frequency of a vertex with no neighbor of degree >= 0.01*2n, n=1e4");
}

void check_pd1_oracles(std::vector<Verdict>& out, Context& ctx, std::uint64_t seed) {
  const auto& oracle = ctx.pd_oracle();
  const CycleTypeMomentOracle cycles = cycle_type_moment_oracle(100000, 1000000, seed);
  const double largest_gap =
      std::abs(oracle.mean_largest - cycles.mean_largest_fraction);
  add(out, "pd1-largest-stick-vs-cycles", 0, largest_gap, 0.01, "<=",
      largest_gap <= 0.01,
      "E[largest stick] = " + fmt(oracle.mean_largest) + " vs largest cycle of S_1e5 = " +
          fmt(cycles.mean_largest_fraction));
  const double sq_gap = std::abs(oracle.mean_sum_squares - cycles.mean_sum_squares);
  add(out, "pd1-sum-squares-vs-cycles", 0, sq_gap, 0.005, "<=", sq_gap <= 0.005,
      "E[sum sticks^2] = " + fmt(oracle.mean_sum_squares) + " vs cycles " +
          fmt(cycles.mean_sum_squares) + "; both near 1/2");
}

void check_probe(std::vector<Verdict>& out, std::uint64_t seed) {
  const Configuration config = triangles(kTrianglesN);
  const ProbeResult probe = probe_conjecture(config, 4000, seed + 5);
  // Both sides converge to the same parity-conditioned law, so the empirical
  // vertex laws should agree up to the estimator bias sqrt(K/N) ~ 0.03.
  add(out, "probe-vertex-law-gap", 0, probe.vertex_law_gap, 0.05, "<=",
      probe.vertex_law_gap <= 0.05,
      "TV between the vertex laws of G_P and parity-matched uniform maps; "
      "per-side TV vs Poisson^odd(log n): gluing " + fmt(probe.tv_gluing_vs_poisson) +
          ", uniform " + fmt(probe.tv_uniform_vs_poisson));

  const ProbeResult self = probe_self(config, 4000, seed + 6);
  double worst_z = std::abs(self.vertex_mean_gap) / self.vertex_mean_se;
  worst_z = std::max(worst_z, std::abs(self.loop_mass_gap) / self.loop_mass_se);
  for (int i = 0; i < 3; ++i) {
    worst_z = std::max(worst_z, std::abs(self.top_degree_gap[i]) / self.top_degree_se[i]);
    worst_z =
        std::max(worst_z, std::abs(self.small_degree_gap[i]) / self.small_degree_se[i]);
  }
  add(out, "probe-self-comparison-noise", 0, worst_z, 4.5, "<=", worst_z <= 4.5,
      "identical configurations on both sides: all gaps within noise");
}

}  // namespace

bool all_pass(const std::vector<Verdict>& verdicts) {
  for (const auto& v : verdicts)
    if (!v.pass) return false;
  return true;
}

bool gate_pass(const std::vector<Verdict>& verdicts) {
  for (const auto& v : verdicts) {
    if (v.infeasible_as_specified ? !v.sanity_pass : !v.pass) return false;
  }
  return true;
}

const char* criterion_name(int criterion) {
  switch (criterion) {
    case 1: return "exact counting: recursion vs enumeration";
    case 2: return "connectivity asymptotics, exact rationals";
    case 3: return "glue/peel equality";
    case 4: return "mode equivalence";
    case 5: return "vertex-count universality at desk scale";
    case 6: return "Euler-scaling independence";
    case 7: return "diameter is 2 or 3, xi estimates";
    case 8: return "closure-time Beta(1,1/2) law";
    case 9: return "Poisson-Dirichlet edge universality";
    case 10: return "loop/bigon monitors";
    default: return "auxiliary checks";
  }
}

std::vector<Verdict> verify(VerifySuite suite, std::uint64_t seed) {
  std::vector<Verdict> out;
  check_counts(out);
  check_connected_fraction(out);
  check_glue_peel_exhaustive(out, seed);
  check_glue_peel_fuzz(out, seed);
  check_mode_equivalence_exact(out);
  check_unicellular_exact(out);
  if (suite == VerifySuite::kFast) return out;

  Context ctx;
  ctx.seed = seed;
  check_mode_equivalence_chi2(out, seed);
  check_vertex_tv(out, ctx);
  check_xtau_tv(out, ctx);
  check_euler_scaling(out, ctx);
  check_faces_tv(out, ctx);
  check_diameter(out, ctx);
  check_xi(out, ctx);
  check_closure_times(out, ctx);
  check_labels(out, ctx);
  check_pd_universality(out, ctx);
  check_monitors(out, ctx);
  check_cycle_type_gluings(out, seed);
  check_small_parts_joint(out, seed);
  check_connectivity_and_tau(out, seed);
  check_rejection_rate(out, seed);
  check_strong_closure_frequency(out, seed);
  check_split_merge_step(out, seed);
  check_neighbor_degree(out, seed);
  check_pd1_oracles(out, ctx, seed);
  check_probe(out, seed);
  return out;
}

}  // namespace polyglue
