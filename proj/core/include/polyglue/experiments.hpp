#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "polyglue/configmodel.hpp"
#include "polyglue/enumeration.hpp"
#include "polyglue/peeling.hpp"
#include "polyglue/stats.hpp"
#include "polyglue/surface.hpp"

namespace polyglue {

// Runs fn(r) for r in [0, count), fanned out over worker threads. Each
// replica writes only its own slots, so the aggregate is scheduling
// independent.
void parallel_replicas(std::uint64_t count,
                       const std::function<void(std::uint64_t)>& fn);

// Purpose tags for RngStream::substream, one per experiment family.
namespace stream_purpose {
inline constexpr std::uint64_t kGluing = 1;
inline constexpr std::uint64_t kRootPick = 2;
inline constexpr std::uint64_t kCycleType = 3;
inline constexpr std::uint64_t kUniformMap = 4;
inline constexpr std::uint64_t kPeelPairing = 5;
inline constexpr std::uint64_t kPeelStrategy = 6;
inline constexpr std::uint64_t kPeelLabels = 7;
inline constexpr std::uint64_t kOracle = 8;
}  // namespace stream_purpose

// ----- Gluings of a fixed configuration ------------------------------------

struct GluingBatchOptions {
  std::uint32_t edge_table_k = 0;   // collect mean [i,j]/2n for ranks < k
  bool root_degree = false;         // collect deg(root vertex)/2n per replica
  bool triangle_triples = false;    // collect [i,j,k]/(#triangles) for ranks < 2
};

struct GluingBatchStats {
  std::uint64_t n = 0;
  std::uint64_t replicas = 0;
  std::uint64_t connected = 0;
  std::vector<std::int64_t> vertex_counts;
  std::vector<std::int64_t> face_counts;
  std::vector<std::int64_t> genus_values;
  std::vector<double> loop_mass;             // sum_i [i,i]/2n per replica
  std::vector<std::vector<double>> edge_table_sums;  // per replica flattened k*k
  std::vector<double> root_degree_fraction;
  std::map<std::array<std::uint32_t, 3>, double> triple_means;
};

GluingBatchStats gluing_batch(const Configuration& config, std::uint64_t replicas,
                              std::uint64_t seed, const GluingBatchOptions& options);

// ----- Gluings with fresh U_{2n} perimeters per replica ---------------------

struct CycleTypeBatchStats {
  std::uint64_t n = 0;
  std::uint64_t replicas = 0;
  std::uint64_t connected = 0;
  std::uint64_t odd_parity = 0;       // replicas with n + #P odd
  std::uint64_t goodness_failures = 0;  // L/sqrt(n) >= 1 or B/n >= 1
  std::vector<std::int64_t> vertex_counts;
  std::vector<std::uint8_t> parity_odd;  // per replica
  std::vector<std::uint32_t> loops;
  std::vector<std::uint32_t> bigons;
};

CycleTypeBatchStats cycle_type_batch(std::uint64_t n, std::uint64_t replicas,
                                     std::uint64_t seed);

// ----- Uniform maps ---------------------------------------------------------

struct UniformMapBatchStats {
  std::uint64_t n = 0;
  std::uint64_t replicas = 0;
  std::vector<std::int64_t> vertex_counts;
  std::vector<std::int64_t> face_counts;
  std::vector<std::int64_t> genus_values;
  std::vector<double> loop_mass;
  std::uint64_t attempts = 0;  // includes rejected disconnected draws
};

UniformMapBatchStats uniform_map_batch(std::uint64_t n, std::uint64_t replicas,
                                       std::uint64_t seed,
                                       bool collect_loop_mass = false);

// ----- Algorithm H to the single-hole time ----------------------------------

struct TauBatchStats {
  std::uint64_t replicas = 0;
  std::vector<std::uint32_t> tau;          // kNoStep when H jumps past 1
  std::vector<std::int64_t> x_at_tau;      // true vertices at the stop
  std::uint64_t tau_defined = 0;
};

TauBatchStats min_hole_tau_batch(const Configuration& config, std::uint64_t replicas,
                                 std::uint64_t seed);

// ----- Algorithm R full trajectories ----------------------------------------

struct RedBatchStats {
  std::uint64_t n = 0;
  std::uint64_t replicas = 0;
  std::vector<double> theta1_over_n;     // first strong closure / n
  std::vector<double> ratio1;            // theta1 / n
  std::vector<double> ratio2;            // (theta2-theta1)/(n-theta1)
  std::vector<double> sigma1_over_n;     // first tracked label hit / n
  std::uint64_t sigma1_defined = 0;
  std::uint64_t swallowed_early = 0;     // a label swallowed before 0.9 n
  std::uint64_t tracked_labels = 0;
  std::uint64_t sup_loops_ge_sqrt_n = 0;
  std::uint64_t early_loop_closure = 0;  // first loop closure <= 0.9 n
  std::int32_t max_delta_loops = 0;
  std::int32_t max_delta_loops_bigons = 0;
  std::uint64_t runs_with_two_thetas = 0;
};

RedBatchStats red_vertex_batch(const Configuration& config, std::uint64_t replicas,
                               std::uint64_t seed, std::uint32_t track_k);

// ----- Monte Carlo oracles ---------------------------------------------------

struct PdMomentOracle {
  double mean_largest = 0.0;        // E[X_1]
  double mean_largest_sq = 0.0;     // E[X_1^2]
  double mean_sum_squares = 0.0;    // E[sum X_i^2]
  double mean_x1_x2 = 0.0;          // E[X_1 X_2]
  // E[X_i X_j X_k] for 1 <= i,j,k <= 2, keyed by (i,j,k) ranks (0-based).
  std::map<std::array<std::uint32_t, 3>, double> triples;
};

PdMomentOracle pd1_moment_oracle(std::uint64_t draws, std::uint64_t seed,
                                 double delta = 1e-6);

struct CycleTypeMomentOracle {
  double mean_largest_fraction = 0.0;   // E[largest part / m]
  double mean_sum_squares = 0.0;        // E[sum (part/m)^2]
};

CycleTypeMomentOracle cycle_type_moment_oracle(std::uint64_t m, std::uint64_t draws,
                                               std::uint64_t seed);

// ----- Exact mode-equivalence laws ------------------------------------------

// ----- Conjecture probe -------------------------------------------------------

// Side-by-side statistics of the gluing graph G_P and of uniform maps with
// the same edge count conditioned on matching vertex parity. Gap = gluing
// minus uniform, each with a standard error for a noise test.
struct ProbeResult {
  std::uint64_t n = 0;
  std::uint64_t replicas = 0;
  double tv_gluing_vs_poisson = 0.0;   // vs parity-conditioned Poisson(log n)
  double tv_uniform_vs_poisson = 0.0;
  double vertex_law_gap = 0.0;         // TV between the two empirical V laws
  double vertex_mean_gap = 0.0, vertex_mean_se = 0.0;
  double loop_mass_gap = 0.0, loop_mass_se = 0.0;
  std::array<double, 3> top_degree_gap{}, top_degree_se{};      // deg(v_i)/2n
  std::array<double, 3> small_degree_gap{}, small_degree_se{};  // # of degree-i vertices
};

ProbeResult probe_conjecture(const Configuration& config, std::uint64_t replicas,
                             std::uint64_t seed);

// Self-comparison variant: both sides are gluings of `config` with disjoint
// streams; every gap should then be pure noise.
ProbeResult probe_self(const Configuration& config, std::uint64_t replicas,
                       std::uint64_t seed);

enum class StrategyKind { kMinHole, kUniform, kRedVertex };

// Exact law of the final summary under on-the-fly peeling: enumerates the
// full decision tree (strategy choices, uniform partners, red resampling)
// with exact rational weights. Feasible for |P| <= 3.
ExactDistribution exact_on_the_fly_law(const Configuration& config,
                                       StrategyKind strategy);

// Exact one-step law of the multiset of hole perimeters under uniform
// peeling, by enumerating all ordered (edge, partner) pairs. Keyed by the
// sorted perimeter list "p1,p2,...".
ExactDistribution exact_uniform_step_law(const Configuration& config);

}  // namespace polyglue
