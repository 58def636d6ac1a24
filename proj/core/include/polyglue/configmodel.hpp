#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "polyglue/rng.hpp"
#include "polyglue/stats.hpp"
#include "polyglue/surface.hpp"

namespace polyglue {

// Vertex degrees with even sum.
struct DegreeSequence {
  std::vector<std::uint32_t> degrees;

  std::uint64_t sum() const;
  void validate() const;  // throws on odd sum or zero degree
};

// Uniform configuration model: each vertex grows degree-many legs and the
// legs are paired uniformly. MultiGraph conventions match graph_of().
MultiGraph sample_config_model(const DegreeSequence& degrees, RngStream& rng);

// Diameter of the loop-collapsed simple graph by BFS from every vertex;
// nullopt when the graph is disconnected. A single vertex has diameter 0.
std::optional<std::uint32_t> diameter(const MultiGraph& graph);

struct DiameterHistogram {
  std::uint64_t replicas = 0;
  std::uint64_t count_0 = 0, count_1 = 0, count_2 = 0, count_3 = 0;
  std::uint64_t count_4_plus = 0, count_disconnected = 0;

  double p2() const { return static_cast<double>(count_2) / static_cast<double>(replicas); }
  double p3() const { return static_cast<double>(count_3) / static_cast<double>(replicas); }
  double p23() const {
    return static_cast<double>(count_2 + count_3) / static_cast<double>(replicas);
  }
};

// Degrees sampled as the cycle type of a uniform permutation of S_{2n}
// (the configuration-model bridge to uniform maps), then a configuration
// model draw and a diameter computation per replica.
DiameterHistogram diameter_experiment(std::uint64_t n, std::uint64_t replicas,
                                      std::uint64_t seed);

struct LimitModelParams {
  std::uint32_t degree_cutoff = 30;  // A
  double stick_delta = 1e-6;
  std::uint64_t replicas = 100000;
  std::uint64_t seed = 0;
};

struct XiEstimate {
  double estimate = 0.0;
  Interval ci_95;
  std::uint64_t replicas = 0;
  std::vector<std::pair<std::uint32_t, double>> sensitivity;  // (A, estimate)
};

// The diameter constant from the limit model: small vertices of degree
// i <= A appear as independent Poisson(1/i) counts, each carrying i uniform
// marks on [0,1]; an independent PD(1) partition gives the stick intervals.
// Two small vertices share a neighbor when some pair of their marks falls in
// a common stick. The estimate is the probability that some pair of small
// vertices shares none. Marks landing in the un-broken residual tail are
// treated as sharing with nobody.
XiEstimate xi_limit_model(const LimitModelParams& params);

}  // namespace polyglue
