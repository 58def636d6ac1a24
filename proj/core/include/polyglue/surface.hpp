#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "polyglue/combinatorics.hpp"
#include "polyglue/rng.hpp"

namespace polyglue {

using Dart = std::uint32_t;
inline constexpr Dart kNoDart = static_cast<Dart>(-1);

// A permutation of {0..m-1} stored as its value table.
using Permutation = std::vector<Dart>;

// Multiset of polygon perimeters. Side labels are 0-based internally and
// 1-based in serialized form. The polygon order given at construction is
// kept: polygon j owns the labels [offset(j), offset(j) + perimeter(j)).
class Configuration {
 public:
  explicit Configuration(std::vector<std::uint32_t> perimeters);

  const std::vector<std::uint32_t>& perimeters() const { return perimeters_; }
  std::uint64_t half_total() const { return half_total_; }      // |P| = n
  std::uint32_t polygon_count() const { return static_cast<std::uint32_t>(perimeters_.size()); }
  std::uint64_t total_sides() const { return 2 * half_total_; }  // 2n
  std::uint32_t loop_count() const { return loops_; }            // L(P)
  std::uint32_t bigon_count() const { return bigons_; }          // B(P)

 private:
  std::vector<std::uint32_t> perimeters_;
  std::uint64_t half_total_ = 0;
  std::uint32_t loops_ = 0;
  std::uint32_t bigons_ = 0;
};

struct GoodnessReport {
  std::uint32_t loops = 0;
  std::uint32_t bigons = 0;
  std::uint32_t polygon_count = 0;
  std::uint64_t half_total = 0;
  double loop_ratio = 0.0;   // L / sqrt(|P|)
  double bigon_ratio = 0.0;  // B / |P|
};

GoodnessReport goodness_report(const Configuration& config);

// One cycle per polygon, in label order: {3} -> (0 1 2), {1,2} -> (0)(1 2).
// The list overload imposes no evenness constraint; the layout is pure.
Permutation canonical_face_permutation(const std::vector<std::uint32_t>& perimeters);
Permutation canonical_face_permutation(const Configuration& config);

// A labeled map with n edges: `alpha` the fixed-point-free pairing of the 2n
// oriented sides and `phi` the face permutation. Vertices are the cycles of
// phi . alpha.
struct LabeledMap {
  std::uint32_t n = 0;
  Permutation alpha;
  Permutation phi;
};

Permutation vertex_permutation(const LabeledMap& map);  // phi . alpha

struct ComponentSummary {
  std::uint64_t vertices = 0;
  std::uint64_t faces = 0;
  std::uint64_t edges = 0;
  std::uint64_t genus = 0;

  auto operator<=>(const ComponentSummary&) const = default;
};

// Euler data of a glued surface, possibly disconnected. Components are
// sorted (lexicographically on their tuples) so summaries compare exactly.
struct MapSummary {
  std::vector<ComponentSummary> components;

  bool connected() const { return components.size() == 1; }
  std::uint64_t component_count() const { return components.size(); }
  std::uint64_t vertices() const;
  std::uint64_t faces() const;
  std::uint64_t edges() const;
  std::uint64_t genus() const;

  bool operator==(const MapSummary&) const = default;
  std::string key() const;  // canonical "V.F.E.g|V.F.E.g|..." string
};

// Graph of the glued surface. Vertices are ranked by decreasing degree with
// ties broken by smallest incident side label; edges[{i,j}] (i <= j) counts
// edges between ranks i and j, with edges[{i,i}] twice the loop count.
struct MultiGraph {
  std::vector<std::uint64_t> degrees;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> edges;

  std::uint32_t vertex_count() const { return static_cast<std::uint32_t>(degrees.size()); }
  std::uint64_t edge_count() const;
  std::uint64_t multiplicity(std::uint32_t i, std::uint32_t j) const;
  std::uint64_t loop_mass() const;  // sum_i edges[{i,i}]

  bool operator==(const MultiGraph&) const = default;
};

// Glue the polygon sides of `config` by the pairing `alpha`. Faces are the
// cycles of the canonical face permutation, vertices the cycles of
// phi . alpha, components the orbits of the group generated by both.
std::pair<LabeledMap, MapSummary> glue(const Configuration& config,
                                       const Permutation& pairing);

MapSummary summarize(const LabeledMap& map);

MultiGraph graph_of(const LabeledMap& map);

// Dual map: faces and vertices exchange, alpha is unchanged. Implemented as
// (alpha, phi . alpha); dual(dual(m)) == m.
LabeledMap dual(const LabeledMap& map);

// Uniform labeled connected map with n edges. Rejection sampling of a
// uniform (pairing, permutation) pair; the rejection probability is
// 1 - connected_pair_fraction(n) ~ 1/(2n).
LabeledMap sample_uniform_map(std::uint32_t n, RngStream& rng);

std::pair<LabeledMap, MapSummary> sample_gluing(const Configuration& config,
                                                RngStream& rng);

// Uniform permutation of {0..m-1} (Fisher-Yates).
Permutation sample_permutation(std::uint32_t m, RngStream& rng);

bool is_connected_pair(const Permutation& alpha, const Permutation& phi);

}  // namespace polyglue
