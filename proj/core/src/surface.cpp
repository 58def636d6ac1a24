#include "polyglue/surface.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace polyglue {

namespace {

// Plain union-find over dart labels, local to this translation unit.
class DartUnionFind {
 public:
  explicit DartUnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0u);
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::uint32_t> parent_;
};

void check_involution(const Permutation& alpha) {
  const std::size_t m = alpha.size();
  for (std::uint32_t d = 0; d < m; ++d) {
    if (alpha[d] >= m || alpha[d] == d || alpha[alpha[d]] != d)
      throw std::invalid_argument("pairing is not a fixed-point-free involution");
  }
}

}  // namespace

Configuration::Configuration(std::vector<std::uint32_t> perimeters)
    : perimeters_(std::move(perimeters)) {
  if (perimeters_.empty())
    throw std::invalid_argument("Configuration: needs at least one polygon");
  std::uint64_t total = 0;
  for (const auto p : perimeters_) {
    if (p == 0) throw std::invalid_argument("Configuration: perimeters must be >= 1");
    total += p;
    loops_ += (p == 1);
    bigons_ += (p == 2);
  }
  if (total % 2 != 0)
    throw std::invalid_argument("Configuration: total perimeter must be even");
  half_total_ = total / 2;
}

GoodnessReport goodness_report(const Configuration& config) {
  GoodnessReport r;
  r.loops = config.loop_count();
  r.bigons = config.bigon_count();
  r.polygon_count = config.polygon_count();
  r.half_total = config.half_total();
  const double n = static_cast<double>(config.half_total());
  r.loop_ratio = static_cast<double>(r.loops) / std::sqrt(n);
  r.bigon_ratio = static_cast<double>(r.bigons) / n;
  return r;
}

Permutation canonical_face_permutation(const std::vector<std::uint32_t>& perimeters) {
  std::uint64_t total = 0;
  for (const auto p : perimeters) {
    if (p == 0) throw std::invalid_argument("canonical_face_permutation: zero perimeter");
    total += p;
  }
  Permutation phi(total);
  Dart offset = 0;
  for (const auto p : perimeters) {
    for (std::uint32_t i = 0; i + 1 < p; ++i) phi[offset + i] = offset + i + 1;
    phi[offset + p - 1] = offset;
    offset += p;
  }
  return phi;
}

Permutation canonical_face_permutation(const Configuration& config) {
  return canonical_face_permutation(config.perimeters());
}

Permutation vertex_permutation(const LabeledMap& map) {
  Permutation sigma(map.alpha.size());
  for (Dart d = 0; d < sigma.size(); ++d) sigma[d] = map.phi[map.alpha[d]];
  return sigma;
}

std::uint64_t MapSummary::vertices() const {
  std::uint64_t acc = 0;
  for (const auto& c : components) acc += c.vertices;
  return acc;
}
std::uint64_t MapSummary::faces() const {
  std::uint64_t acc = 0;
  for (const auto& c : components) acc += c.faces;
  return acc;
}
std::uint64_t MapSummary::edges() const {
  std::uint64_t acc = 0;
  for (const auto& c : components) acc += c.edges;
  return acc;
}
std::uint64_t MapSummary::genus() const {
  std::uint64_t acc = 0;
  for (const auto& c : components) acc += c.genus;
  return acc;
}

std::string MapSummary::key() const {
  std::string out;
  for (std::size_t i = 0; i < components.size(); ++i) {
    const auto& c = components[i];
    if (i > 0) out += '|';
    out += std::to_string(c.vertices) + '.' + std::to_string(c.faces) + '.' +
           std::to_string(c.edges) + '.' + std::to_string(c.genus);
  }
  return out;
}

std::uint64_t MultiGraph::edge_count() const {
  std::uint64_t acc = 0;
  for (const auto& [key, count] : edges)
    acc += (key.first == key.second) ? count / 2 : count;
  return acc;
}

std::uint64_t MultiGraph::multiplicity(std::uint32_t i, std::uint32_t j) const {
  const auto it = edges.find(i <= j ? std::make_pair(i, j) : std::make_pair(j, i));
  return it == edges.end() ? 0 : it->second;
}

std::uint64_t MultiGraph::loop_mass() const {
  std::uint64_t acc = 0;
  for (const auto& [key, count] : edges)
    if (key.first == key.second) acc += count;
  return acc;
}

MapSummary summarize(const LabeledMap& map) {
  const std::size_t m = map.alpha.size();
  DartUnionFind components(m);
  for (Dart d = 0; d < m; ++d) {
    components.unite(d, map.alpha[d]);
    components.unite(d, map.phi[d]);
  }

  // Count cycles of a permutation, attributing each cycle to the component
  // of its darts.
  std::map<std::uint32_t, ComponentSummary> per_component;
  auto count_cycles = [&](const Permutation& perm, auto field) {
    std::vector<char> seen(m, 0);
    for (Dart d = 0; d < m; ++d) {
      if (seen[d]) continue;
      Dart e = d;
      while (!seen[e]) {
        seen[e] = 1;
        e = perm[e];
      }
      per_component[components.find(d)].*field += 1;
    }
  };
  const Permutation sigma = vertex_permutation(map);
  count_cycles(sigma, &ComponentSummary::vertices);
  count_cycles(map.phi, &ComponentSummary::faces);
  for (Dart d = 0; d < m; ++d) per_component[components.find(d)].edges += 1;

  MapSummary out;
  for (auto& [root, comp] : per_component) {
    comp.edges /= 2;
    // V - E + F = 2 - 2g per component.
    const std::int64_t two_minus_2g = static_cast<std::int64_t>(comp.vertices) -
                                      static_cast<std::int64_t>(comp.edges) +
                                      static_cast<std::int64_t>(comp.faces);
    const std::int64_t genus2 = 2 - two_minus_2g;
    if (genus2 < 0 || genus2 % 2 != 0)
      throw std::logic_error("summarize: non-integer or negative genus");
    comp.genus = static_cast<std::uint64_t>(genus2 / 2);
    out.components.push_back(comp);
  }
  std::sort(out.components.begin(), out.components.end());
  return out;
}

std::pair<LabeledMap, MapSummary> glue(const Configuration& config,
                                       const Permutation& pairing) {
  if (pairing.size() != config.total_sides())
    throw std::invalid_argument("glue: pairing domain does not match total perimeter");
  check_involution(pairing);
  LabeledMap map;
  map.n = static_cast<std::uint32_t>(config.half_total());
  map.alpha = pairing;
  map.phi = canonical_face_permutation(config);
  MapSummary summary = summarize(map);
  return {std::move(map), std::move(summary)};
}

MultiGraph graph_of(const LabeledMap& map) {
  const std::size_t m = map.alpha.size();
  const Permutation sigma = vertex_permutation(map);

  // Decompose sigma into cycles: vertex id per dart, degree and smallest
  // dart label per vertex.
  std::vector<std::uint32_t> vertex_of(m, 0);
  std::vector<std::uint64_t> degree;
  std::vector<Dart> min_dart;
  std::vector<char> seen(m, 0);
  for (Dart d = 0; d < m; ++d) {
    if (seen[d]) continue;
    const auto v = static_cast<std::uint32_t>(degree.size());
    std::uint64_t deg = 0;
    Dart e = d;
    while (!seen[e]) {
      seen[e] = 1;
      vertex_of[e] = v;
      ++deg;
      e = sigma[e];
    }
    degree.push_back(deg);
    min_dart.push_back(d);
  }

  // Rank vertices: decreasing degree, ties by smallest incident side label.
  std::vector<std::uint32_t> order(degree.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (degree[a] != degree[b]) return degree[a] > degree[b];
    return min_dart[a] < min_dart[b];
  });
  std::vector<std::uint32_t> rank(degree.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) rank[order[i]] = i;

  MultiGraph g;
  g.degrees.resize(degree.size());
  for (std::uint32_t v = 0; v < degree.size(); ++v) g.degrees[rank[v]] = degree[v];
  for (Dart d = 0; d < m; ++d) {
    const Dart e = map.alpha[d];
    if (e < d) continue;
    std::uint32_t i = rank[vertex_of[d]];
    std::uint32_t j = rank[vertex_of[e]];
    if (i > j) std::swap(i, j);
    g.edges[{i, j}] += (i == j) ? 2 : 1;  // [i,i] counts loops twice
  }
  return g;
}

LabeledMap dual(const LabeledMap& map) {
  LabeledMap d;
  d.n = map.n;
  d.alpha = map.alpha;
  d.phi = vertex_permutation(map);
  return d;
}

Permutation sample_permutation(std::uint32_t m, RngStream& rng) {
  Permutation perm(m);
  std::iota(perm.begin(), perm.end(), 0u);
  for (std::uint32_t i = m - 1; i > 0; --i) {
    const auto j = static_cast<std::uint32_t>(rng.uniform_below(i + 1));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

bool is_connected_pair(const Permutation& alpha, const Permutation& phi) {
  const std::size_t m = alpha.size();
  DartUnionFind uf(m);
  for (Dart d = 0; d < m; ++d) {
    uf.unite(d, alpha[d]);
    uf.unite(d, phi[d]);
  }
  const std::uint32_t root = uf.find(0);
  for (Dart d = 1; d < m; ++d)
    if (uf.find(d) != root) return false;
  return true;
}

LabeledMap sample_uniform_map(std::uint32_t n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("sample_uniform_map: n must be >= 1");
  const std::uint32_t m = 2 * n;
  while (true) {
    LabeledMap map;
    map.n = n;
    map.alpha = sample_pairing(m, rng);
    map.phi = sample_permutation(m, rng);
    if (is_connected_pair(map.alpha, map.phi)) return map;
  }
}

std::pair<LabeledMap, MapSummary> sample_gluing(const Configuration& config,
                                                RngStream& rng) {
  const auto pairing =
      sample_pairing(static_cast<std::uint32_t>(config.total_sides()), rng);
  return glue(config, pairing);
}

}  // namespace polyglue
