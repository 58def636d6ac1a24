#include "polyglue/configmodel.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "polyglue/combinatorics.hpp"

namespace polyglue {

std::uint64_t DegreeSequence::sum() const {
  return std::accumulate(degrees.begin(), degrees.end(), std::uint64_t{0});
}

void DegreeSequence::validate() const {
  if (degrees.empty()) throw std::invalid_argument("DegreeSequence: empty");
  for (const auto d : degrees)
    if (d == 0) throw std::invalid_argument("DegreeSequence: zero degree");
  if (sum() % 2 != 0) throw std::invalid_argument("DegreeSequence: odd degree sum");
}

MultiGraph sample_config_model(const DegreeSequence& degrees, RngStream& rng) {
  degrees.validate();
  const auto total_legs = static_cast<std::uint32_t>(degrees.sum());

  // Leg l belongs to the vertex whose interval contains l.
  std::vector<std::uint32_t> vertex_of_leg(total_legs);
  std::vector<std::uint32_t> min_leg(degrees.degrees.size());
  std::uint32_t leg = 0;
  for (std::uint32_t v = 0; v < degrees.degrees.size(); ++v) {
    min_leg[v] = leg;
    for (std::uint32_t i = 0; i < degrees.degrees[v]; ++i) vertex_of_leg[leg++] = v;
  }

  const auto pairing = sample_pairing(total_legs, rng);

  // Rank vertices: decreasing degree, ties by smallest leg label.
  std::vector<std::uint32_t> order(degrees.degrees.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (degrees.degrees[a] != degrees.degrees[b])
      return degrees.degrees[a] > degrees.degrees[b];
    return min_leg[a] < min_leg[b];
  });
  std::vector<std::uint32_t> rank(degrees.degrees.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) rank[order[i]] = i;

  MultiGraph g;
  g.degrees.resize(degrees.degrees.size());
  for (std::uint32_t v = 0; v < degrees.degrees.size(); ++v)
    g.degrees[rank[v]] = degrees.degrees[v];
  for (std::uint32_t l = 0; l < total_legs; ++l) {
    const std::uint32_t partner = pairing[l];
    if (partner < l) continue;
    std::uint32_t i = rank[vertex_of_leg[l]];
    std::uint32_t j = rank[vertex_of_leg[partner]];
    if (i > j) std::swap(i, j);
    g.edges[{i, j}] += (i == j) ? 2 : 1;
  }
  return g;
}

std::optional<std::uint32_t> diameter(const MultiGraph& graph) {
  const std::uint32_t n = graph.vertex_count();
  if (n == 0) throw std::invalid_argument("diameter: empty graph");
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (const auto& [key, count] : graph.edges) {
    if (key.first == key.second) continue;  // loops never shorten paths
    adj[key.first].push_back(key.second);
    adj[key.second].push_back(key.first);
  }

  std::uint32_t best = 0;
  std::vector<std::int32_t> dist(n);
  std::vector<std::uint32_t> queue;
  for (std::uint32_t src = 0; src < n; ++src) {
    std::fill(dist.begin(), dist.end(), -1);
    queue.clear();
    queue.push_back(src);
    dist[src] = 0;
    std::size_t head = 0;
    std::uint32_t reached = 1;
    while (head < queue.size()) {
      const std::uint32_t u = queue[head++];
      for (const std::uint32_t v : adj[u]) {
        if (dist[v] >= 0) continue;
        dist[v] = dist[u] + 1;
        best = std::max(best, static_cast<std::uint32_t>(dist[v]));
        queue.push_back(v);
        ++reached;
      }
    }
    if (reached < n) return std::nullopt;
  }
  return best;
}

DiameterHistogram diameter_experiment(std::uint64_t n, std::uint64_t replicas,
                                      std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("diameter_experiment: n must be >= 2");
  DiameterHistogram hist;
  hist.replicas = replicas;
  for (std::uint64_t r = 0; r < replicas; ++r) {
    RngStream rng = RngStream::substream(seed, /*purpose=*/101, r);
    const CyclePartition cycle_type = sample_cycle_type(2 * n, rng);
    DegreeSequence degrees;
    degrees.degrees.assign(cycle_type.parts.begin(), cycle_type.parts.end());
    const MultiGraph g = sample_config_model(degrees, rng);
    const auto d = diameter(g);
    if (!d.has_value())
      ++hist.count_disconnected;
    else if (*d == 0)
      ++hist.count_0;
    else if (*d == 1)
      ++hist.count_1;
    else if (*d == 2)
      ++hist.count_2;
    else if (*d == 3)
      ++hist.count_3;
    else
      ++hist.count_4_plus;
  }
  return hist;
}

namespace {

// One replica of the limit model for a set of cutoffs sharing all draws:
// returns, for each cutoff A in `cutoffs` (increasing), whether some pair of
// small vertices of degree <= A shares no stick.
void xi_replica(RngStream& rng, const std::vector<std::uint32_t>& cutoffs,
                double stick_delta, std::vector<char>& bad_pair_found) {
  const std::uint32_t a_max = cutoffs.back();

  // Small vertices: degree i appears Poisson(1/i) many times.
  struct SmallVertex {
    std::uint32_t degree;
    std::vector<std::uint32_t> marks;  // stick index per uniform, -1u = tail
  };
  std::vector<SmallVertex> small;
  for (std::uint32_t i = 1; i <= a_max; ++i) {
    const std::uint64_t count = rng.poisson(1.0 / static_cast<double>(i));
    for (std::uint64_t c = 0; c < count; ++c)
      small.push_back(SmallVertex{i, {}});
  }

  const StickPartition sticks = sample_pd1(rng, stick_delta);
  std::vector<double> cumulative(sticks.sticks.size());
  double acc = 0.0;
  for (std::size_t s = 0; s < sticks.sticks.size(); ++s) {
    acc += sticks.sticks[s];
    cumulative[s] = acc;
  }

  for (auto& v : small) {
    v.marks.resize(v.degree);
    for (auto& mark : v.marks) {
      const double u = rng.uniform01();
      const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
      mark = (it == cumulative.end())
                 ? static_cast<std::uint32_t>(-1)  // residual tail: shares nothing
                 : static_cast<std::uint32_t>(it - cumulative.begin());
    }
    std::sort(v.marks.begin(), v.marks.end());
  }

  auto share_neighbor = [](const SmallVertex& x, const SmallVertex& y) {
    std::size_t i = 0, j = 0;
    while (i < x.marks.size() && j < y.marks.size()) {
      if (x.marks[i] == static_cast<std::uint32_t>(-1) ||
          y.marks[j] == static_cast<std::uint32_t>(-1))
        return false;  // sorted: only tails remain
      if (x.marks[i] == y.marks[j]) return true;
      if (x.marks[i] < y.marks[j])
        ++i;
      else
        ++j;
    }
    return false;
  };

  for (std::size_t c = 0; c < cutoffs.size(); ++c) {
    bool found = false;
    for (std::size_t x = 0; x < small.size() && !found; ++x) {
      if (small[x].degree > cutoffs[c]) continue;
      for (std::size_t y = x + 1; y < small.size() && !found; ++y) {
        if (small[y].degree > cutoffs[c]) continue;
        if (!share_neighbor(small[x], small[y])) found = true;
      }
    }
    bad_pair_found[c] = found;
  }
}

}  // namespace

XiEstimate xi_limit_model(const LimitModelParams& params) {
  if (params.degree_cutoff == 0) {
    XiEstimate out;
    out.replicas = params.replicas;
    out.ci_95 = Interval{0.0, 0.0};
    return out;
  }
  std::vector<std::uint32_t> cutoffs;
  for (const std::uint32_t a : {5u, 10u, 20u, 40u})
    if (a < params.degree_cutoff) cutoffs.push_back(a);
  cutoffs.push_back(params.degree_cutoff);
  std::sort(cutoffs.begin(), cutoffs.end());

  std::vector<std::uint64_t> hits(cutoffs.size(), 0);
  std::vector<char> found(cutoffs.size(), 0);
  for (std::uint64_t r = 0; r < params.replicas; ++r) {
    RngStream rng = RngStream::substream(params.seed, /*purpose=*/102, r);
    xi_replica(rng, cutoffs, params.stick_delta, found);
    for (std::size_t c = 0; c < cutoffs.size(); ++c) hits[c] += found[c];
  }

  XiEstimate out;
  out.replicas = params.replicas;
  const std::size_t main_idx =
      std::find(cutoffs.begin(), cutoffs.end(), params.degree_cutoff) - cutoffs.begin();
  out.estimate =
      static_cast<double>(hits[main_idx]) / static_cast<double>(params.replicas);
  out.ci_95 = wilson_ci(hits[main_idx], params.replicas, 0.95);
  for (std::size_t c = 0; c < cutoffs.size(); ++c)
    out.sensitivity.emplace_back(
        cutoffs[c], static_cast<double>(hits[c]) / static_cast<double>(params.replicas));
  return out;
}

}  // namespace polyglue
