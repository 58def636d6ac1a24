#include "polyglue/enumeration.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "polyglue/combinatorics.hpp"

namespace polyglue {

namespace {

void recurse_pairings(Permutation& partner, std::vector<char>& used,
                      std::uint32_t cursor,
                      const std::function<void(const Permutation&)>& visitor) {
  const auto m = static_cast<std::uint32_t>(partner.size());
  while (cursor < m && used[cursor]) ++cursor;
  if (cursor == m) {
    visitor(partner);
    return;
  }
  used[cursor] = 1;
  for (std::uint32_t b = cursor + 1; b < m; ++b) {
    if (used[b]) continue;
    used[b] = 1;
    partner[cursor] = b;
    partner[b] = cursor;
    recurse_pairings(partner, used, cursor + 1, visitor);
    used[b] = 0;
  }
  used[cursor] = 0;
}

}  // namespace

void enumerate_pairings(std::uint32_t m,
                        const std::function<void(const Permutation&)>& visitor) {
  if (m == 0 || m % 2 != 0)
    throw std::invalid_argument("enumerate_pairings: m must be even and >= 2");
  if (m > 16) throw std::invalid_argument("enumerate_pairings: size guard m <= 16 exceeded");
  Permutation partner(m, kNoDart);
  std::vector<char> used(m, 0);
  recurse_pairings(partner, used, 0, visitor);
}

void enumerate_pairings(const Configuration& config,
                        const std::function<void(const Permutation&)>& visitor) {
  if (config.half_total() > 8)
    throw std::invalid_argument("enumerate_pairings: size guard |P| <= 8 exceeded");
  enumerate_pairings(static_cast<std::uint32_t>(config.total_sides()), visitor);
}

mpz_class enumerate_permutation_pairs(unsigned n) {
  if (n < 1 || n > 4)
    throw std::invalid_argument("enumerate_permutation_pairs: size guard n <= 4");
  const std::uint32_t m = 2 * n;
  std::uint64_t connected = 0;
  enumerate_pairings(m, [&](const Permutation& alpha) {
    Permutation phi(m);
    std::iota(phi.begin(), phi.end(), 0u);
    do {
      connected += is_connected_pair(alpha, phi);
    } while (std::next_permutation(phi.begin(), phi.end()));
  });
  return mpz_class(static_cast<unsigned long>(connected));
}

mpz_class rooted_map_count_by_enumeration(unsigned n) {
  mpz_class connected = enumerate_permutation_pairs(n);
  mpz_class factorial = 1;
  for (unsigned k = 2; k <= 2 * n - 1; ++k) factorial *= k;
  if (connected % factorial != 0)
    throw std::logic_error("connected pair count not divisible by (2n-1)!");
  return connected / factorial;
}

std::map<std::uint64_t, mpq_class> exact_unicellular_vertex_law(unsigned n) {
  if (n < 1 || n > 7)
    throw std::invalid_argument("exact_unicellular_vertex_law: size guard n <= 7");
  const Configuration config({2 * n});
  std::map<std::uint64_t, std::uint64_t> counts;
  std::uint64_t total = 0;
  enumerate_pairings(config, [&](const Permutation& pairing) {
    const auto [map, summary] = glue(config, pairing);
    counts[summary.vertices()] += 1;
    ++total;
  });
  std::map<std::uint64_t, mpq_class> law;
  for (const auto& [v, c] : counts) {
    mpq_class p(c, total);
    p.canonicalize();
    law[v] = p;
  }
  return law;
}

ExactDistribution exact_summary_law(const Configuration& config) {
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t total = 0;
  enumerate_pairings(config, [&](const Permutation& pairing) {
    const auto [map, summary] = glue(config, pairing);
    counts[summary.key()] += 1;
    ++total;
  });
  ExactDistribution law;
  for (const auto& [key, c] : counts) {
    mpq_class p(c, total);
    p.canonicalize();
    law[key] = p;
  }
  return law;
}

}  // namespace polyglue
