#include "polyglue/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace polyglue {

mpz_class double_factorial_odd(unsigned n) {
  if (n < 1) throw std::invalid_argument("double_factorial_odd: n must be >= 1");
  mpz_class acc = 1;
  for (unsigned k = 3; k <= 2 * n - 1; k += 2) acc *= k;
  return acc;
}

std::vector<mpz_class> rooted_map_counts(unsigned n_max) {
  if (n_max < 1) throw std::invalid_argument("rooted_map_counts: N must be >= 1");
  // xi[k] = (2k-1)!! for k = 0..n_max, with xi[0] = 1 (empty product).
  std::vector<mpz_class> xi(n_max + 1);
  xi[0] = 1;
  for (unsigned k = 1; k <= n_max; ++k) xi[k] = xi[k - 1] * (2 * k - 1);

  std::vector<mpz_class> c(n_max + 1);
  for (unsigned n = 1; n <= n_max; ++n) {
    mpz_class acc = 2 * n * xi[n];
    for (unsigned l = 1; l < n; ++l) acc -= c[l] * xi[n - l];
    c[n] = acc;
  }
  return {c.begin() + 1, c.end()};
}

mpq_class connected_pair_fraction(unsigned n) {
  if (n < 1) throw std::invalid_argument("connected_pair_fraction: n must be >= 1");
  const mpz_class c_n = rooted_map_counts(n).back();
  mpq_class frac(c_n, 2 * n * double_factorial_odd(n));
  frac.canonicalize();
  return frac;
}

CyclePartition sample_cycle_type(std::uint64_t m, RngStream& rng) {
  if (m < 1) throw std::invalid_argument("sample_cycle_type: m must be >= 1");
  CyclePartition out;
  out.total = m;
  std::uint64_t remaining = m;
  while (remaining > 0) {
    const std::uint64_t part = 1 + rng.uniform_below(remaining);
    out.parts.push_back(part);
    remaining -= part;
  }
  std::sort(out.parts.begin(), out.parts.end(), std::greater<>());
  return out;
}

std::vector<std::uint32_t> sample_pairing(std::uint32_t m, RngStream& rng) {
  if (m < 2 || m % 2 != 0)
    throw std::invalid_argument("sample_pairing: m must be even and >= 2");
  std::vector<std::uint32_t> partner(m);
  std::vector<std::uint32_t> pool(m);   // unmatched labels, unordered
  std::vector<std::uint32_t> pos(m);    // label -> index in pool
  for (std::uint32_t i = 0; i < m; ++i) pool[i] = pos[i] = i;
  std::vector<char> matched(m, 0);
  std::uint32_t sz = m;
  auto pool_remove = [&](std::uint32_t label) {
    const std::uint32_t i = pos[label];
    pool[i] = pool[sz - 1];
    pos[pool[i]] = i;
    --sz;
  };
  // The smallest unmatched label only grows, so a forward cursor finds it in
  // amortized O(1).
  std::uint32_t cursor = 0;
  while (sz > 0) {
    while (matched[cursor]) ++cursor;
    const std::uint32_t a = cursor;
    pool_remove(a);
    const std::uint32_t b = pool[rng.uniform_below(sz)];
    pool_remove(b);
    partner[a] = b;
    partner[b] = a;
    matched[a] = matched[b] = 1;
  }
  return partner;
}

StickPartition sample_pd1(RngStream& rng, double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("sample_pd1: delta must be in (0,1)");
  StickPartition out;
  double remaining = 1.0;
  while (remaining >= delta) {
    const double u = rng.uniform01();
    const double stick = u * remaining;
    if (stick > 0.0) out.sticks.push_back(stick);
    remaining -= stick;
  }
  out.residual_mass = remaining;
  std::sort(out.sticks.begin(), out.sticks.end(), std::greater<>());
  return out;
}

double poisson_parity_pmf(double lambda, Parity parity, std::uint64_t k) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("poisson_parity_pmf: lambda must be > 0");
  if (parity_of(k) != parity) return 0.0;
  // P(k) = lambda^k / k! / sinh(lambda)  (odd class)
  //      = lambda^k / k! / cosh(lambda)  (even class); computed in logs.
  const double log_unnorm = static_cast<double>(k) * std::log(lambda) -
                            std::lgamma(static_cast<double>(k) + 1.0);
  const double log_norm = (parity == Parity::kOdd)
                              ? std::log(std::sinh(lambda))
                              : std::log(std::cosh(lambda));
  return std::exp(log_unnorm - log_norm);
}

}  // namespace polyglue
