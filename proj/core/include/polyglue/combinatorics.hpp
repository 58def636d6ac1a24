#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "polyglue/rng.hpp"

namespace polyglue {

// Cycle type of a permutation: parts sorted decreasing, summing to `total`.
struct CyclePartition {
  std::vector<std::uint64_t> parts;
  std::uint64_t total = 0;
};

// Truncated stick-breaking partition of [0,1]: sticks sorted decreasing,
// sum(sticks) + residual_mass == 1 up to rounding.
struct StickPartition {
  std::vector<double> sticks;
  double residual_mass = 0.0;
};

enum class Parity { kEven = 0, kOdd = 1 };

inline Parity parity_of(std::uint64_t v) {
  return (v % 2 == 0) ? Parity::kEven : Parity::kOdd;
}

// (2n-1)!! = 1 * 3 * 5 * ... * (2n-1), the number of perfect matchings of 2n
// labeled points.
mpz_class double_factorial_odd(unsigned n);

// c_1..c_N where c_n is the number of rooted maps with n edges, from the
// recursion c_n = 2n * (2n-1)!! - sum_{l=1}^{n-1} c_l * (2(n-l)-1)!!.
std::vector<mpz_class> rooted_map_counts(unsigned n_max);

// #C_{2n} / ((2n)! (2n-1)!!) = c_n / (2n * (2n-1)!!), the probability that a
// uniform (pairing, permutation) pair encodes a connected map. Exact.
mpq_class connected_pair_fraction(unsigned n);

// Cycle type of a uniform permutation of S_m, sampled sequentially: the part
// containing a fixed point is uniform on {1..m'} among the m' remaining
// points.
CyclePartition sample_cycle_type(std::uint64_t m, RngStream& rng);

// Uniform fixed-point-free involution on {0..m-1} (m even), returned as the
// partner array. Built by matching the smallest unmatched label with a
// uniform other unmatched label.
std::vector<std::uint32_t> sample_pairing(std::uint32_t m, RngStream& rng);

// PD(1) partition by uniform stick breaking, truncated once the residual
// mass drops below `delta`, sticks sorted decreasing.
StickPartition sample_pd1(RngStream& rng, double delta = 1e-6);

// P(X = k) for X ~ Poisson(lambda) conditioned on the given parity.
// Zero for k of the wrong parity.
double poisson_parity_pmf(double lambda, Parity parity, std::uint64_t k);

}  // namespace polyglue
