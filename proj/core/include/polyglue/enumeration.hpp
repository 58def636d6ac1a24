#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <map>
#include <string>

#include "polyglue/surface.hpp"

namespace polyglue {

// Exact probability table keyed by a canonical outcome string.
using ExactDistribution = std::map<std::string, mpq_class>;

// Visits each of the (2|P|-1)!! pairings of the sides of `config` exactly
// once, always matching the smallest unmatched label first. Guarded to
// |P| <= 8.
void enumerate_pairings(const Configuration& config,
                        const std::function<void(const Permutation&)>& visitor);

// Same enumeration over the pairings of {0..m-1} for even m <= 16.
void enumerate_pairings(std::uint32_t m,
                        const std::function<void(const Permutation&)>& visitor);

// Exact count of connected (involution, permutation) pairs on 2n labels,
// i.e. #C_{2n}. Guarded to n <= 4 (4.2e6 pairs at n = 4). The rooted map
// count is #C_{2n} / (2n-1)!.
mpz_class enumerate_permutation_pairs(unsigned n);
mpz_class rooted_map_count_by_enumeration(unsigned n);

// Exact pmf of the vertex count of the gluing of a single 2n-gon, n <= 7.
std::map<std::uint64_t, mpq_class> exact_unicellular_vertex_law(unsigned n);

// Exact law of the glue() summary under a uniform pairing of `config`,
// keyed by MapSummary::key(). Same size guard as enumerate_pairings.
ExactDistribution exact_summary_law(const Configuration& config);

}  // namespace polyglue
