#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "polyglue/surface.hpp"

namespace polyglue {

struct EmpiricalSample {
  std::vector<double> values;
};

// Total variation distance between the empirical law of an integer sample
// and a pmf: (1/2) sum_k |p_hat(k) - pmf(k)|, including pmf mass on
// unobserved k. `support` lists every k carrying pmf mass above 1e-15; the
// pmf must sum to 1 within 1e-9 over it.
double tv_empirical_vs_pmf(const std::vector<std::int64_t>& sample,
                           const std::function<double(std::int64_t)>& pmf,
                           const std::vector<std::int64_t>& support);

// sup_x |F_empirical(x) - cdf(x)| over the sample points.
double ks_statistic(std::vector<double> sample,
                    const std::function<double(double)>& cdf);

struct ChiSquareResult {
  double statistic = 0.0;
  std::uint32_t degrees_of_freedom = 0;
  double p_value = 1.0;
};

// Pearson chi-square of observed counts against expected probabilities.
// Categories with expected count < 5 are pooled into a tail bin; throws if
// fewer than two bins survive.
ChiSquareResult chi_square(const std::vector<std::uint64_t>& observed,
                           const std::vector<double>& expected_probs);

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

Interval wilson_ci(std::uint64_t successes, std::uint64_t trials, double confidence);

double mean(const std::vector<double>& xs);
double correlation(const std::vector<double>& xs, const std::vector<double>& ys);

// Regularized lower incomplete gamma P(a, x); used for chi-square p-values.
double gamma_p(double a, double x);
// Standard normal quantile (Acklam's rational approximation).
double normal_quantile(double p);

struct PdEdgeMoments {
  std::uint32_t k_max = 0;
  std::vector<std::vector<double>> mean_table;  // mean of [i,j]/2n, 1-based ranks
  double mean_loop_mass = 0.0;                  // mean of sum_i [i,i]/2n
};

// Averaged normalized edge-count tables over gluings sharing the same n.
PdEdgeMoments pd_edge_moments(const std::vector<MultiGraph>& graphs,
                              std::uint64_t n, std::uint32_t k_max);

}  // namespace polyglue
