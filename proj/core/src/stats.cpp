#include "polyglue/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polyglue {

double tv_empirical_vs_pmf(const std::vector<std::int64_t>& sample,
                           const std::function<double(std::int64_t)>& pmf,
                           const std::vector<std::int64_t>& support) {
  if (sample.empty()) throw std::invalid_argument("tv_empirical_vs_pmf: empty sample");
  double pmf_total = 0.0;
  for (const auto k : support) pmf_total += pmf(k);
  if (std::abs(pmf_total - 1.0) > 1e-9)
    throw std::invalid_argument("tv_empirical_vs_pmf: pmf does not sum to 1 on support");

  std::map<std::int64_t, double> empirical;
  const double w = 1.0 / static_cast<double>(sample.size());
  for (const auto k : sample) empirical[k] += w;

  std::map<std::int64_t, double> expected;
  for (const auto k : support) expected[k] = pmf(k);

  double sum = 0.0;
  for (const auto& [k, p_hat] : empirical) {
    const auto it = expected.find(k);
    sum += std::abs(p_hat - (it == expected.end() ? 0.0 : it->second));
  }
  for (const auto& [k, p] : expected)
    if (!empirical.count(k)) sum += p;
  return 0.5 * sum;
}

double ks_statistic(std::vector<double> sample,
                    const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(sample.begin(), sample.end());
  const double inv_n = 1.0 / static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, static_cast<double>(i + 1) * inv_n - f);
    d = std::max(d, f - static_cast<double>(i) * inv_n);
  }
  return d;
}

double gamma_p(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_p: bad arguments");
  return boost::math::gamma_p(a, x);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p in (0,1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

ChiSquareResult chi_square(const std::vector<std::uint64_t>& observed,
                           const std::vector<double>& expected_probs) {
  if (observed.size() != expected_probs.size() || observed.empty())
    throw std::invalid_argument("chi_square: size mismatch");
  std::uint64_t total = 0;
  for (const auto o : observed) total += o;
  if (total == 0) throw std::invalid_argument("chi_square: empty counts");

  // Pool categories with small expectation into one tail bin.
  std::vector<double> expected_counts;
  std::vector<double> observed_counts;
  double pooled_expected = 0.0, pooled_observed = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = expected_probs[i] * static_cast<double>(total);
    if (e < 5.0) {
      pooled_expected += e;
      pooled_observed += static_cast<double>(observed[i]);
    } else {
      expected_counts.push_back(e);
      observed_counts.push_back(static_cast<double>(observed[i]));
    }
  }
  if (pooled_expected > 0.0) {
    expected_counts.push_back(pooled_expected);
    observed_counts.push_back(pooled_observed);
  }
  if (expected_counts.size() < 2)
    throw std::invalid_argument("chi_square: degenerate binning");

  ChiSquareResult result;
  for (std::size_t i = 0; i < expected_counts.size(); ++i) {
    const double diff = observed_counts[i] - expected_counts[i];
    result.statistic += diff * diff / expected_counts[i];
  }
  result.degrees_of_freedom = static_cast<std::uint32_t>(expected_counts.size() - 1);
  const boost::math::chi_squared_distribution<double> dist(result.degrees_of_freedom);
  result.p_value = boost::math::cdf(boost::math::complement(dist, result.statistic));
  return result;
}

Interval wilson_ci(std::uint64_t successes, std::uint64_t trials, double confidence) {
  if (trials == 0) throw std::invalid_argument("wilson_ci: zero trials");
  if (successes > trials) throw std::invalid_argument("wilson_ci: successes > trials");
  const double z = normal_quantile(0.5 + confidence / 2.0);
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return Interval{std::max(0.0, center - half), std::min(1.0, center + half)};
}

double mean(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("mean: empty");
  double acc = 0.0;
  for (const auto x : xs) acc += x;
  return acc / static_cast<double>(xs.size());
}

double correlation(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("correlation: need two equal-length samples");
  const double mx = mean(xs), my = mean(ys);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  return sxy / std::sqrt(sxx * syy);
}

PdEdgeMoments pd_edge_moments(const std::vector<MultiGraph>& graphs,
                              std::uint64_t n, std::uint32_t k_max) {
  if (graphs.empty()) throw std::invalid_argument("pd_edge_moments: no graphs");
  PdEdgeMoments out;
  out.k_max = k_max;
  out.mean_table.assign(k_max, std::vector<double>(k_max, 0.0));
  const double scale = 1.0 / (2.0 * static_cast<double>(n));
  const double w = 1.0 / static_cast<double>(graphs.size());
  for (const auto& g : graphs) {
    out.mean_loop_mass += w * scale * static_cast<double>(g.loop_mass());
    for (std::uint32_t i = 0; i < k_max; ++i)
      for (std::uint32_t j = 0; j < k_max; ++j)
        out.mean_table[i][j] +=
            w * scale * static_cast<double>(g.multiplicity(i, j));
  }
  return out;
}

}  // namespace polyglue
