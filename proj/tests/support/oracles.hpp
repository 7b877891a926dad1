// Test-only reference implementations, independent of the library's
// computation paths: direct pmf enumeration for gamma, and a one-sample
// Kolmogorov-Smirnov statistic.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace oracles {

inline double log_binom_pmf(std::int64_t n, std::int64_t k, double p) {
  return std::lgamma(static_cast<double>(n + 1)) - std::lgamma(static_cast<double>(k + 1)) -
         std::lgamma(static_cast<double>(n - k + 1)) + static_cast<double>(k) * std::log(p) +
         static_cast<double>(n - k) * std::log1p(-p);
}

// Exact gamma for a single 2x2 study: sums the binomial product pmf over the
// full (x, y) outcome grid, counting outcomes whose centered statistic
// satisfies |W| < t. Probabilities of the two arms are taken directly from
// the logistic map. Degenerate outcomes (x = 0 and y = 0, or a one-sided
// zero) produce NaN / +-inf statistics and never count, matching the strict
// comparison.
inline double exact_gamma_single_study(std::int64_t n, std::int64_t m, double theta, double eta,
                                       double t) {
  const double pi1 = 1.0 / (1.0 + std::exp(-(eta + theta) / 2.0));
  const double pi0 = 1.0 / (1.0 + std::exp(-(eta - theta) / 2.0));
  const double total = static_cast<double>(n + m);

  std::vector<double> pmf_x(static_cast<std::size_t>(n + 1));
  std::vector<double> pmf_y(static_cast<std::size_t>(m + 1));
  for (std::int64_t x = 0; x <= n; ++x) pmf_x[x] = std::exp(log_binom_pmf(n, x, pi0));
  for (std::int64_t y = 0; y <= m; ++y) pmf_y[y] = std::exp(log_binom_pmf(m, y, pi1));

  double gamma = 0.0;
  for (std::int64_t x = 0; x <= n; ++x) {
    for (std::int64_t y = 0; y <= m; ++y) {
      const double sum_r = static_cast<double>(x) * static_cast<double>(m - y) / total;
      const double sum_s = static_cast<double>(y) * static_cast<double>(n - x) / total;
      const double w = std::log(sum_s) - std::log(sum_r) - theta;
      if (std::fabs(w) < t) gamma += pmf_x[x] * pmf_y[y];
    }
  }
  return gamma;
}

// One-sample KS distance of `sample` against U(0,1).
inline double ks_distance_uniform(std::vector<double> sample) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double u = sample[i];
    d = std::max(d, (static_cast<double>(i) + 1.0) / n - u);
    d = std::max(d, u - static_cast<double>(i) / n);
  }
  return d;
}

// Asymptotic critical value at significance level 1%.
inline double ks_critical_1pct(std::size_t n) {
  return 1.6276236115189503 / std::sqrt(static_cast<double>(n));
}

}  // namespace oracles
