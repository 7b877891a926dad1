#include "reprometa/binomial.hpp"

#include <cmath>

namespace reprometa {
namespace {

// pmf values below exp(kLogTiny) underflow to ~1e-304; their summed mass can
// never reach the smallest uniform this library produces (0.5 * 2^-53).
constexpr double kLogTiny = -700.0;

// Forward walk over the Bin(n,p) CDF, 0 < p <= 1/2. advance_to(u) moves k
// upward until cdf >= u (or k == n) and is reused across ascending targets.
class BinomialCdfWalk {
 public:
  BinomialCdfWalk(std::int64_t n, double p) : n_(n), odds_(p / (1.0 - p)) {
    double log_pmf = static_cast<double>(n) * std::log1p(-p);
    if (log_pmf < kLogTiny) {
      const double log_odds = std::log(p) - std::log1p(-p);
      while (log_pmf < kLogTiny && k_ < n_) {
        log_pmf += log_odds + std::log(static_cast<double>(n_ - k_) /
                                       static_cast<double>(k_ + 1));
        ++k_;
      }
    }
    pmf_ = std::exp(log_pmf);
    cdf_ = pmf_;
  }

  std::int64_t advance_to(double u) {
    while (cdf_ < u && k_ < n_) {
      pmf_ *= odds_ * static_cast<double>(n_ - k_) / static_cast<double>(k_ + 1);
      ++k_;
      cdf_ += pmf_;
    }
    return k_;
  }

 private:
  std::int64_t n_;
  std::int64_t k_ = 0;
  double odds_;
  double pmf_;
  double cdf_;
};

}  // namespace

std::int64_t binomial_quantile(std::int64_t n, double p, double u) {
  if (n <= 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  if (p > 0.5) return n - binomial_quantile(n, 1.0 - p, 1.0 - u);
  BinomialCdfWalk walk(n, p);
  return walk.advance_to(u);
}

void binomial_quantile_sorted(std::int64_t n, double p,
                              std::span<const double> sorted_u,
                              std::span<const std::uint32_t> order,
                              std::span<std::int64_t> out) {
  const std::size_t m = sorted_u.size();
  if (n <= 0 || p <= 0.0) {
    for (std::size_t j = 0; j < m; ++j) out[order[j]] = 0;
    return;
  }
  if (p >= 1.0) {
    for (std::size_t j = 0; j < m; ++j) out[order[j]] = n;
    return;
  }
  if (p > 0.5) {
    // Complement walk; 1 - u ascends as j descends.
    BinomialCdfWalk walk(n, 1.0 - p);
    for (std::size_t j = m; j-- > 0;) {
      out[order[j]] = n - walk.advance_to(1.0 - sorted_u[j]);
    }
    return;
  }
  BinomialCdfWalk walk(n, p);
  for (std::size_t j = 0; j < m; ++j) {
    out[order[j]] = walk.advance_to(sorted_u[j]);
  }
}

}  // namespace reprometa
