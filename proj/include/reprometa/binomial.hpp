#pragma once

#include <cstdint>
#include <span>

namespace reprometa {

// Inverse-CDF binomial draw: smallest k with P(X <= k) >= u for X ~ Bin(n, p).
// Monotone nondecreasing in u and in p; common-random-number reuse downstream
// relies on the monotonicity in p. p <= 0 and p >= 1 are point masses at 0
// and n. Expected cost O(n*p).
std::int64_t binomial_quantile(std::int64_t n, double p, double u);

// Batch version for uniforms presented in ascending order. out[order[j]]
// receives the quantile of sorted_u[j]. One walk over the CDF serves the
// whole batch: O(n*p + M) instead of O(n*p * M). Results agree with
// binomial_quantile(n, p, sorted_u[j]) element-wise.
void binomial_quantile_sorted(std::int64_t n, double p,
                              std::span<const double> sorted_u,
                              std::span<const std::uint32_t> order,
                              std::span<std::int64_t> out);

}  // namespace reprometa
