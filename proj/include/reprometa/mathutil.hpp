#pragma once

#include <cmath>

namespace reprometa {

// Numerically stable logistic function 1 / (1 + exp(-z)).
inline double expit(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(p / (1 - p)); caller guarantees p in (0,1).
inline double logit(double p) { return std::log(p) - std::log1p(-p); }

// Standard normal CDF.
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Standard normal quantile function, Wichura's AS 241 (PPND16).
// Accurate to ~1e-15 over (0,1); returns +-inf at the endpoints.
double normal_quantile(double p);

// Two-sided z multiplier for a central interval of the given level,
// i.e. normal_quantile((1 + level) / 2).
inline double two_sided_z(double level) { return normal_quantile(0.5 + level / 2.0); }

}  // namespace reprometa
