#pragma once

#include <string>

#include "reprometa/study_data.hpp"

namespace reprometa {

enum class Method { mh, peto, repro };

std::string method_name(Method m);

// Interval on the log odds ratio scale. point is NaN for methods that do not
// produce one (the grid-inversion interval).
struct EstimateCI {
  double point = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.0;
  Method method = Method::mh;
};

// Pooled Mantel-Haenszel log odds ratio, treatment vs control:
// log(sum_k S_k / sum_k R_k) with R_k = x(m-y)/(n+m), S_k = y(n-x)/(n+m).
// Zero-total studies contribute nothing. With cc > 0, cc is added to all four
// cells of every table that has a zero cell before forming R and S.
// Returns +-inf when exactly one sum is zero; throws UndefinedEstimate when
// both are.
double mh_log_odds_ratio(const MetaDataset& d, double cc = 0.0);

// MH point estimate with a Robins-Breslow-Greenland variance interval.
// Throws UndefinedEstimate when the point estimate is not finite.
EstimateCI mh_confidence_interval(const MetaDataset& d, double level, double cc = 0.0);

// Robins-Breslow-Greenland variance of the MH log odds ratio (reduces to the
// Woolf variance for a single table).
double mh_rbg_variance(const MetaDataset& d, double cc = 0.0);

// Peto one-step estimate psi = sum(O-E)/sum(V) with hypergeometric moments
// E = (x+y)m/N, V = (x+y)(N-x-y)nm / (N^2 (N-1)), and interval
// psi +- z/sqrt(sum V). Tables with N = 1 are excluded; zero-total tables
// contribute nothing. Throws UndefinedEstimate when sum(V) = 0.
EstimateCI peto_log_odds_ratio_ci(const MetaDataset& d, double level);

// Centered MH statistic: mh_log_odds_ratio(d, 0) - theta. Never throws: an
// undefined pooled estimate yields NaN, a one-sided-zero estimate +-inf.
// IEEE comparisons against these values implement the Monte-Carlo loop's
// counting rule directly (neither NaN nor +-inf is < any finite threshold).
double w_statistic(const MetaDataset& d, double theta) noexcept;

namespace detail {

struct MhSums {
  double sum_r = 0.0;  // sum of x(m-y)/(n+m)
  double sum_s = 0.0;  // sum of y(n-x)/(n+m)
};

MhSums mh_sums(const MetaDataset& d, double cc) noexcept;

// log(sum_s / sum_r): NaN if both zero, +-inf if exactly one is.
double mh_from_sums(double sum_s, double sum_r) noexcept;

}  // namespace detail

}  // namespace reprometa
