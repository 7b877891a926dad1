#include "reprometa/estimators.hpp"

#include <cmath>
#include <limits>

#include "reprometa/errors.hpp"
#include "reprometa/mathutil.hpp"

namespace reprometa {

std::string method_name(Method m) {
  switch (m) {
    case Method::mh: return "mh";
    case Method::peto: return "peto";
    case Method::repro: return "repro";
  }
  return "unknown";
}

namespace detail {

MhSums mh_sums(const MetaDataset& d, double cc) noexcept {
  MhSums sums;
  for (const StudyTable& s : d.studies) {
    double x = static_cast<double>(s.control_events);
    double nx = static_cast<double>(s.control_size - s.control_events);
    double y = static_cast<double>(s.treatment_events);
    double my = static_cast<double>(s.treatment_size - s.treatment_events);
    if (cc > 0.0 && (x == 0.0 || nx == 0.0 || y == 0.0 || my == 0.0)) {
      x += cc;
      nx += cc;
      y += cc;
      my += cc;
    }
    const double total = x + nx + y + my;
    sums.sum_r += x * my / total;
    sums.sum_s += y * nx / total;
  }
  return sums;
}

double mh_from_sums(double sum_s, double sum_r) noexcept {
  // log(sum_s) - log(sum_r) rather than log of the ratio: the sums swap
  // bit-exactly under an arm swap, so the estimate negates exactly.
  // Edge values: both sums zero -> -inf - (-inf) = NaN; one zero -> +-inf.
  return std::log(sum_s) - std::log(sum_r);
}

}  // namespace detail

double mh_log_odds_ratio(const MetaDataset& d, double cc) {
  const auto sums = detail::mh_sums(d, cc);
  if (sums.sum_r == 0.0 && sums.sum_s == 0.0) {
    throw UndefinedEstimate("Mantel-Haenszel estimate undefined: both cross-product sums are zero");
  }
  return detail::mh_from_sums(sums.sum_s, sums.sum_r);
}

double mh_rbg_variance(const MetaDataset& d, double cc) {
  // Cells oriented treatment vs control: a = y, b = m-y, c = x, d = n-x.
  double sum_r = 0.0, sum_s = 0.0;
  double sum_pr = 0.0, sum_ps_qr = 0.0, sum_qs = 0.0;
  for (const StudyTable& s : d.studies) {
    double a = static_cast<double>(s.treatment_events);
    double b = static_cast<double>(s.treatment_size - s.treatment_events);
    double c = static_cast<double>(s.control_events);
    double dd = static_cast<double>(s.control_size - s.control_events);
    if (cc > 0.0 && (a == 0.0 || b == 0.0 || c == 0.0 || dd == 0.0)) {
      a += cc;
      b += cc;
      c += cc;
      dd += cc;
    }
    const double total = a + b + c + dd;
    const double p = (a + dd) / total;
    const double q = (b + c) / total;
    const double r = a * dd / total;
    const double ss = b * c / total;
    sum_r += r;
    sum_s += ss;
    sum_pr += p * r;
    sum_ps_qr += p * ss + q * r;
    sum_qs += q * ss;
  }
  return sum_pr / (2.0 * sum_r * sum_r) + sum_ps_qr / (2.0 * sum_r * sum_s) +
         sum_qs / (2.0 * sum_s * sum_s);
}

EstimateCI mh_confidence_interval(const MetaDataset& d, double level, double cc) {
  const double point = mh_log_odds_ratio(d, cc);
  if (!std::isfinite(point)) {
    throw UndefinedEstimate("Mantel-Haenszel interval undefined: point estimate is infinite");
  }
  const double sd = std::sqrt(mh_rbg_variance(d, cc));
  const double half = two_sided_z(level) * sd;
  return EstimateCI{point, point - half, point + half, level, Method::mh};
}

EstimateCI peto_log_odds_ratio_ci(const MetaDataset& d, double level) {
  double sum_oe = 0.0;
  double sum_v = 0.0;
  for (const StudyTable& s : d.studies) {
    const double n = static_cast<double>(s.control_size);
    const double m = static_cast<double>(s.treatment_size);
    const double total = n + m;
    if (total <= 1.0) continue;
    const double events = static_cast<double>(s.control_events + s.treatment_events);
    // y - (x+y)m/N rewritten as (yn - xm)/N: the integer cross products are
    // exact in double, so an arm swap negates the term exactly.
    sum_oe += (static_cast<double>(s.treatment_events) * n -
               static_cast<double>(s.control_events) * m) / total;
    sum_v += events * (total - events) * n * m / (total * total * (total - 1.0));
  }
  if (sum_v == 0.0) {
    throw UndefinedEstimate("Peto estimate undefined: hypergeometric variance sum is zero");
  }
  const double point = sum_oe / sum_v;
  const double half = two_sided_z(level) / std::sqrt(sum_v);
  return EstimateCI{point, point - half, point + half, level, Method::peto};
}

double w_statistic(const MetaDataset& d, double theta) noexcept {
  const auto sums = detail::mh_sums(d, 0.0);
  return detail::mh_from_sums(sums.sum_s, sums.sum_r) - theta;
}

}  // namespace reprometa
