#include "reprometa/odds_params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "reprometa/binomial.hpp"
#include "reprometa/errors.hpp"
#include "reprometa/mathutil.hpp"

namespace reprometa {

namespace {
constexpr double kExpClamp = 1.0 - 1e-12;
}

ArmProbs study_probs(double theta, double eta, ProbMap map) {
  if (map == ProbMap::exp_clamped) {
    return ArmProbs{std::min(std::exp((eta - theta) / 2.0), kExpClamp),
                    std::min(std::exp((eta + theta) / 2.0), kExpClamp)};
  }
  return ArmProbs{expit((eta - theta) / 2.0), expit((eta + theta) / 2.0)};
}

std::vector<ArmProbs> params_to_probs(const OddsParams& p, ProbMap map) {
  std::vector<ArmProbs> out;
  out.reserve(p.eta.size());
  for (double eta : p.eta) out.push_back(study_probs(p.theta, eta, map));
  return out;
}

std::pair<double, double> study_params_from_probs(double pi0, double pi1) {
  if (!(pi0 > 0.0 && pi0 < 1.0 && pi1 > 0.0 && pi1 < 1.0)) {
    std::ostringstream msg;
    msg << "probabilities must lie strictly in (0,1), got (" << pi0 << ", " << pi1 << ")";
    throw DegenerateProbability(msg.str());
  }
  const double lo0 = logit(pi0);
  const double lo1 = logit(pi1);
  return {lo1 - lo0, lo1 + lo0};
}

std::vector<std::pair<double, double>> probs_to_params(std::span<const ArmProbs> probs) {
  std::vector<std::pair<double, double>> out;
  out.reserve(probs.size());
  for (const ArmProbs& p : probs) out.push_back(study_params_from_probs(p.control, p.treatment));
  return out;
}

OddsParams probs_to_common_params(std::span<const ArmProbs> probs, double tol) {
  if (probs.empty()) throw EmptyDataset("no probabilities given");
  OddsParams params;
  params.eta.reserve(probs.size());
  double theta_min = std::numeric_limits<double>::infinity();
  double theta_max = -std::numeric_limits<double>::infinity();
  for (const ArmProbs& p : probs) {
    const auto [theta, eta] = study_params_from_probs(p.control, p.treatment);
    theta_min = std::min(theta_min, theta);
    theta_max = std::max(theta_max, theta);
    params.eta.push_back(eta);
  }
  if (theta_max - theta_min > tol) {
    std::ostringstream msg;
    msg << "per-study log odds ratios span [" << theta_min << ", " << theta_max
        << "], wider than tolerance " << tol;
    throw HeterogeneousTheta(msg.str());
  }
  params.theta = 0.5 * (theta_min + theta_max);
  return params;
}

MetaDataset sample_dataset(std::span<const ArmProbs> probs, const SampleSizeRoster& roster,
                           const RngStream& stream) {
  if (probs.size() != roster.sizes.size()) {
    throw LengthMismatch("probability vector and roster lengths disagree");
  }
  MetaDataset d;
  d.studies.reserve(roster.sizes.size());
  for (std::size_t i = 0; i < roster.sizes.size(); ++i) {
    const auto [n, m] = roster.sizes[i];
    StudyTable s;
    s.control_size = n;
    s.treatment_size = m;
    s.control_events = binomial_quantile(n, probs[i].control, stream.uniform(2 * i));
    s.treatment_events = binomial_quantile(m, probs[i].treatment, stream.uniform(2 * i + 1));
    d.studies.push_back(s);
  }
  return d;
}

MetaDataset sample_dataset(const OddsParams& params, const SampleSizeRoster& roster,
                           const RngStream& stream, ProbMap map) {
  if (params.eta.size() != roster.sizes.size()) {
    throw LengthMismatch("eta vector and roster lengths disagree");
  }
  const std::vector<ArmProbs> probs = params_to_probs(params, map);
  return sample_dataset(std::span<const ArmProbs>(probs), roster, stream);
}

std::vector<double> eta_initial_values(const MetaDataset& d) {
  const std::size_t k = d.studies.size();
  std::vector<double> init(k);
  std::vector<bool> usable(k, false);
  double min_plugin = std::numeric_limits<double>::infinity();
  bool any_usable = false;

  for (std::size_t i = 0; i < k; ++i) {
    const StudyTable& s = d.studies[i];
    if (s.control_events > 0 && s.control_events < s.control_size &&
        s.treatment_events > 0 && s.treatment_events < s.treatment_size) {
      const double pi0 = static_cast<double>(s.control_events) / static_cast<double>(s.control_size);
      const double pi1 = static_cast<double>(s.treatment_events) / static_cast<double>(s.treatment_size);
      init[i] = logit(pi1) + logit(pi0);
      usable[i] = true;
      any_usable = true;
      min_plugin = std::min(min_plugin, init[i]);
    }
  }

  if (!any_usable) {
    // Pseudo-count fallback: add 0.5 to each cell so every study gets a
    // finite startable value.
    for (std::size_t i = 0; i < k; ++i) {
      const StudyTable& s = d.studies[i];
      const double pi0 = (static_cast<double>(s.control_events) + 0.5) /
                         (static_cast<double>(s.control_size) + 1.0);
      const double pi1 = (static_cast<double>(s.treatment_events) + 0.5) /
                         (static_cast<double>(s.treatment_size) + 1.0);
      init[i] = logit(pi1) + logit(pi0);
    }
    return init;
  }

  for (std::size_t i = 0; i < k; ++i) {
    if (!usable[i]) init[i] = min_plugin;
  }
  return init;
}

}  // namespace reprometa
