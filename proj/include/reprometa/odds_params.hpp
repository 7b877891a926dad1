#pragma once

#include <span>
#include <utility>
#include <vector>

#include "reprometa/rng.hpp"
#include "reprometa/study_data.hpp"

namespace reprometa {

// How (theta, eta) maps to per-arm event probabilities.
//
// logit:       pi1 = expit((eta + theta)/2), pi0 = expit((eta - theta)/2).
//              Exact inverse of the log-odds definitions of theta and eta;
//              the default.
// exp_clamped: pi1 = min(exp((eta + theta)/2), 1 - 1e-12) and likewise for
//              pi0. Rare-event exponential approximation, kept for fidelity
//              experiments.
//
// The treatment arm carries +theta under both maps, so theta is the log odds
// ratio of treatment vs control.
enum class ProbMap { logit, exp_clamped };

// Common log odds ratio plus the per-study nuisance values
// eta_i = log-odds(pi1_i) + log-odds(pi0_i).
struct OddsParams {
  double theta = 0.0;
  std::vector<double> eta;
};

// Per-study event probabilities (control, treatment).
struct ArmProbs {
  double control = 0.0;    // pi0
  double treatment = 0.0;  // pi1
};

ArmProbs study_probs(double theta, double eta, ProbMap map = ProbMap::logit);

std::vector<ArmProbs> params_to_probs(const OddsParams& p, ProbMap map = ProbMap::logit);

// (theta_i, eta_i) for one study; probabilities must be strictly inside (0,1)
// or DegenerateProbability is thrown.
std::pair<double, double> study_params_from_probs(double pi0, double pi1);

std::vector<std::pair<double, double>> probs_to_params(std::span<const ArmProbs> probs);

// Collapses per-study params to a common-theta OddsParams; per-study thetas
// differing by more than tol raise HeterogeneousTheta.
OddsParams probs_to_common_params(std::span<const ArmProbs> probs, double tol = 1e-9);

// One simulated dataset: X_i ~ Bin(n_i, pi0_i), Y_i ~ Bin(m_i, pi1_i), drawn
// by inverse CDF from one uniform per arm per study (counters 2i, 2i+1).
// Probabilities may be exactly 0 or 1 (point-mass arms).
MetaDataset sample_dataset(std::span<const ArmProbs> probs, const SampleSizeRoster& roster,
                           const RngStream& stream);

MetaDataset sample_dataset(const OddsParams& params, const SampleSizeRoster& roster,
                           const RngStream& stream, ProbMap map = ProbMap::logit);

// Optimizer starting point for the nuisance vector.
//
// Studies with all four cells positive use the plug-in value
//   log-odds(y/m) + log-odds(x/n);
// every other study receives the minimum of those plug-in values. If no study
// yields a finite plug-in value, all studies fall back to the +0.5 pseudo-count
// estimate log-odds((y+.5)/(m+1)) + log-odds((x+.5)/(n+1)).
std::vector<double> eta_initial_values(const MetaDataset& d);

}  // namespace reprometa
