#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "reprometa/nelder_mead.hpp"
#include "reprometa/odds_params.hpp"
#include "reprometa/rng.hpp"
#include "reprometa/study_data.hpp"

namespace reprometa {

// Fixed pool of M x K x 2 uniforms, generated once per analysis and reused
// across every theta grid point and every eta probe (common random numbers).
// Reuse makes the Monte-Carlo objective a deterministic function of
// (theta, eta), so it can be minimized and tested.
//
// Per (study, arm) the uniforms are kept sorted together with the permutation
// back to replicate order; batch inverse-CDF walks consume them in one pass.
class McPool {
 public:
  McPool(const RngStream& stream, std::size_t studies, int mc_samples);

  int mc_samples() const { return mc_samples_; }
  std::size_t studies() const { return studies_; }

  std::span<const double> sorted_uniforms(std::size_t study, int arm) const {
    const std::size_t off = block(study, arm);
    return {sorted_u_.data() + off, static_cast<std::size_t>(mc_samples_)};
  }
  std::span<const std::uint32_t> replicate_order(std::size_t study, int arm) const {
    const std::size_t off = block(study, arm);
    return {order_.data() + off, static_cast<std::size_t>(mc_samples_)};
  }

 private:
  std::size_t block(std::size_t study, int arm) const {
    return (study * 2 + static_cast<std::size_t>(arm)) * static_cast<std::size_t>(mc_samples_);
  }

  std::size_t studies_;
  int mc_samples_;
  std::vector<double> sorted_u_;
  std::vector<std::uint32_t> order_;
};

// Computes gamma-hat: the fraction of the pool's M replicates - tables drawn
// at (theta, eta) through the pool's fixed uniforms - whose centered pooled
// statistic satisfies |W| < t strictly. Replicates with an infinite or
// undefined W never count, for any t. Owns per-call scratch, so create one
// evaluator per worker thread.
class GammaEvaluator {
 public:
  GammaEvaluator(const McPool& pool, SampleSizeRoster roster, ProbMap map = ProbMap::logit);

  double operator()(double theta, std::span<const double> eta_tilde, double t);

  // gamma-hat together with the fraction of replicates whose statistic was
  // not defined (NaN / +-inf). The sum gamma + degenerate is what the search
  // descends on when degeneracy steering is enabled: probes cannot "win" by
  // driving tables into the all-zero state.
  struct Evaluation {
    double gamma = 0.0;       // strict-comparison fraction per the counting rule
    double degenerate = 0.0;  // non-finite statistic fraction
  };
  Evaluation evaluate(double theta, std::span<const double> eta_tilde, double t);

 private:
  const McPool* pool_;
  SampleSizeRoster roster_;
  ProbMap map_;
  std::vector<double> inv_total_;
  std::vector<std::int64_t> counts_x_, counts_y_;
  std::vector<double> sum_r_, sum_s_;
};

// One-shot gamma-hat (builds scratch internally).
double gamma_hat(const McPool& pool, double theta, std::span<const double> eta_tilde,
                 const SampleSizeRoster& roster, double t, ProbMap map = ProbMap::logit);

// Minimized gamma-hat at one grid point.
struct NuclearEval {
  double theta = 0.0;
  double t_obs = 0.0;          // |W(observed; theta)|
  double t_value = 1.0;        // T = min over probed eta of gamma-hat
  double gamma_at_init = 1.0;  // objective at the plug-in initializer
  std::vector<double> eta_argmin;
  int evaluations = 0;
  bool converged = false;
};

// Derivative-free minimization of eta -> gamma_hat(theta, eta, t_obs),
// started from `init` plus the configured restarts (init, init-1, init+1).
// The returned minimum is over every probe, so t_value <= gamma_at_init
// always. A non-finite t_obs short-circuits to T = 1 (rejected at any
// alpha < 1): with an infinite observed statistic the comparison admits all
// finite replicates, so the true gamma is 1 regardless of eta.
NuclearEval nuclear_T(GammaEvaluator& gamma, double theta, double t_obs,
                      std::span<const double> init, const OptimizerConfig& opt);

// Q equally spaced candidate values spanning the 99.95% MH interval of the
// dataset (or an explicit range). Q = 1 degenerates to the midpoint.
std::vector<double> theta_grid(const MetaDataset& d, int q,
                               std::optional<std::pair<double, double>> range_override = {});

struct AnalysisConfig {
  double alpha = 0.95;
  int mc_samples = 1000;  // M
  int grid_points = 201;  // Q
  std::optional<std::pair<double, double>> grid_range;
  std::uint64_t seed = 1;
  int workers = 1;  // 0 = hardware concurrency; never affects results
  ProbMap prob_map = ProbMap::logit;
  bool refine_endpoints = false;
  OptimizerConfig optimizer;
};

struct ReproResult {
  std::vector<NuclearEval> grid;
  double alpha = 0.95;
  double lower = 0.0;  // min accepted grid point
  double upper = 0.0;  // max accepted grid point
  int accepted_count = 0;
  double grid_spacing = 0.0;
  // Bisection-tightened endpoints (only when refinement was requested and
  // there was a rejected neighbor to bisect against).
  std::optional<double> refined_lower;
  std::optional<double> refined_upper;

  double width() const { return upper - lower; }
};

// Level-alpha confidence set for the common log odds ratio: builds one pool,
// evaluates the minimized gamma-hat at every grid point, and keeps the points
// with T <= alpha. Throws EmptyConfidenceSet (with the grid's min-T
// diagnostics) when nothing is accepted. Deterministic for fixed
// (seed, config) regardless of worker count.
ReproResult repro_confidence_interval(const MetaDataset& d, const AnalysisConfig& cfg);

// Same, but with the pool drawn from an explicit stream (used by the
// simulation harness to give each replicate an independent derived stream).
ReproResult repro_confidence_interval(const MetaDataset& d, const AnalysisConfig& cfg,
                                      const RngStream& pool_stream);

}  // namespace reprometa
