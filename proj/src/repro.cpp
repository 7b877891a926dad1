#include "reprometa/repro.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "reprometa/binomial.hpp"
#include "reprometa/errors.hpp"
#include "reprometa/estimators.hpp"
#include "reprometa/mathutil.hpp"
#include "reprometa/parallel.hpp"

namespace reprometa {

namespace {

// Probability-space clamp for nuisance probes: expit arguments past +-36 are
// pinned so runaway eta values cannot drive every simulated table to an
// all-zero or all-full state.
const double kProbFloor = expit(-36.0);
const double kProbCeil = 1.0 - kProbFloor;

double clamp_prob(double p) { return std::clamp(p, kProbFloor, kProbCeil); }

}  // namespace

McPool::McPool(const RngStream& stream, std::size_t studies, int mc_samples)
    : studies_(studies), mc_samples_(mc_samples) {
  if (mc_samples_ < 1) throw MetaError("mc_samples must be >= 1");
  if (studies_ < 1) throw MetaError("pool needs at least one study");

  const std::size_t m = static_cast<std::size_t>(mc_samples_);
  sorted_u_.resize(studies_ * 2 * m);
  order_.resize(studies_ * 2 * m);

  std::vector<std::uint32_t> perm(m);
  for (std::size_t i = 0; i < studies_; ++i) {
    for (int arm = 0; arm < 2; ++arm) {
      const std::size_t off = block(i, arm);
      // Derivation path: replicate s -> study i -> arm counter.
      for (std::size_t s = 0; s < m; ++s) {
        sorted_u_[off + s] = stream.child(s).child(i).uniform(static_cast<std::uint64_t>(arm));
      }
      std::iota(perm.begin(), perm.end(), 0u);
      double* u = sorted_u_.data() + off;
      std::sort(perm.begin(), perm.end(),
                [u](std::uint32_t a, std::uint32_t b) { return u[a] < u[b]; });
      std::copy(perm.begin(), perm.end(), order_.begin() + off);
      std::sort(u, u + m);
    }
  }
}

GammaEvaluator::GammaEvaluator(const McPool& pool, SampleSizeRoster roster, ProbMap map)
    : pool_(&pool), roster_(std::move(roster)), map_(map) {
  if (roster_.sizes.size() != pool.studies()) {
    throw LengthMismatch("roster and pool study counts disagree");
  }
  const std::size_t m = static_cast<std::size_t>(pool.mc_samples());
  counts_x_.resize(m);
  counts_y_.resize(m);
  sum_r_.resize(m);
  sum_s_.resize(m);
  inv_total_.reserve(roster_.sizes.size());
  for (const auto& [n, mm] : roster_.sizes) {
    inv_total_.push_back(1.0 / static_cast<double>(n + mm));
  }
}

double GammaEvaluator::operator()(double theta, std::span<const double> eta_tilde, double t) {
  return evaluate(theta, eta_tilde, t).gamma;
}

GammaEvaluator::Evaluation GammaEvaluator::evaluate(double theta,
                                                    std::span<const double> eta_tilde, double t) {
  if (eta_tilde.size() != roster_.sizes.size()) {
    throw LengthMismatch("eta vector length does not match the roster");
  }
  const std::size_t m = sum_r_.size();
  std::fill(sum_r_.begin(), sum_r_.end(), 0.0);
  std::fill(sum_s_.begin(), sum_s_.end(), 0.0);

  for (std::size_t i = 0; i < roster_.sizes.size(); ++i) {
    const auto [n, mm] = roster_.sizes[i];
    const ArmProbs probs = study_probs(theta, eta_tilde[i], map_);
    binomial_quantile_sorted(n, clamp_prob(probs.control), pool_->sorted_uniforms(i, 0),
                             pool_->replicate_order(i, 0), counts_x_);
    binomial_quantile_sorted(mm, clamp_prob(probs.treatment), pool_->sorted_uniforms(i, 1),
                             pool_->replicate_order(i, 1), counts_y_);
    const double inv_total = inv_total_[i];
    const double nd = static_cast<double>(n);
    const double md = static_cast<double>(mm);
    for (std::size_t s = 0; s < m; ++s) {
      const double x = static_cast<double>(counts_x_[s]);
      const double y = static_cast<double>(counts_y_[s]);
      sum_r_[s] += x * (md - y) * inv_total;
      sum_s_[s] += y * (nd - x) * inv_total;
    }
  }

  std::size_t hits = 0;
  std::size_t degenerate = 0;
  for (std::size_t s = 0; s < m; ++s) {
    // Same arithmetic as the observed-statistic path. Degenerate replicates
    // come out as NaN (both sums zero) or +-inf (one sum zero); neither
    // passes the strict comparison, for any t.
    const double w = std::log(sum_s_[s]) - std::log(sum_r_[s]) - theta;
    if (std::fabs(w) < t) {
      ++hits;
    } else if (!std::isfinite(w)) {
      ++degenerate;
    }
  }
  return Evaluation{static_cast<double>(hits) / static_cast<double>(m),
                    static_cast<double>(degenerate) / static_cast<double>(m)};
}

double gamma_hat(const McPool& pool, double theta, std::span<const double> eta_tilde,
                 const SampleSizeRoster& roster, double t, ProbMap map) {
  GammaEvaluator eval(pool, roster, map);
  return eval(theta, eta_tilde, t);
}

NuclearEval nuclear_T(GammaEvaluator& gamma, double theta, double t_obs,
                      std::span<const double> init, const OptimizerConfig& opt) {
  NuclearEval eval;
  eval.theta = theta;
  eval.t_obs = t_obs;
  eval.eta_argmin.assign(init.begin(), init.end());

  if (!std::isfinite(t_obs)) {
    // Infinite observed statistic: every finite simulated W satisfies the
    // comparison, so gamma is 1 and theta is rejected for any alpha < 1.
    eval.t_value = 1.0;
    eval.gamma_at_init = 1.0;
    eval.converged = true;
    return eval;
  }

  // Every probe records its plain gamma; T is the smallest of those. The
  // value handed to the simplex may carry the degeneracy penalty, which only
  // affects where the search walks, never what is reported.
  std::vector<double> projected(init.size());
  auto objective = [&](std::span<const double> eta) {
    if (opt.eta_search_radius > 0.0) {
      for (std::size_t i = 0; i < eta.size(); ++i) {
        projected[i] = std::clamp(eta[i], init[i] - opt.eta_search_radius,
                                  init[i] + opt.eta_search_radius);
      }
    } else {
      projected.assign(eta.begin(), eta.end());
    }
    const GammaEvaluator::Evaluation e = gamma.evaluate(theta, projected, t_obs);
    if (e.gamma < eval.t_value) {
      eval.t_value = e.gamma;
      eval.eta_argmin = projected;
    }
    return opt.degeneracy_steering ? e.gamma + e.degenerate : e.gamma;
  };

  // The pooled objective is deterministic, so this value is bit-identical to
  // the optimizer's own first vertex; T starts here and can only go down.
  eval.gamma_at_init = gamma(theta, init, t_obs);
  eval.t_value = eval.gamma_at_init;
  eval.evaluations = 1;
  if (eval.t_value <= 0.0) {
    eval.converged = true;
    return eval;
  }

  OptimizerConfig run_cfg = opt;
  run_cfg.target_value = std::max(run_cfg.target_value, 0.0);

  const int starts = std::clamp(opt.multistart, 1, 3);
  static constexpr double kStartOffsets[3] = {0.0, -1.0, 1.0};

  std::vector<double> start(init.begin(), init.end());
  bool all_converged = true;
  for (int r = 0; r < starts; ++r) {
    for (std::size_t i = 0; i < start.size(); ++i) start[i] = init[i] + kStartOffsets[r];
    const MinimizeResult res = nelder_mead(objective, start, run_cfg);
    eval.evaluations += res.evaluations;
    all_converged = all_converged && res.converged;
    if (eval.t_value <= 0.0) break;  // cannot improve on the lower bound
  }
  eval.converged = all_converged;
  return eval;
}

std::vector<double> theta_grid(const MetaDataset& d, int q,
                               std::optional<std::pair<double, double>> range_override) {
  if (q < 1) throw MetaError("grid must have at least one point");
  double lo, hi;
  if (range_override) {
    lo = range_override->first;
    hi = range_override->second;
    if (!(lo <= hi)) throw MetaError("grid range must satisfy lo <= hi");
  } else {
    const EstimateCI ci = mh_confidence_interval(d, 0.9995);
    lo = ci.lower;
    hi = ci.upper;
  }
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(q));
  if (q == 1) {
    grid.push_back(0.5 * (lo + hi));
    return grid;
  }
  const double step = (hi - lo) / static_cast<double>(q - 1);
  for (int i = 0; i < q; ++i) grid.push_back(lo + step * static_cast<double>(i));
  return grid;
}

ReproResult repro_confidence_interval(const MetaDataset& d, const AnalysisConfig& cfg) {
  return repro_confidence_interval(d, cfg, RngStream(cfg.seed));
}

ReproResult repro_confidence_interval(const MetaDataset& d, const AnalysisConfig& cfg,
                                      const RngStream& pool_stream) {
  validate_dataset(d);
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw MetaError("alpha must lie in (0,1)");

  const SampleSizeRoster roster = roster_of(d);
  const std::vector<double> init = eta_initial_values(d);
  const std::vector<double> grid = theta_grid(d, cfg.grid_points, cfg.grid_range);
  const double w_mh = mh_log_odds_ratio(d, 0.0);

  const McPool pool(pool_stream, d.k(), cfg.mc_samples);

  OptimizerConfig opt = cfg.optimizer;
  if (opt.spread_tolerance <= 0.0) {
    // The objective lives on a 1/M lattice; spread below one step means the
    // simplex values have collapsed.
    opt.spread_tolerance = 0.5 / static_cast<double>(cfg.mc_samples);
  }

  ReproResult result;
  result.alpha = cfg.alpha;
  result.grid.resize(grid.size());
  result.grid_spacing = grid.size() > 1 ? grid[1] - grid[0] : 0.0;

  const int workers = resolve_workers(cfg.workers);
  std::vector<std::unique_ptr<GammaEvaluator>> evaluators;
  evaluators.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    evaluators.push_back(std::make_unique<GammaEvaluator>(pool, roster, cfg.prob_map));
  }

  parallel_for(grid.size(), workers, [&](std::size_t i, int worker) {
    GammaEvaluator& gamma = *evaluators[static_cast<std::size_t>(worker)];
    const double theta = grid[i];
    const double t_obs = std::fabs(w_mh - theta);
    result.grid[i] = nuclear_T(gamma, theta, t_obs, init, opt);
  });

  double min_t = 2.0;
  double theta_at_min = grid.front();
  int first_accept = -1, last_accept = -1;
  for (std::size_t i = 0; i < result.grid.size(); ++i) {
    const NuclearEval& e = result.grid[i];
    if (e.t_value > e.gamma_at_init) {
      throw std::logic_error("probe minimum exceeded the initializer value");
    }
    if (e.t_value < min_t) {
      min_t = e.t_value;
      theta_at_min = e.theta;
    }
    if (e.t_value <= cfg.alpha) {
      if (first_accept < 0) first_accept = static_cast<int>(i);
      last_accept = static_cast<int>(i);
      ++result.accepted_count;
    }
  }

  if (result.accepted_count == 0) {
    std::ostringstream msg;
    msg << "no grid point accepted at level " << cfg.alpha << " (min T = " << min_t
        << " at theta = " << theta_at_min << ")";
    throw EmptyConfidenceSet(msg.str(), min_t, theta_at_min);
  }

  result.lower = grid[static_cast<std::size_t>(first_accept)];
  result.upper = grid[static_cast<std::size_t>(last_accept)];

  if (cfg.refine_endpoints) {
    GammaEvaluator& gamma = *evaluators[0];
    auto refine = [&](double accepted, double rejected) {
      for (int iter = 0; iter < 5; ++iter) {
        const double mid = 0.5 * (accepted + rejected);
        const NuclearEval e = nuclear_T(gamma, mid, std::fabs(w_mh - mid), init, opt);
        if (e.t_value <= cfg.alpha) {
          accepted = mid;
        } else {
          rejected = mid;
        }
      }
      return accepted;
    };
    if (first_accept > 0) {
      result.refined_lower = refine(result.lower, grid[static_cast<std::size_t>(first_accept - 1)]);
    }
    if (last_accept + 1 < static_cast<int>(grid.size())) {
      result.refined_upper = refine(result.upper, grid[static_cast<std::size_t>(last_accept + 1)]);
    }
  }

  return result;
}

}  // namespace reprometa
