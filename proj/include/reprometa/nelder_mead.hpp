#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace reprometa {

struct OptimizerConfig {
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  // Per-coordinate offset of the initial simplex around the start point.
  double initial_step = 0.5;
  // Evaluation budget per start: max_evals_per_dim * dim.
  int max_evals_per_dim = 500;
  // Stop when max - min of the simplex function values drops to this or
  // below. 0 means "auto": callers minimizing a 1/M-lattice objective set it
  // to half a lattice step.
  double spread_tolerance = 0.0;
  // Stop as soon as any probe reaches this value (the objective's known
  // lower bound). -inf disables.
  double target_value = -std::numeric_limits<double>::infinity();
  // Number of starts used by callers that restart the search: 1 = start
  // point only, 2 adds start-1, 3 adds start+1 (element-wise offsets).
  int multistart = 3;
  // Trust box half-width around the start point, applied per coordinate by
  // the nuisance profiling: probes outside [init - r, init + r] are projected
  // onto the box. Keeps the search in the data-plausible region; without it
  // the minimization escapes to nuisance values whose simulated tables are
  // all-degenerate and the profile collapses to zero everywhere. 0 disables.
  double eta_search_radius = 0.25;
  // Descend on gamma + degenerate-fraction instead of gamma alone. The
  // reported minimum is still the plain gamma at the probed points; steering
  // only stops the search from chasing probes whose "improvement" consists of
  // replicates with an undefined statistic.
  bool degeneracy_steering = false;
};

struct MinimizeResult {
  std::vector<double> argmin;
  double value = std::numeric_limits<double>::infinity();
  int evaluations = 0;
  bool converged = false;
};

// Nelder-Mead simplex descent (Lagarias et al. step rules). Returns the best
// value seen across ALL probes, including the initial vertices, so the result
// never exceeds f(init).
MinimizeResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                           std::span<const double> init, const OptimizerConfig& cfg);

}  // namespace reprometa
