#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "reprometa/estimators.hpp"
#include "reprometa/repro.hpp"
#include "reprometa/study_data.hpp"

namespace reprometa {

// One simulation design: K tables drawn with per-study control rates
// pi0_i ~ U(0, pi0_max) and treatment rates from the logit shift
// logit(pi1_i) = theta_true + logit(pi0_i).
struct ScenarioConfig {
  std::string label = "scenario";
  double theta_true = 0.0;
  SampleSizeRoster roster;
  double pi0_max = 0.08;
  int replications = 200;
  int mc_samples = 500;   // M per repro analysis
  int grid_points = 101;  // Q per repro analysis
  double alpha = 0.95;
  std::uint64_t seed = 1;
  std::vector<Method> methods = {Method::mh, Method::peto, Method::repro};
  int workers = 1;  // replicate-level parallelism; never affects results
};

struct ScenarioReplicate {
  MetaDataset data;
  OddsParams truth;
  int redraws = 0;  // datasets discarded for violating the standing assumption
};

// Deterministic function of (cfg.seed, rep_index). Replicates with an
// all-zero arm are redrawn under a bumped sub-stream and counted; more than
// 1000 redraws raises ScenarioInfeasible.
ScenarioReplicate generate_scenario_replicate(const ScenarioConfig& cfg, int rep_index);

struct MethodSummary {
  Method method = Method::mh;
  int replications = 0;
  int covered = 0;    // intervals containing theta_true (closed endpoints)
  int defined = 0;    // replicates with a defined interval
  double coverage = 0.0;
  double coverage_se = 0.0;   // binomial MC standard error of the coverage
  double mean_length = 0.0;   // log-OR scale, over defined intervals only
  int undefined = 0;
};

struct CoverageReport {
  std::string label;
  double theta_true = 0.0;
  double alpha = 0.95;
  int replications = 0;
  long long redraws = 0;
  std::vector<MethodSummary> methods;
};

// Empirical coverage and mean interval length per requested method.
// Replicates where a method's interval is undefined count against coverage
// and are excluded from the length mean. Bit-identical output for fixed cfg
// across worker counts.
CoverageReport run_coverage_study(const ScenarioConfig& cfg);

// The two five-study demonstration datasets ('a' and 'b'), each with two
// non-zero-total and three zero-total studies.
MetaDataset builtin_dataset(char id);

// Stand-in for the 48-trial cardiovascular-safety meta-analysis layout the
// simulation study mimics: two large trials (arm sizes 1456+ / ~2635) plus 46
// smaller trials, several with 2:1 allocation. The real trial sizes are not
// bundled; summaries produced with this roster track trends, not published
// digits.
SampleSizeRoster surrogate_trial_roster();

struct ZeroTotalComparison {
  ReproResult full;      // all studies
  ReproResult stripped;  // zero-total studies removed
};

// Runs the grid inversion twice: on d as given and on strip_zero_total(d),
// with the same configuration and pool seed.
ZeroTotalComparison zero_total_comparison(const MetaDataset& d, const AnalysisConfig& cfg);

}  // namespace reprometa
