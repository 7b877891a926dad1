#include "reprometa/sim.hpp"

#include <cmath>
#include <optional>

#include "reprometa/binomial.hpp"
#include "reprometa/errors.hpp"
#include "reprometa/mathutil.hpp"
#include "reprometa/parallel.hpp"

namespace reprometa {

namespace {

constexpr int kMaxRedraws = 1000;

// Sub-stream tags under each replicate's stream: one domain for dataset
// draws (further split by attempt), one for the analysis pool.
constexpr std::uint64_t kDataDomain = 0;
constexpr std::uint64_t kAnalysisDomain = 1;

void validate_scenario(const ScenarioConfig& cfg) {
  if (cfg.replications < 1) throw MetaError("replications must be >= 1");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw MetaError("alpha must lie in (0,1)");
  if (!(cfg.pi0_max > 0.0 && cfg.pi0_max <= 1.0)) throw MetaError("pi0_max must lie in (0,1]");
  if (cfg.mc_samples < 1) throw MetaError("mc_samples must be >= 1");
  if (cfg.grid_points < 1) throw MetaError("grid_points must be >= 1");
  if (cfg.methods.empty()) throw MetaError("no methods requested");
  validate_roster(cfg.roster);
}

}  // namespace

ScenarioReplicate generate_scenario_replicate(const ScenarioConfig& cfg, int rep_index) {
  validate_scenario(cfg);
  const std::size_t k = cfg.roster.k();
  const RngStream data_stream =
      RngStream(cfg.seed).child(static_cast<std::uint64_t>(rep_index)).child(kDataDomain);

  for (int attempt = 0; attempt <= kMaxRedraws; ++attempt) {
    const RngStream draw = data_stream.child(static_cast<std::uint64_t>(attempt));
    ScenarioReplicate rep;
    rep.redraws = attempt;
    rep.truth.theta = cfg.theta_true;
    rep.truth.eta.reserve(k);
    rep.data.studies.reserve(k);
    rep.data.label = cfg.label;

    bool any_control = false, any_treatment = false;
    for (std::size_t i = 0; i < k; ++i) {
      const RngStream st = draw.child(i);
      const auto [n, m] = cfg.roster.sizes[i];
      const double pi0 = cfg.pi0_max * st.uniform(0);
      const double pi1 = expit(cfg.theta_true + logit(pi0));
      rep.truth.eta.push_back(logit(pi1) + logit(pi0));

      StudyTable s;
      s.control_size = n;
      s.treatment_size = m;
      s.control_events = binomial_quantile(n, pi0, st.uniform(1));
      s.treatment_events = binomial_quantile(m, pi1, st.uniform(2));
      rep.data.studies.push_back(s);
      any_control = any_control || s.control_events > 0;
      any_treatment = any_treatment || s.treatment_events > 0;
    }
    if (any_control && any_treatment) return rep;
  }
  throw ScenarioInfeasible("replicate generation exhausted " + std::to_string(kMaxRedraws) +
                           " redraws; the scenario almost surely produces all-zero arms");
}

CoverageReport run_coverage_study(const ScenarioConfig& cfg) {
  validate_scenario(cfg);

  struct Outcome {
    std::vector<std::optional<std::pair<double, double>>> intervals;
    int redraws = 0;
  };
  std::vector<Outcome> outcomes(static_cast<std::size_t>(cfg.replications));

  AnalysisConfig acfg;
  acfg.alpha = cfg.alpha;
  acfg.mc_samples = cfg.mc_samples;
  acfg.grid_points = cfg.grid_points;
  acfg.workers = 1;  // parallelism lives at the replicate level

  parallel_for(static_cast<std::size_t>(cfg.replications), cfg.workers, [&](std::size_t r, int) {
    const ScenarioReplicate rep = generate_scenario_replicate(cfg, static_cast<int>(r));
    Outcome& out = outcomes[r];
    out.redraws = rep.redraws;
    out.intervals.resize(cfg.methods.size());

    for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
      try {
        switch (cfg.methods[mi]) {
          case Method::mh: {
            const EstimateCI ci = mh_confidence_interval(rep.data, cfg.alpha);
            out.intervals[mi] = {ci.lower, ci.upper};
            break;
          }
          case Method::peto: {
            const EstimateCI ci = peto_log_odds_ratio_ci(rep.data, cfg.alpha);
            out.intervals[mi] = {ci.lower, ci.upper};
            break;
          }
          case Method::repro: {
            const RngStream pool_stream =
                RngStream(cfg.seed).child(r).child(kAnalysisDomain);
            const ReproResult res = repro_confidence_interval(rep.data, acfg, pool_stream);
            out.intervals[mi] = {res.lower, res.upper};
            break;
          }
        }
      } catch (const UndefinedEstimate&) {
      } catch (const EmptyConfidenceSet&) {
      }
    }
  });

  CoverageReport report;
  report.label = cfg.label;
  report.theta_true = cfg.theta_true;
  report.alpha = cfg.alpha;
  report.replications = cfg.replications;
  report.methods.resize(cfg.methods.size());

  for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
    MethodSummary& s = report.methods[mi];
    s.method = cfg.methods[mi];
    s.replications = cfg.replications;
    double length_sum = 0.0;
    for (const Outcome& out : outcomes) {
      const auto& iv = out.intervals[mi];
      if (!iv) continue;
      ++s.defined;
      length_sum += iv->second - iv->first;
      if (iv->first <= cfg.theta_true && cfg.theta_true <= iv->second) ++s.covered;
    }
    s.undefined = cfg.replications - s.defined;
    s.coverage = static_cast<double>(s.covered) / static_cast<double>(cfg.replications);
    s.coverage_se =
        std::sqrt(s.coverage * (1.0 - s.coverage) / static_cast<double>(cfg.replications));
    s.mean_length = s.defined > 0 ? length_sum / static_cast<double>(s.defined) : 0.0;
  }
  for (const Outcome& out : outcomes) report.redraws += out.redraws;
  return report;
}

MetaDataset builtin_dataset(char id) {
  MetaDataset d;
  switch (id) {
    case 'a':
      d.label = "builtin-a";
      d.studies = {{3, 100, 2, 100}, {2, 300, 1, 300}, {0, 600, 0, 300},
                   {0, 600, 0, 300}, {0, 300, 0, 300}};
      return d;
    case 'b':
      d.label = "builtin-b";
      d.studies = {{2, 100, 2, 100}, {1, 50, 1, 50}, {0, 100, 0, 300},
                   {0, 100, 0, 300}, {0, 100, 0, 300}};
      return d;
    default:
      throw MetaError(std::string("unknown builtin dataset '") + id + "'; use 'a' or 'b'");
  }
}

SampleSizeRoster surrogate_trial_roster() {
  // (control, treatment) arm sizes. Two large trials, then 46 smaller ones
  // with a mix of 1:1 and roughly 2:1 allocation.
  static const std::pair<std::int64_t, std::int64_t> rows[] = {
      {2895, 1456}, {2634, 2635}, {176, 357}, {207, 391},  {185, 774},  {109, 213},
      {115, 232},   {47, 101},    {43, 121},  {114, 110},  {188, 382},  {95, 284},
      {168, 339},   {76, 160},    {69, 138},  {111, 232},  {54, 110},   {41, 88},
      {99, 196},    {126, 252},   {58, 116},  {71, 145},   {143, 288},  {223, 443},
      {32, 67},     {89, 178},    {102, 206}, {153, 304},  {244, 489},  {317, 638},
      {66, 135},    {80, 163},    {135, 272}, {197, 395},  {276, 555},  {405, 812},
      {583, 1172},  {49, 98},     {61, 124},  {457, 916},  {84, 170},   {93, 187},
      {118, 235},   {162, 326},   {211, 424}, {259, 521},  {331, 664},  {372, 745}};
  SampleSizeRoster roster;
  roster.sizes.assign(std::begin(rows), std::end(rows));
  return roster;
}

ZeroTotalComparison zero_total_comparison(const MetaDataset& d, const AnalysisConfig& cfg) {
  ZeroTotalComparison cmp{repro_confidence_interval(d, cfg),
                          repro_confidence_interval(strip_zero_total(d), cfg)};
  return cmp;
}

}  // namespace reprometa
