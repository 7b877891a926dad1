#include <doctest.h>

#include <cmath>

#include "reprometa/errors.hpp"
#include "reprometa/mathutil.hpp"
#include "reprometa/sim.hpp"

using namespace reprometa;

namespace {

ScenarioConfig small_scenario() {
  ScenarioConfig cfg;
  cfg.label = "unit";
  cfg.theta_true = 0.0;
  cfg.roster.sizes = {{300, 300}, {300, 300}, {300, 300}, {300, 300}, {300, 300}};
  cfg.replications = 50;
  cfg.mc_samples = 200;
  cfg.grid_points = 31;
  cfg.seed = 5;
  return cfg;
}

}  // namespace

TEST_CASE("scenario replicate: logit shift, determinism, truth echo") {
  ScenarioConfig cfg = small_scenario();

  SUBCASE("theta 0 means equal rates") {
    const ScenarioReplicate rep = generate_scenario_replicate(cfg, 3);
    REQUIRE(rep.truth.eta.size() == 5);
    CHECK(rep.truth.theta == 0.0);
    const auto probs = params_to_probs(rep.truth);
    for (const ArmProbs& p : probs) {
      CHECK(p.treatment == doctest::Approx(p.control).epsilon(1e-12));
      CHECK(p.control > 0.0);
      CHECK(p.control < 0.08);
    }
  }

  SUBCASE("logit shift at odds ratio 9") {
    cfg.theta_true = std::log(9.0);
    const ScenarioReplicate rep = generate_scenario_replicate(cfg, 0);
    const auto probs = params_to_probs(rep.truth);
    for (const ArmProbs& p : probs) {
      const double want = expit(std::log(9.0) + logit(p.control));
      CHECK(p.treatment == doctest::Approx(want).epsilon(1e-12));
    }
    // spot value: pi0 = 0.05 maps to 9/28
    CHECK(expit(std::log(9.0) + logit(0.05)) == doctest::Approx(9.0 / 28.0).epsilon(1e-12));
  }

  SUBCASE("same (cfg, rep) twice is identical") {
    const ScenarioReplicate a = generate_scenario_replicate(cfg, 11);
    const ScenarioReplicate b = generate_scenario_replicate(cfg, 11);
    REQUIRE(a.data.k() == b.data.k());
    for (std::size_t i = 0; i < a.data.k(); ++i) {
      CHECK(a.data.studies[i].control_events == b.data.studies[i].control_events);
      CHECK(a.data.studies[i].treatment_events == b.data.studies[i].treatment_events);
    }
    CHECK(a.redraws == b.redraws);
  }

  SUBCASE("replicates satisfy the standing assumption") {
    for (int r = 0; r < 30; ++r) {
      const ScenarioReplicate rep = generate_scenario_replicate(cfg, r);
      CHECK_NOTHROW(validate_dataset(rep.data));
    }
  }
}

TEST_CASE("infeasible scenarios give up after the redraw budget") {
  ScenarioConfig cfg;
  cfg.theta_true = 0.0;
  cfg.roster.sizes = {{1, 1}};
  cfg.pi0_max = 1e-9;  // events essentially never occur
  CHECK_THROWS_AS(generate_scenario_replicate(cfg, 0), ScenarioInfeasible);
}

TEST_CASE("redraws are counted, not silently absorbed") {
  ScenarioConfig cfg;
  cfg.theta_true = 0.0;
  cfg.roster.sizes = {{8, 8}};  // tiny trial, all-zero draws are common
  cfg.replications = 40;
  cfg.mc_samples = 100;
  cfg.grid_points = 11;
  cfg.methods = {Method::mh};
  cfg.seed = 9;
  const CoverageReport rep = run_coverage_study(cfg);
  CHECK(rep.redraws > 0);
}

TEST_CASE("coverage study: MH lands near nominal at moderate scale") {
  ScenarioConfig cfg = small_scenario();
  cfg.replications = 200;
  cfg.methods = {Method::mh};
  const CoverageReport rep = run_coverage_study(cfg);
  REQUIRE(rep.methods.size() == 1);
  CHECK(rep.methods[0].coverage >= 0.90);
  CHECK(rep.methods[0].coverage <= 0.99);
  CHECK(rep.methods[0].mean_length > 0.0);
  CHECK(rep.methods[0].undefined == 0);
}

TEST_CASE("single replicate gives a 0/1 coverage") {
  ScenarioConfig cfg = small_scenario();
  cfg.replications = 1;
  cfg.methods = {Method::mh};
  const CoverageReport rep = run_coverage_study(cfg);
  const double cp = rep.methods[0].coverage;
  CHECK((cp == 0.0 || cp == 1.0));
}

TEST_CASE("zero replications is a config error") {
  ScenarioConfig cfg = small_scenario();
  cfg.replications = 0;
  CHECK_THROWS_AS(run_coverage_study(cfg), MetaError);
}

TEST_CASE("coverage study is identical across worker counts") {
  ScenarioConfig cfg = small_scenario();
  cfg.replications = 16;
  cfg.methods = {Method::mh, Method::repro};

  cfg.workers = 1;
  const CoverageReport serial = run_coverage_study(cfg);
  cfg.workers = 4;
  const CoverageReport parallel = run_coverage_study(cfg);

  REQUIRE(serial.methods.size() == parallel.methods.size());
  for (std::size_t i = 0; i < serial.methods.size(); ++i) {
    CHECK(serial.methods[i].covered == parallel.methods[i].covered);
    CHECK(serial.methods[i].mean_length == parallel.methods[i].mean_length);
    CHECK(serial.methods[i].defined == parallel.methods[i].defined);
  }
  CHECK(serial.redraws == parallel.redraws);
}

TEST_CASE("builtin datasets match their published layout") {
  const MetaDataset a = builtin_dataset('a');
  REQUIRE(a.k() == 5);
  CHECK(validate_dataset(a).zero_total_studies == 3);
  CHECK(a.studies[0].control_events == 3);
  CHECK(a.studies[0].treatment_events == 2);
  CHECK(a.studies[2].control_size == 600);
  CHECK(a.studies[2].treatment_size == 300);

  const MetaDataset b = builtin_dataset('b');
  REQUIRE(b.k() == 5);
  CHECK(validate_dataset(b).zero_total_studies == 3);
  CHECK(b.studies[1].control_size == 50);

  const MetaDataset stripped = strip_zero_total(a);
  REQUIRE(stripped.k() == 2);
  CHECK(stripped.studies[1].control_events == 2);

  CHECK_THROWS_AS(builtin_dataset('z'), MetaError);
}

TEST_CASE("surrogate roster shape") {
  const SampleSizeRoster roster = surrogate_trial_roster();
  REQUIRE(roster.k() == 48);
  validate_roster(roster);
  int large = 0, small_by_arm = 0;
  for (const auto& [n, m] : roster.sizes) {
    if (n >= 1456 || m >= 1456) {
      ++large;
    } else {
      CHECK(std::max(n, m) <= 1172);
      ++small_by_arm;
    }
  }
  CHECK(large == 2);
  CHECK(small_by_arm == 46);
}

TEST_CASE("zero-total comparison equals two plain runs") {
  const MetaDataset d = builtin_dataset('a');
  AnalysisConfig cfg;
  cfg.mc_samples = 300;
  cfg.grid_points = 21;
  cfg.seed = 4;
  const ZeroTotalComparison cmp = zero_total_comparison(d, cfg);
  const ReproResult full = repro_confidence_interval(d, cfg);
  const ReproResult stripped = repro_confidence_interval(strip_zero_total(d), cfg);
  CHECK(cmp.full.lower == full.lower);
  CHECK(cmp.full.upper == full.upper);
  CHECK(cmp.stripped.lower == stripped.lower);
  CHECK(cmp.stripped.upper == stripped.upper);
}
