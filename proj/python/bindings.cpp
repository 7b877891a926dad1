// Python bindings for the core operations: dataset handling, the baseline
// estimators, the grid-inversion confidence interval, and the simulation
// harness.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "reprometa/dataset_io.hpp"
#include "reprometa/errors.hpp"
#include "reprometa/estimators.hpp"
#include "reprometa/mathutil.hpp"
#include "reprometa/repro.hpp"
#include "reprometa/sim.hpp"
#include "reprometa/study_data.hpp"

namespace py = pybind11;
using namespace reprometa;

namespace {

MetaDataset dataset_from_rows(
    const std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t>>& rows,
    const std::string& label) {
  MetaDataset d;
  d.label = label;
  for (const auto& [x, n, y, m] : rows) d.studies.push_back({x, n, y, m});
  return d;
}

Method method_from_name(const std::string& name) {
  if (name == "mh") return Method::mh;
  if (name == "peto") return Method::peto;
  if (name == "repro") return Method::repro;
  throw MetaError("unknown method '" + name + "' (use mh, peto or repro)");
}

AnalysisConfig make_analysis_config(double alpha, int mc_samples, int grid_points,
                                    std::optional<std::pair<double, double>> grid_range,
                                    std::uint64_t seed, int workers, const std::string& prob_map,
                                    bool refine_endpoints) {
  AnalysisConfig cfg;
  cfg.alpha = alpha;
  cfg.mc_samples = mc_samples;
  cfg.grid_points = grid_points;
  cfg.grid_range = grid_range;
  cfg.seed = seed;
  cfg.workers = workers;
  cfg.prob_map = prob_map == "exp-clamped" ? ProbMap::exp_clamped : ProbMap::logit;
  cfg.refine_endpoints = refine_endpoints;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_reprometa, m) {
  m.doc() = "Meta-analysis of 2x2 trials: finite-sample confidence intervals for the "
            "common odds ratio, with Mantel-Haenszel and Peto baselines";

  // Translators run newest-first, so the base class goes first and the
  // derived classes shadow it.
  py::register_exception<MetaError>(m, "MetaError");
  py::register_exception<ValidationError>(m, "ValidationError");
  py::register_exception<UndefinedEstimate>(m, "UndefinedEstimate");
  py::register_exception<EmptyConfidenceSet>(m, "EmptyConfidenceSetError");
  py::register_exception<ParseError>(m, "ParseError");

  py::class_<StudyTable>(m, "StudyTable")
      .def(py::init([](std::int64_t x, std::int64_t n, std::int64_t y, std::int64_t m_) {
             return StudyTable{x, n, y, m_};
           }),
           py::arg("x"), py::arg("n"), py::arg("y"), py::arg("m"))
      .def_readonly("x", &StudyTable::control_events)
      .def_readonly("n", &StudyTable::control_size)
      .def_readonly("y", &StudyTable::treatment_events)
      .def_readonly("m", &StudyTable::treatment_size)
      .def("is_zero_total", &StudyTable::is_zero_total)
      .def("__repr__", [](const StudyTable& s) {
        return "StudyTable(x=" + std::to_string(s.control_events) +
               ", n=" + std::to_string(s.control_size) +
               ", y=" + std::to_string(s.treatment_events) +
               ", m=" + std::to_string(s.treatment_size) + ")";
      });

  py::class_<MetaDataset>(m, "MetaDataset")
      .def(py::init(&dataset_from_rows), py::arg("rows"), py::arg("label") = "dataset",
           "rows: list of (x, n, y, m) tuples, control arm first")
      .def_readonly("studies", &MetaDataset::studies)
      .def_readonly("label", &MetaDataset::label)
      .def("__len__", &MetaDataset::k);

  py::class_<EstimateCI>(m, "EstimateCI")
      .def_readonly("point", &EstimateCI::point)
      .def_readonly("lower", &EstimateCI::lower)
      .def_readonly("upper", &EstimateCI::upper)
      .def_readonly("level", &EstimateCI::level)
      .def_property_readonly("method",
                             [](const EstimateCI& e) { return method_name(e.method); })
      .def("__repr__", [](const EstimateCI& e) {
        return method_name(e.method) + " CI [" + std::to_string(e.lower) + ", " +
               std::to_string(e.upper) + "] at level " + std::to_string(e.level);
      });

  py::class_<NuclearEval>(m, "NuclearEval")
      .def_readonly("theta", &NuclearEval::theta)
      .def_readonly("t_obs", &NuclearEval::t_obs)
      .def_readonly("t", &NuclearEval::t_value)
      .def_readonly("gamma_at_init", &NuclearEval::gamma_at_init)
      .def_readonly("eta_argmin", &NuclearEval::eta_argmin)
      .def_readonly("evaluations", &NuclearEval::evaluations)
      .def_readonly("converged", &NuclearEval::converged);

  py::class_<ReproResult>(m, "ReproResult")
      .def_readonly("grid", &ReproResult::grid)
      .def_readonly("alpha", &ReproResult::alpha)
      .def_readonly("lower", &ReproResult::lower)
      .def_readonly("upper", &ReproResult::upper)
      .def_readonly("accepted_count", &ReproResult::accepted_count)
      .def_readonly("grid_spacing", &ReproResult::grid_spacing)
      .def_readonly("refined_lower", &ReproResult::refined_lower)
      .def_readonly("refined_upper", &ReproResult::refined_upper)
      .def("width", &ReproResult::width)
      .def("__repr__", [](const ReproResult& r) {
        return "ReproResult([" + std::to_string(r.lower) + ", " + std::to_string(r.upper) +
               "] at level " + std::to_string(r.alpha) + ")";
      });

  m.def("load_dataset_csv", &load_dataset_csv, py::arg("path"));
  m.def(
      "validate_dataset",
      [](const MetaDataset& d) {
        const ValidationInfo info = validate_dataset(d);
        return py::dict(py::arg("studies") = info.studies,
                        py::arg("zero_total_studies") = info.zero_total_studies);
      },
      py::arg("dataset"));
  m.def("strip_zero_total", &strip_zero_total, py::arg("dataset"));
  m.def("eta_initial_values", &eta_initial_values, py::arg("dataset"));

  m.def("mh_log_odds_ratio", &mh_log_odds_ratio, py::arg("dataset"),
        py::arg("continuity_correction") = 0.0);
  m.def("mh_confidence_interval", &mh_confidence_interval, py::arg("dataset"),
        py::arg("level") = 0.95, py::arg("continuity_correction") = 0.0);
  m.def("peto_log_odds_ratio_ci", &peto_log_odds_ratio_ci, py::arg("dataset"),
        py::arg("level") = 0.95);
  m.def("w_statistic", &w_statistic, py::arg("dataset"), py::arg("theta"));

  m.def(
      "repro_confidence_interval",
      [](const MetaDataset& d, double alpha, int mc_samples, int grid_points,
         std::optional<std::pair<double, double>> grid_range, std::uint64_t seed, int workers,
         const std::string& prob_map, bool refine_endpoints) {
        const AnalysisConfig cfg = make_analysis_config(
            alpha, mc_samples, grid_points, grid_range, seed, workers, prob_map, refine_endpoints);
        py::gil_scoped_release release;
        return repro_confidence_interval(d, cfg);
      },
      py::arg("dataset"), py::arg("alpha") = 0.95, py::arg("mc_samples") = 1000,
      py::arg("grid_points") = 201, py::arg("grid_range") = std::nullopt, py::arg("seed") = 1,
      py::arg("workers") = 1, py::arg("prob_map") = "logit",
      py::arg("refine_endpoints") = false);

  m.def("theta_grid", &theta_grid, py::arg("dataset"), py::arg("grid_points"),
        py::arg("grid_range") = std::nullopt);

  m.def("builtin_dataset", [](const std::string& id) {
    if (id.size() != 1) throw MetaError("builtin dataset id must be 'a' or 'b'");
    return builtin_dataset(id[0]);
  });
  m.def("surrogate_trial_roster", [] {
    return surrogate_trial_roster().sizes;
  });

  m.def(
      "zero_total_comparison",
      [](const MetaDataset& d, double alpha, int mc_samples, int grid_points, std::uint64_t seed,
         int workers) {
        const AnalysisConfig cfg = make_analysis_config(alpha, mc_samples, grid_points,
                                                        std::nullopt, seed, workers, "logit",
                                                        false);
        py::gil_scoped_release release;
        const ZeroTotalComparison cmp = zero_total_comparison(d, cfg);
        return std::make_pair(cmp.full, cmp.stripped);
      },
      py::arg("dataset"), py::arg("alpha") = 0.95, py::arg("mc_samples") = 1000,
      py::arg("grid_points") = 201, py::arg("seed") = 1, py::arg("workers") = 1);

  m.def(
      "run_coverage_study",
      [](double theta_true, const std::vector<std::pair<std::int64_t, std::int64_t>>& roster,
         int replications, int mc_samples, int grid_points, double alpha, std::uint64_t seed,
         const std::vector<std::string>& methods, double pi0_max, int workers,
         const std::string& label) {
        ScenarioConfig cfg;
        cfg.label = label;
        cfg.theta_true = theta_true;
        cfg.roster.sizes = roster;
        cfg.replications = replications;
        cfg.mc_samples = mc_samples;
        cfg.grid_points = grid_points;
        cfg.alpha = alpha;
        cfg.seed = seed;
        cfg.pi0_max = pi0_max;
        cfg.workers = workers;
        cfg.methods.clear();
        for (const std::string& name : methods) cfg.methods.push_back(method_from_name(name));
        CoverageReport report;
        {
          py::gil_scoped_release release;
          report = run_coverage_study(cfg);
        }
        py::list rows;
        for (const MethodSummary& s : report.methods) {
          rows.append(py::dict(
              py::arg("method") = method_name(s.method), py::arg("coverage") = s.coverage,
              py::arg("coverage_se") = s.coverage_se, py::arg("mean_length") = s.mean_length,
              py::arg("covered") = s.covered, py::arg("defined") = s.defined,
              py::arg("undefined") = s.undefined, py::arg("replications") = s.replications));
        }
        return py::dict(py::arg("label") = report.label, py::arg("theta_true") = report.theta_true,
                        py::arg("alpha") = report.alpha, py::arg("redraws") = report.redraws,
                        py::arg("methods") = rows);
      },
      py::arg("theta_true"), py::arg("roster"), py::arg("replications") = 200,
      py::arg("mc_samples") = 500, py::arg("grid_points") = 101, py::arg("alpha") = 0.95,
      py::arg("seed") = 1, py::arg("methods") = std::vector<std::string>{"mh", "peto", "repro"},
      py::arg("pi0_max") = 0.08, py::arg("workers") = 1, py::arg("label") = "scenario");

  m.attr("__version__") = "0.1.0";
}
