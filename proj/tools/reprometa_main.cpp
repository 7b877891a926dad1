// Command-line front end: analyze a dataset CSV, run a simulation scenario,
// or compare intervals with and without zero-total-event studies.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "reprometa/dataset_io.hpp"
#include "reprometa/errors.hpp"
#include "reprometa/estimators.hpp"
#include "reprometa/repro.hpp"
#include "reprometa/sim.hpp"
#include "reprometa/study_data.hpp"

#ifndef REPROMETA_VERSION
#define REPROMETA_VERSION "0.1.0"
#endif

namespace {

using nlohmann::json;
using namespace reprometa;

constexpr int kExitValidation = 2;
constexpr int kExitUndefined = 3;
constexpr int kExitEmptySet = 4;

struct CommonOptions {
  double alpha = 0.95;
  std::vector<std::string> methods;
  int mc_samples = 1000;
  int grid_points = 201;
  std::string grid_range;  // "LO,HI"
  std::uint64_t seed = 1;
  bool exclude_zero_total = false;
  std::string prob_map = "logit";
  double cc = 0.0;
  int workers = 1;
  std::string output = "text";
  bool refine_endpoints = false;
  std::string out_path;  // empty = stdout
};

void add_analysis_flags(CLI::App* cmd, CommonOptions& opt, bool with_exclude) {
  cmd->add_option("--alpha", opt.alpha, "Confidence level, in (0,1)")
      ->check(CLI::Range(1e-6, 1.0 - 1e-6));
  cmd->add_option("--method", opt.methods, "Methods to run (repeatable)")
      ->check(CLI::IsMember({"mh", "peto", "repro"}));
  cmd->add_option("--mc-samples", opt.mc_samples, "Monte-Carlo pool size M")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--grid-points", opt.grid_points, "Candidate grid size Q")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--grid-range", opt.grid_range, "Explicit grid range LO,HI on the log-OR scale");
  cmd->add_option("--seed", opt.seed, "Root seed for the uniform pool");
  if (with_exclude) {
    cmd->add_flag("--exclude-zero-total", opt.exclude_zero_total,
                  "Drop zero-total-event studies before analysis");
  }
  cmd->add_option("--prob-map", opt.prob_map, "Probability map: logit (exact) or exp-clamped")
      ->check(CLI::IsMember({"logit", "exp-clamped"}));
  cmd->add_option("--cc", opt.cc, "Continuity correction added to zero-cell tables (MH only)")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--workers", opt.workers, "Worker threads (0 = all cores); never changes results")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--output", opt.output, "Report format")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  cmd->add_flag("--refine-endpoints", opt.refine_endpoints,
                "Bisect between the outermost accepted and rejected grid points");
  cmd->add_option("--out", opt.out_path, "Write the report to a file instead of stdout");
}

std::optional<std::pair<double, double>> parse_grid_range(const std::string& s) {
  if (s.empty()) return std::nullopt;
  const auto comma = s.find(',');
  if (comma == std::string::npos) {
    throw ParseError("--grid-range expects LO,HI");
  }
  try {
    const double lo = std::stod(s.substr(0, comma));
    const double hi = std::stod(s.substr(comma + 1));
    if (!(lo <= hi)) throw ParseError("--grid-range expects LO <= HI");
    return std::make_pair(lo, hi);
  } catch (const std::invalid_argument&) {
    throw ParseError("--grid-range expects numeric LO,HI");
  }
}

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
  if (names.empty()) return {Method::mh, Method::peto, Method::repro};
  std::vector<Method> methods;
  for (const std::string& n : names) {
    if (n == "mh") methods.push_back(Method::mh);
    if (n == "peto") methods.push_back(Method::peto);
    if (n == "repro") methods.push_back(Method::repro);
  }
  return methods;
}

AnalysisConfig to_analysis_config(const CommonOptions& opt) {
  AnalysisConfig cfg;
  cfg.alpha = opt.alpha;
  cfg.mc_samples = opt.mc_samples;
  cfg.grid_points = opt.grid_points;
  cfg.grid_range = parse_grid_range(opt.grid_range);
  cfg.seed = opt.seed;
  cfg.workers = opt.workers;
  cfg.prob_map = opt.prob_map == "exp-clamped" ? ProbMap::exp_clamped : ProbMap::logit;
  cfg.refine_endpoints = opt.refine_endpoints;
  return cfg;
}

json interval_json(double lower, double upper) {
  return json{{"lower", lower}, {"upper", upper}};
}

json interval_json(double point, double lower, double upper) {
  return json{{"point", point}, {"lower", lower}, {"upper", upper}};
}

// Echo of everything that determines the numbers. workers is deliberately
// excluded: it must not affect results, and the JSON must be byte-identical
// across worker counts.
json config_json(const CommonOptions& opt) {
  json j{{"alpha", opt.alpha},
         {"mc_samples", opt.mc_samples},
         {"grid_points", opt.grid_points},
         {"seed", opt.seed},
         {"prob_map", opt.prob_map},
         {"continuity_correction", opt.cc},
         {"refine_endpoints", opt.refine_endpoints},
         {"exclude_zero_total", opt.exclude_zero_total}};
  const auto range = parse_grid_range(opt.grid_range);
  j["grid_range"] = range ? json{range->first, range->second} : json(nullptr);
  return j;
}

struct MethodReport {
  Method method = Method::mh;
  bool has_point = false;
  double point = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::optional<ReproResult> repro;
};

json report_json(const std::string& input, const MetaDataset& d, const ValidationInfo& info,
                 const CommonOptions& opt, const std::vector<MethodReport>& reports) {
  json results = json::array();
  for (const MethodReport& r : reports) {
    json entry{{"method", method_name(r.method)},
               {"level", opt.alpha},
               {"log_or", r.has_point ? interval_json(r.point, r.lower, r.upper)
                                      : interval_json(r.lower, r.upper)},
               {"odds_ratio",
                r.has_point ? interval_json(std::exp(r.point), std::exp(r.lower), std::exp(r.upper))
                            : interval_json(std::exp(r.lower), std::exp(r.upper))}};
    if (r.repro) {
      json grid = json::array();
      for (const NuclearEval& e : r.repro->grid) {
        grid.push_back(json{{"theta", e.theta},
                            {"t_obs", e.t_obs},
                            {"t", e.t_value},
                            {"gamma_at_init", e.gamma_at_init},
                            {"evaluations", e.evaluations},
                            {"converged", e.converged}});
      }
      json diag{{"accepted_count", r.repro->accepted_count},
                {"grid_spacing", r.repro->grid_spacing},
                {"grid", std::move(grid)}};
      diag["refined_log_or"] =
          (r.repro->refined_lower || r.repro->refined_upper)
              ? json{{"lower",
                      r.repro->refined_lower ? json(*r.repro->refined_lower) : json(nullptr)},
                     {"upper",
                      r.repro->refined_upper ? json(*r.repro->refined_upper) : json(nullptr)}}
              : json(nullptr);
      entry["diagnostics"] = std::move(diag);
    }
    results.push_back(std::move(entry));
  }
  return json{{"schema_version", 1},
              {"tool", json{{"name", "reprometa"}, {"version", REPROMETA_VERSION}}},
              {"dataset", json{{"path", input},
                               {"label", d.label},
                               {"studies", info.studies},
                               {"zero_total_studies", info.zero_total_studies}}},
              {"config", config_json(opt)},
              {"results", results}};
}

void write_report_csv(const std::vector<MethodReport>& reports, double alpha, std::ostream& os) {
  os << "method,level,log_or_point,log_or_lower,log_or_upper,or_point,or_lower,or_upper\n";
  os.precision(17);
  for (const MethodReport& r : reports) {
    os << method_name(r.method) << ',' << alpha << ',';
    if (r.has_point) {
      os << r.point;
    }
    os << ',' << r.lower << ',' << r.upper << ',';
    if (r.has_point) {
      os << std::exp(r.point);
    }
    os << ',' << std::exp(r.lower) << ',' << std::exp(r.upper) << '\n';
  }
}

void write_report_text(const MetaDataset& d, const ValidationInfo& info,
                       const std::vector<MethodReport>& reports, double alpha, std::ostream& os) {
  os << "dataset: " << d.label << "  (studies: " << info.studies
     << ", zero-total: " << info.zero_total_studies << ", level: " << alpha << ")\n";
  char line[256];
  std::snprintf(line, sizeof(line), "%-6s %30s %32s\n", "method", "odds ratio [CI]",
                "log odds ratio [CI]");
  os << line;
  for (const MethodReport& r : reports) {
    std::string point_or = "     -";
    std::string point_log = "     -";
    char buf[32];
    if (r.has_point) {
      std::snprintf(buf, sizeof(buf), "%6.4f", std::exp(r.point));
      point_or = buf;
      std::snprintf(buf, sizeof(buf), "%6.4f", r.point);
      point_log = buf;
    }
    std::snprintf(line, sizeof(line), "%-6s %s (%8.4f, %8.4f)  %s (%8.4f, %8.4f)\n",
                  method_name(r.method).c_str(), point_or.c_str(), std::exp(r.lower),
                  std::exp(r.upper), point_log.c_str(), r.lower, r.upper);
    os << line;
  }
  for (const MethodReport& r : reports) {
    if (r.repro) {
      os << "repro diagnostics: accepted " << r.repro->accepted_count << "/"
         << r.repro->grid.size() << " grid points, spacing " << r.repro->grid_spacing;
      if (r.repro->refined_lower || r.repro->refined_upper) {
        os << ", refined endpoints [";
        os << (r.repro->refined_lower ? std::to_string(*r.repro->refined_lower) : "-") << ", ";
        os << (r.repro->refined_upper ? std::to_string(*r.repro->refined_upper) : "-") << "]";
      }
      os << "\n";
    }
  }
}

std::vector<MethodReport> run_methods(const MetaDataset& d, const std::vector<Method>& methods,
                                      const CommonOptions& opt) {
  std::vector<MethodReport> reports;
  const AnalysisConfig cfg = to_analysis_config(opt);
  for (Method m : methods) {
    MethodReport r;
    r.method = m;
    switch (m) {
      case Method::mh: {
        const EstimateCI ci = mh_confidence_interval(d, opt.alpha, opt.cc);
        r.has_point = true;
        r.point = ci.point;
        r.lower = ci.lower;
        r.upper = ci.upper;
        break;
      }
      case Method::peto: {
        const EstimateCI ci = peto_log_odds_ratio_ci(d, opt.alpha);
        r.has_point = true;
        r.point = ci.point;
        r.lower = ci.lower;
        r.upper = ci.upper;
        break;
      }
      case Method::repro: {
        ReproResult res = repro_confidence_interval(d, cfg);
        r.lower = res.lower;
        r.upper = res.upper;
        r.repro = std::move(res);
        break;
      }
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + out_path + "'");
  out << text;
}

int run_analyze(const std::string& input, const CommonOptions& opt) {
  MetaDataset d = load_dataset_csv(input);
  if (opt.exclude_zero_total) d = strip_zero_total(d);
  const ValidationInfo info = validate_dataset(d);
  const std::vector<MethodReport> reports = run_methods(d, parse_methods(opt.methods), opt);

  std::ostringstream os;
  if (opt.output == "json") {
    os << report_json(input, d, info, opt, reports).dump(2) << "\n";
  } else if (opt.output == "csv") {
    write_report_csv(reports, opt.alpha, os);
  } else {
    write_report_text(d, info, reports, opt.alpha, os);
  }
  emit(os.str(), opt.out_path);
  return 0;
}

int run_compare(const std::string& builtin, const std::string& input, const CommonOptions& opt) {
  MetaDataset d;
  std::string source;
  if (!builtin.empty()) {
    d = builtin_dataset(builtin[0]);
    source = "builtin:" + builtin;
  } else {
    d = load_dataset_csv(input);
    source = input;
  }
  const ValidationInfo info = validate_dataset(d);
  const ZeroTotalComparison cmp = zero_total_comparison(d, to_analysis_config(opt));

  if (opt.output == "json") {
    auto side = [&](const ReproResult& r, std::size_t k) {
      return json{{"studies", k},
                  {"log_or", interval_json(r.lower, r.upper)},
                  {"odds_ratio", interval_json(std::exp(r.lower), std::exp(r.upper))},
                  {"width_log_or", r.width()},
                  {"accepted_count", r.accepted_count}};
    };
    const json j{{"schema_version", 1},
                 {"tool", json{{"name", "reprometa"}, {"version", REPROMETA_VERSION}}},
                 {"dataset", json{{"path", source},
                                  {"label", d.label},
                                  {"studies", info.studies},
                                  {"zero_total_studies", info.zero_total_studies}}},
                 {"config", config_json(opt)},
                 {"full", side(cmp.full, d.k())},
                 {"stripped", side(cmp.stripped, d.k() - info.zero_total_studies)}};
    emit(j.dump(2) + "\n", opt.out_path);
  } else {
    std::ostringstream os;
    os.precision(6);
    os << "dataset: " << d.label << "  (studies: " << info.studies
       << ", zero-total: " << info.zero_total_studies << ")\n";
    os << "full     [" << cmp.full.lower << ", " << cmp.full.upper << "]  width "
       << cmp.full.width() << "  (log-OR scale)\n";
    os << "stripped [" << cmp.stripped.lower << ", " << cmp.stripped.upper << "]  width "
       << cmp.stripped.width() << "\n";
    emit(os.str(), opt.out_path);
  }
  return 0;
}

int run_simulate(const std::string& scenario_path, const std::string& out_dir, int workers) {
  ScenarioConfig cfg = load_scenario_json(scenario_path);
  cfg.workers = workers;

  const auto t0 = std::chrono::steady_clock::now();
  const CoverageReport report = run_coverage_study(cfg);
  const double wall_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::filesystem::create_directories(out_dir);
  const auto report_path = std::filesystem::path(out_dir) / (cfg.label + "_report.csv");
  {
    std::ofstream out(report_path, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + report_path.string() + "'");
    write_coverage_csv(report, out);
  }

  json roster = json::array();
  for (const auto& [n, m] : cfg.roster.sizes) roster.push_back(json{n, m});
  json methods = json::array();
  for (Method m : cfg.methods) methods.push_back(method_name(m));
  const json manifest{{"tool", json{{"name", "reprometa"}, {"version", REPROMETA_VERSION}}},
                      {"scenario_file", scenario_path},
                      {"config", json{{"label", cfg.label},
                                      {"theta_true", cfg.theta_true},
                                      {"pi0_max", cfg.pi0_max},
                                      {"replications", cfg.replications},
                                      {"mc_samples", cfg.mc_samples},
                                      {"grid_points", cfg.grid_points},
                                      {"alpha", cfg.alpha},
                                      {"seed", cfg.seed},
                                      {"methods", methods},
                                      {"roster", roster}}},
                      {"redraws", report.redraws},
                      {"wall_time_s", wall_s}};
  const auto manifest_path = std::filesystem::path(out_dir) / (cfg.label + "_manifest.json");
  {
    std::ofstream out(manifest_path, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + manifest_path.string() + "'");
    out << manifest.dump(2) << "\n";
  }

  std::cout << "scenario " << cfg.label << ": theta_true " << cfg.theta_true << ", "
            << cfg.replications << " replications\n";
  for (const MethodSummary& s : report.methods) {
    std::printf("%-6s coverage %.3f (se %.3f)  mean length %.3f  undefined %d\n",
                method_name(s.method).c_str(), s.coverage, s.coverage_se, s.mean_length,
                s.undefined);
  }
  std::cout << "report:   " << report_path.string() << "\n";
  std::cout << "manifest: " << manifest_path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Meta-analysis of 2x2 trials: finite-sample confidence intervals for the common "
               "odds ratio, with Mantel-Haenszel and Peto baselines"};
  app.set_version_flag("--version", std::string("reprometa ") + REPROMETA_VERSION);
  app.require_subcommand(1);

  CommonOptions opt;
  std::string input, builtin, scenario, out_dir = ".";

  CLI::App* analyze = app.add_subcommand("analyze", "Analyze a dataset CSV");
  analyze->add_option("--input", input, "Dataset CSV path")->required();
  add_analysis_flags(analyze, opt, true);

  CLI::App* compare =
      app.add_subcommand("compare", "Interval with vs without zero-total-event studies");
  auto* b = compare->add_option("--builtin", builtin, "Built-in demo dataset")
                ->check(CLI::IsMember({"a", "b"}));
  compare->add_option("--input", input, "Dataset CSV path")->excludes(b);
  add_analysis_flags(compare, opt, false);

  CLI::App* simulate = app.add_subcommand("simulate", "Run a coverage scenario from JSON");
  simulate->add_option("--scenario", scenario, "Scenario JSON path")->required();
  simulate->add_option("--out-dir", out_dir, "Directory for report and manifest files");
  simulate->add_option("--workers", opt.workers, "Worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (app.got_subcommand(analyze)) {
      return run_analyze(input, opt);
    }
    if (app.got_subcommand(compare)) {
      if (builtin.empty() && input.empty()) {
        std::cerr << "compare: give --builtin or --input\n";
        return kExitValidation;
      }
      return run_compare(builtin, input, opt);
    }
    return run_simulate(scenario, out_dir, opt.workers);
  } catch (const EmptyConfidenceSet& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEmptySet;
  } catch (const UndefinedEstimate& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUndefined;
  } catch (const MetaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
