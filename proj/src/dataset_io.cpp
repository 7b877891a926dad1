#include "reprometa/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "reprometa/errors.hpp"

namespace reprometa {

namespace {

std::string trimmed(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string::size_type start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(trimmed(line.substr(start)));
      break;
    }
    fields.push_back(trimmed(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

std::int64_t parse_count(const std::string& field, const std::string& path, std::size_t row,
                         const char* column) {
  std::int64_t value = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || field.empty()) {
    std::ostringstream msg;
    msg << path << ": row " << row << ": column '" << column << "' is not an integer: '"
        << field << "'";
    throw ParseError(msg.str());
  }
  return value;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

// Strips a UTF-8 BOM if present.
void strip_bom(std::string& s) {
  if (s.size() >= 3 && s[0] == '\xef' && s[1] == '\xbb' && s[2] == '\xbf') s.erase(0, 3);
}

void expect_header(const std::vector<std::string>& fields,
                   const std::vector<std::string>& expected, const std::string& path) {
  if (fields != expected) {
    std::ostringstream msg;
    msg << path << ": row 1: expected header '";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      msg << (i ? "," : "") << expected[i];
    }
    msg << "'";
    throw ParseError(msg.str());
  }
}

}  // namespace

MetaDataset load_dataset_csv(const std::string& path) {
  std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw ParseError(path + ": empty file");
  strip_bom(lines[0]);
  expect_header(split_csv_row(lines[0]),
                {"study_id", "x_control", "n_control", "y_treatment", "m_treatment"}, path);

  MetaDataset d;
  d.label = std::filesystem::path(path).stem().string();
  for (std::size_t row = 2; row <= lines.size(); ++row) {
    const std::string& line = lines[row - 1];
    if (trimmed(line).empty()) continue;
    const auto fields = split_csv_row(line);
    if (fields.size() != 5) {
      std::ostringstream msg;
      msg << path << ": row " << row << ": expected 5 fields, got " << fields.size();
      throw ParseError(msg.str());
    }
    StudyTable s;
    s.control_events = parse_count(fields[1], path, row, "x_control");
    s.control_size = parse_count(fields[2], path, row, "n_control");
    s.treatment_events = parse_count(fields[3], path, row, "y_treatment");
    s.treatment_size = parse_count(fields[4], path, row, "m_treatment");
    d.studies.push_back(s);
  }
  return d;
}

SampleSizeRoster load_roster_csv(const std::string& path) {
  std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw ParseError(path + ": empty file");
  strip_bom(lines[0]);
  expect_header(split_csv_row(lines[0]), {"n_control", "m_treatment"}, path);

  SampleSizeRoster roster;
  for (std::size_t row = 2; row <= lines.size(); ++row) {
    const std::string& line = lines[row - 1];
    if (trimmed(line).empty()) continue;
    const auto fields = split_csv_row(line);
    if (fields.size() != 2) {
      std::ostringstream msg;
      msg << path << ": row " << row << ": expected 2 fields, got " << fields.size();
      throw ParseError(msg.str());
    }
    roster.sizes.emplace_back(parse_count(fields[0], path, row, "n_control"),
                              parse_count(fields[1], path, row, "m_treatment"));
  }
  validate_roster(roster);
  return roster;
}

ScenarioConfig load_scenario_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  if (!j.is_object()) throw ParseError(path + ": scenario must be a JSON object");

  static const std::vector<std::string> known = {
      "label",        "theta_true", "odds_ratio_true", "roster", "roster_csv", "pi0_max",
      "replications", "mc_samples", "grid_points",     "alpha",  "seed",       "methods"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ParseError(path + ": unknown scenario field '" + key + "'");
    }
  }

  ScenarioConfig cfg;
  try {
    cfg.label = j.value("label", std::filesystem::path(path).stem().string());

    const bool has_theta = j.contains("theta_true");
    const bool has_or = j.contains("odds_ratio_true");
    if (has_theta == has_or) {
      throw ParseError(path + ": give exactly one of theta_true / odds_ratio_true");
    }
    if (has_theta) {
      cfg.theta_true = j.at("theta_true").get<double>();
    } else {
      const double odds_ratio = j.at("odds_ratio_true").get<double>();
      if (!(odds_ratio > 0.0)) throw ParseError(path + ": odds_ratio_true must be > 0");
      cfg.theta_true = std::log(odds_ratio);
    }

    const bool has_roster = j.contains("roster");
    const bool has_roster_csv = j.contains("roster_csv");
    if (has_roster == has_roster_csv) {
      throw ParseError(path + ": give exactly one of roster / roster_csv");
    }
    if (has_roster) {
      for (const auto& pair : j.at("roster")) {
        if (!pair.is_array() || pair.size() != 2) {
          throw ParseError(path + ": roster entries must be [n_control, m_treatment] pairs");
        }
        cfg.roster.sizes.emplace_back(pair[0].get<std::int64_t>(), pair[1].get<std::int64_t>());
      }
    } else {
      const std::string name = j.at("roster_csv").get<std::string>();
      if (name == "surrogate48") {
        cfg.roster = surrogate_trial_roster();
      } else {
        const auto base = std::filesystem::path(path).parent_path();
        cfg.roster = load_roster_csv((base / name).string());
      }
    }

    cfg.pi0_max = j.value("pi0_max", 0.08);
    cfg.replications = j.value("replications", cfg.replications);
    cfg.mc_samples = j.value("mc_samples", cfg.mc_samples);
    cfg.grid_points = j.value("grid_points", cfg.grid_points);
    cfg.alpha = j.value("alpha", cfg.alpha);
    cfg.seed = j.value("seed", std::uint64_t{1});

    if (j.contains("methods")) {
      cfg.methods.clear();
      for (const auto& name : j.at("methods")) {
        const std::string s = name.get<std::string>();
        if (s == "mh") {
          cfg.methods.push_back(Method::mh);
        } else if (s == "peto") {
          cfg.methods.push_back(Method::peto);
        } else if (s == "repro") {
          cfg.methods.push_back(Method::repro);
        } else {
          throw ParseError(path + ": unknown method '" + s + "'");
        }
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return cfg;
}

void write_coverage_csv(const CoverageReport& report, std::ostream& out) {
  out << "method,replications,covered,coverage,coverage_se,mean_length_log_or,"
         "defined_intervals,undefined_intervals\n";
  std::ostringstream line;
  line.precision(17);
  for (const MethodSummary& s : report.methods) {
    line.str("");
    line << method_name(s.method) << ',' << s.replications << ',' << s.covered << ','
         << s.coverage << ',' << s.coverage_se << ',' << s.mean_length << ',' << s.defined << ','
         << s.undefined << '\n';
    out << line.str();
  }
}

}  // namespace reprometa
