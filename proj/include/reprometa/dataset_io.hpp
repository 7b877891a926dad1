#pragma once

#include <iosfwd>
#include <string>

#include "reprometa/sim.hpp"
#include "reprometa/study_data.hpp"

namespace reprometa {

// Reads a dataset CSV with the required header
//   study_id,x_control,n_control,y_treatment,m_treatment
// (UTF-8, comma-separated, no thousands separators). Parse failures name the
// offending row. The dataset label is the file stem.
MetaDataset load_dataset_csv(const std::string& path);

// Reads a roster CSV with header n_control,m_treatment.
SampleSizeRoster load_roster_csv(const std::string& path);

// Reads a simulation scenario from JSON. Recognized fields:
//   label (string, optional)
//   theta_true (number) or odds_ratio_true (number) - exactly one
//   roster (array of [n, m] pairs) or roster_csv (path, relative to the
//     scenario file) - exactly one; roster_csv may also be the literal
//     "surrogate48" for the built-in 48-trial roster
//   pi0_max (number, default 0.08)
//   replications, mc_samples, grid_points (integers)
//   alpha (number, default 0.95)
//   seed (integer, default 1)
//   methods (array of "mh" | "peto" | "repro", default all)
// Unknown fields are rejected to catch typos.
ScenarioConfig load_scenario_json(const std::string& path);

// One row per method: coverage, MC standard error, mean interval length on
// the log-OR scale, and the undefined-interval tally.
void write_coverage_csv(const CoverageReport& report, std::ostream& out);

}  // namespace reprometa
