#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace reprometa {

// One 2x2 trial: events / arm size for the control and treatment arms.
struct StudyTable {
  std::int64_t control_events = 0;    // x
  std::int64_t control_size = 0;      // n
  std::int64_t treatment_events = 0;  // y
  std::int64_t treatment_size = 0;    // m

  bool is_zero_total() const { return control_events == 0 && treatment_events == 0; }
};

// Ordered collection of K studies. Immutable after construction by convention;
// all operations return new values.
struct MetaDataset {
  std::vector<StudyTable> studies;
  std::string label;

  std::size_t k() const { return studies.size(); }
};

// Per-study (control, treatment) arm sizes used to build simulated tables.
struct SampleSizeRoster {
  std::vector<std::pair<std::int64_t, std::int64_t>> sizes;  // (n_i, m_i)

  std::size_t k() const { return sizes.size(); }
};

struct ValidationInfo {
  std::size_t studies = 0;
  std::size_t zero_total_studies = 0;
};

// Checks dataset invariants: K >= 1, counts within arm sizes, and the standing
// assumption that at least one study has control events and at least one has
// treatment events. Throws EmptyDataset / MalformedCounts / AllZeroControl /
// AllZeroTreatment. Returns the zero-total tally for reporting.
ValidationInfo validate_dataset(const MetaDataset& d);

// Copy of d with all zero-total studies removed, order preserved. Idempotent.
// The result is NOT revalidated here; it may fail validate_dataset afterward
// (e.g. when every study was zero-total).
MetaDataset strip_zero_total(const MetaDataset& d);

// The (n_i, m_i) pairs of a dataset.
SampleSizeRoster roster_of(const MetaDataset& d);

// Roster invariant check: K >= 1 and all sizes >= 1. Throws MalformedCounts.
void validate_roster(const SampleSizeRoster& roster);

}  // namespace reprometa
