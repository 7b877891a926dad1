#include "reprometa/study_data.hpp"

#include <sstream>

#include "reprometa/errors.hpp"

namespace reprometa {

ValidationInfo validate_dataset(const MetaDataset& d) {
  if (d.studies.empty()) {
    throw EmptyDataset("dataset '" + d.label + "' has no studies");
  }

  ValidationInfo info;
  info.studies = d.studies.size();
  bool any_control = false;
  bool any_treatment = false;

  for (std::size_t i = 0; i < d.studies.size(); ++i) {
    const StudyTable& s = d.studies[i];
    if (s.control_size < 1 || s.treatment_size < 1 || s.control_events < 0 ||
        s.treatment_events < 0 || s.control_events > s.control_size ||
        s.treatment_events > s.treatment_size) {
      std::ostringstream msg;
      msg << "study " << (i + 1) << ": malformed counts (" << s.control_events
          << "/" << s.control_size << ", " << s.treatment_events << "/"
          << s.treatment_size << ")";
      throw MalformedCounts(msg.str());
    }
    any_control = any_control || s.control_events > 0;
    any_treatment = any_treatment || s.treatment_events > 0;
    if (s.is_zero_total()) ++info.zero_total_studies;
  }

  if (!any_control) {
    throw AllZeroControl("no study has control-arm events");
  }
  if (!any_treatment) {
    throw AllZeroTreatment("no study has treatment-arm events");
  }
  return info;
}

MetaDataset strip_zero_total(const MetaDataset& d) {
  MetaDataset out;
  out.label = d.label;
  out.studies.reserve(d.studies.size());
  for (const StudyTable& s : d.studies) {
    if (!s.is_zero_total()) out.studies.push_back(s);
  }
  return out;
}

SampleSizeRoster roster_of(const MetaDataset& d) {
  SampleSizeRoster roster;
  roster.sizes.reserve(d.studies.size());
  for (const StudyTable& s : d.studies) {
    roster.sizes.emplace_back(s.control_size, s.treatment_size);
  }
  return roster;
}

void validate_roster(const SampleSizeRoster& roster) {
  if (roster.sizes.empty()) {
    throw MalformedCounts("roster has no entries");
  }
  for (std::size_t i = 0; i < roster.sizes.size(); ++i) {
    if (roster.sizes[i].first < 1 || roster.sizes[i].second < 1) {
      std::ostringstream msg;
      msg << "roster row " << (i + 1) << ": arm sizes must be >= 1";
      throw MalformedCounts(msg.str());
    }
  }
}

}  // namespace reprometa
