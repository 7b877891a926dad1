#pragma once

#include <stdexcept>
#include <string>

namespace reprometa {

// Base class for all domain errors raised by this library.
class MetaError : public std::runtime_error {
 public:
  explicit MetaError(const std::string& what) : std::runtime_error(what) {}
};

// Dataset validation failures.
class ValidationError : public MetaError {
 public:
  using MetaError::MetaError;
};

class EmptyDataset : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// No study has any control-arm event (standing model assumption violated).
class AllZeroControl : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// No study has any treatment-arm event.
class AllZeroTreatment : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Counts exceed arm sizes, negative counts, arm size < 1, ...
class MalformedCounts : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Probability of exactly 0 or 1 where the log odds transform is required.
class DegenerateProbability : public MetaError {
 public:
  using MetaError::MetaError;
};

// Per-study log odds ratios disagree where a common value was required.
class HeterogeneousTheta : public MetaError {
 public:
  using MetaError::MetaError;
};

class LengthMismatch : public MetaError {
 public:
  using MetaError::MetaError;
};

// Pooled estimator has no defined value (both cross-product sums are zero).
class UndefinedEstimate : public MetaError {
 public:
  using MetaError::MetaError;
};

// No grid point was accepted at the requested level.
class EmptyConfidenceSet : public MetaError {
 public:
  EmptyConfidenceSet(const std::string& what, double min_t, double theta_at_min)
      : MetaError(what), min_t_(min_t), theta_at_min_(theta_at_min) {}

  double min_t() const { return min_t_; }
  double theta_at_min() const { return theta_at_min_; }

 private:
  double min_t_;
  double theta_at_min_;
};

// Scenario replicate generation exhausted its redraw budget.
class ScenarioInfeasible : public MetaError {
 public:
  using MetaError::MetaError;
};

// CSV / JSON input could not be parsed; message names the offending row.
class ParseError : public MetaError {
 public:
  using MetaError::MetaError;
};

}  // namespace reprometa
