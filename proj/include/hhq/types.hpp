#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace hhq {

//! Opaque item identifier. Trace files carry these as decimal uint64.
using ItemId = std::uint64_t;

//! 1-based arrival position within one stream; 0 is reserved for "never".
using Timestamp = std::uint64_t;

inline constexpr Timestamp kTimestampNever = 0;

//! Sentinel passed to sample collection meaning "no upper bound".
inline constexpr Timestamp kTimestampMax = std::numeric_limits<Timestamp>::max();

//! Throws std::invalid_argument unless v is a finite, nonnegative latency.
inline double require_latency(double v) {
  if (std::isnan(v)) throw std::invalid_argument("latency is NaN");
  if (!std::isfinite(v)) throw std::invalid_argument("latency is not finite");
  if (v < 0.0) throw std::invalid_argument("latency is negative");
  return v;
}

//! One (identifier, latency) observation; the unit of ingestion.
struct StreamElement {
  ItemId id = 0;
  double latency = 0.0;

  friend bool operator==(const StreamElement&, const StreamElement&) = default;
};

//! Reservoir record carrying the arrival position alongside the observation.
struct TimedSample {
  ItemId id = 0;
  double latency = 0.0;
  Timestamp ts = kTimestampNever;

  friend bool operator==(const TimedSample&, const TimedSample&) = default;
};

//! Accuracy/confidence knobs shared by all estimators.
//!
//! theta:   heavy-hitter threshold, items with frequency >= theta*N qualify
//! epsilon: additive rank (and relative frequency) error target
//! delta:   per-query failure probability budget for the randomized estimators
//! seed:    root of every pseudo-random choice made by the structures
struct ProblemConfig {
  double theta = 0.01;
  double epsilon = 0.05;
  double delta = 0.05;
  std::uint64_t seed = 1;

  void validate() const {
    if (!(theta > 0.0) || !(theta <= 1.0))
      throw std::invalid_argument("theta must be in (0,1], got " + std::to_string(theta));
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
      throw std::invalid_argument("epsilon must be in (0,1), got " + std::to_string(epsilon));
    if (!(delta >= 0.0) || !(delta < 1.0))
      throw std::invalid_argument("delta must be in [0,1), got " + std::to_string(delta));
  }

  //! Stricter check for estimators whose sizing formulas contain ln(2/delta).
  void validate_positive_delta() const {
    validate();
    if (delta == 0.0)
      throw std::invalid_argument("delta must be positive for sampling-based estimators");
  }
};

//! What every estimator returns: a frequency estimate, a quantile estimate
//! when the item is tracked closely enough to have one, and whether it is.
struct QueryAnswer {
  double freq_estimate = 0.0;
  std::optional<double> quantile_estimate;
  bool monitored = false;
};

inline void require_quantile_arg(double q) {
  if (std::isnan(q) || q < 0.0 || q > 1.0)
    throw std::invalid_argument("quantile q must be in [0,1], got " + std::to_string(q));
}

}  // namespace hhq
