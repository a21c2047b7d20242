#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "hhq/rng.hpp"
#include "hhq/types.hpp"

namespace hhq {

//! How the reservoir decides admissions once full.
//!   kNaive:  one uniform integer in [0, n) per element; admit when < capacity.
//!   kSkipL:  Algorithm L — geometric skip lengths, so RNG work is
//!            O(z * (1 + ln(n/z))) for the whole stream instead of O(n).
//! The two modes make different per-stream decisions but are distributionally
//! identical: every admitted sample set is uniform over the stream.
enum class ReservoirMode { kNaive, kSkipL };

//! Fixed-capacity uniform sample of a stream. `Sample` is whatever record the
//! caller wants retained (plain observations, or timestamped triplets).
template <typename Sample>
class Reservoir {
 public:
  Reservoir(std::size_t capacity, std::uint64_t seed, ReservoirMode mode = ReservoirMode::kSkipL,
            std::uint64_t salt = 0)
      : capacity_(capacity), mode_(mode), rng_(seed, salt ^ 0x5265736572ULL) {
    if (capacity_ == 0) throw std::invalid_argument("reservoir capacity must be positive");
    slots_.reserve(capacity_);
  }

  //! Feed one record; returns whether it was stored.
  bool offer(const Sample& s) {
    ++n_;
    if (slots_.size() < capacity_) {
      slots_.push_back(s);
      if (mode_ == ReservoirMode::kSkipL && slots_.size() == capacity_) advance_skip();
      return true;
    }
    if (mode_ == ReservoirMode::kNaive) {
      const std::uint64_t i = rng_.bounded(n_);
      if (i < capacity_) {
        slots_[static_cast<std::size_t>(i)] = s;
        return true;
      }
      return false;
    }
    if (gap_ > 0) {
      --gap_;
      return false;
    }
    slots_[static_cast<std::size_t>(rng_.bounded(capacity_))] = s;
    advance_skip();
    return true;
  }

  std::span<const Sample> slots() const { return slots_; }
  std::uint64_t seen() const { return n_; }
  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return slots_.size(); }
  ReservoirMode mode() const { return mode_; }

  //! Raw 64-bit RNG draws consumed so far (skip-cost instrumentation).
  std::uint64_t rng_draws() const { return rng_.draw_count(); }

 private:
  //! Algorithm L: shrink the admission weight and draw the next gap length.
  void advance_skip() {
    w_ *= std::exp(std::log(rng_.uniform_pos()) / static_cast<double>(capacity_));
    const double g = std::floor(std::log(rng_.uniform_pos()) / std::log1p(-w_));
    gap_ = g >= 9.0e18 ? static_cast<std::uint64_t>(9.0e18) : static_cast<std::uint64_t>(g);
  }

  std::size_t capacity_;
  ReservoirMode mode_;
  Xoshiro256 rng_;
  std::vector<Sample> slots_;
  std::uint64_t n_ = 0;
  std::uint64_t gap_ = 0;
  double w_ = 1.0;
};

//! Matching samples of one id seen strictly before `before_ts`, by linear
//! scan. Pass kTimestampMax to collect all of the id's samples.
struct CollectResult {
  std::uint64_t count = 0;
  std::vector<double> latencies;
};

inline CollectResult collect_samples(const Reservoir<TimedSample>& r, ItemId id,
                                     Timestamp before_ts) {
  CollectResult out;
  for (const TimedSample& s : r.slots()) {
    if (s.id == id && s.ts < before_ts) {
      ++out.count;
      out.latencies.push_back(s.latency);
    }
  }
  return out;
}

}  // namespace hhq
