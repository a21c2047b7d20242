#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hhq/types.hpp"

namespace hhq {

//! Greenwald–Khanna quantile summary: a sorted subset of the stream where
//! each kept value v_i carries g_i (minimum rank gap to its predecessor) and
//! delta_i (extra rank uncertainty). Deterministic: any quantile query is
//! answered with additive rank error at most eps.
//!
//! Maintained structure, checked by the property tests after every insert:
//!   - values nondecreasing, sum of g_i = n, first/last tuple have delta = 0;
//!   - g_i + delta_i <= max(1, floor(2*eps*n)) for every non-first tuple,
//!     i.e. the true ranks of adjacent kept values are within 2*eps*n.
//! A compress pass (run every ceil(1/(2*eps)) inserts) merges a tuple into its
//! right neighbor whenever the merged tuple would still satisfy that bound.
class GkSketch {
 public:
  struct Tuple {
    double value;
    std::uint64_t g;
    std::uint64_t delta;
  };

  explicit GkSketch(double eps);

  void insert(double v);

  //! Value whose rank is within eps*n of max(1, ceil(q*n)).
  //! Throws std::runtime_error("no observations") when empty.
  double quantile(double q) const;

  //! Drops all data, keeps eps.
  void reset();

  std::size_t stored_count() const { return tuples_.size(); }
  std::uint64_t inserted_count() const { return n_; }
  double eps() const { return eps_; }

  //! Raw tuples, for invariant checks and footprint audits.
  std::span<const Tuple> tuples() const { return tuples_; }

 private:
  std::uint64_t merge_threshold() const;
  void compress();

  double eps_;
  std::uint64_t n_ = 0;
  std::uint64_t compress_every_;
  std::uint64_t since_compress_ = 0;
  std::vector<Tuple> tuples_;
};

}  // namespace hhq
