#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "hhq/types.hpp"

namespace hhq {

//! Value at normalized rank q of a latency multiset: the k-th smallest with
//! k = max(1, ceil(q*n)); q = 0 returns the minimum.
//! Throws std::runtime_error("no observations") on an empty multiset and
//! std::invalid_argument for q outside [0,1].
double exact_quantile(std::span<const double> latencies, double q);

//! Same, but `sorted` must already be ascending (no copy, O(1)).
double exact_quantile_sorted(std::span<const double> sorted, double q);

//! Weak rank of v: |{x in latencies : x <= v}| / n. Empty multiset is an error.
double exact_rank(std::span<const double> latencies, double v);

//! Same over an ascending multiset (binary search).
double exact_rank_sorted(std::span<const double> sorted, double v);

//! The accuracy metric: |exact_rank(truth, answer) - q|.
double percentage_error(double answer, double q, std::span<const double> truth);

//! Brute-force ground truth: keeps every latency of every id. All sketches
//! and estimators are tested against this.
class ExactOracle {
 public:
  void insert(const StreamElement& e);

  //! True frequency f_x; 0 when the id never appeared.
  std::uint64_t freq(ItemId id) const;

  //! Total number of inserted elements (N).
  std::uint64_t total() const { return total_; }

  //! All ids with freq >= theta * N (boundary inclusive), ascending by id.
  std::vector<ItemId> heavy_hitters(double theta) const;

  //! Exact q-quantile of one id's latencies. Unknown id is an error.
  double quantile(ItemId id, double q) const;

  //! Weak rank of v within one id's latencies. Unknown id is an error.
  double rank(ItemId id, double v) const;

  //! percentage_error of `answer` against one id's latencies.
  double error(ItemId id, double answer, double q) const;

  //! One id's latencies in ascending order (sorted lazily, then cached).
  std::span<const double> latencies_sorted(ItemId id) const;

  std::size_t distinct_ids() const { return items_.size(); }

 private:
  struct PerId {
    std::vector<double> values;
    bool sorted = true;
  };

  PerId& find_or_throw(ItemId id) const;

  mutable std::unordered_map<ItemId, PerId> items_;
  std::uint64_t total_ = 0;
};

}  // namespace hhq
