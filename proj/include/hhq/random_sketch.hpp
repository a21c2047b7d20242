#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hhq/rng.hpp"
#include "hhq/types.hpp"

namespace hhq {

//! Randomized buffer-compactor quantile summary ("Random"): values live in
//! per-level buffers of capacity s, a level-h value representing 2^h stream
//! elements. When a level fills, its sorted contents are halved — every
//! second element starting at a random offset survives — and promoted one
//! level up, so there is never more than one buffer per level and the
//! weighted count sum(|buffer_h| * 2^h) always equals n.
//!
//! For a fixed quantile q the returned value's rank error is within eps with
//! probability >= 2/3 per instance; `repetitions` independent copies can be
//! kept and their answers median-combined to sharpen that.
class RandomSketch {
 public:
  //! Buffer capacity matching the eps target (even, >= 2).
  static std::size_t capacity_for(double eps);

  RandomSketch(double eps, std::uint64_t seed, std::uint64_t salt = 0, int repetitions = 1);

  //! Test entry point with an explicit buffer capacity.
  static RandomSketch with_capacity(std::size_t capacity, std::uint64_t seed,
                                    std::uint64_t salt = 0, int repetitions = 1);

  void insert(double v);

  //! Stored value whose cumulative weighted rank is closest to q*n.
  //! Throws std::runtime_error("no observations") when empty.
  double quantile(double q) const;

  //! Weighted quantile over (stored values, weight 2^level) united with
  //! `samples` (weight w each): smallest value whose cumulative weight reaches
  //! q * total weight. Does not mutate the sketch. Throws when both parts are
  //! empty.
  double quantile_with_samples(std::span<const double> samples, double w, double q) const;

  //! Drops all values, keeps capacity/eps/rng configuration.
  void reset();

  std::size_t stored_count() const;
  std::uint64_t inserted_count() const { return n_; }
  std::size_t buffer_capacity() const { return capacity_; }
  int repetitions() const { return static_cast<int>(reps_.size()); }

  //! Level buffers of one repetition (tests only). Index 0 receives raw
  //! inserts; buffer h holds weight-2^h values.
  std::span<const std::vector<double>> levels(int repetition = 0) const;

 private:
  struct Compactor {
    std::vector<std::vector<double>> levels;
  };

  RandomSketch(std::size_t capacity, std::uint64_t seed, std::uint64_t salt, int repetitions);

  void insert_into(Compactor& c, double v);
  void gather(const Compactor& c, std::vector<std::pair<double, double>>& out) const;
  double one_quantile(const Compactor& c, double q) const;
  double one_merged_quantile(const Compactor& c, std::span<const double> samples, double w,
                             double q) const;

  std::size_t capacity_;
  std::uint64_t n_ = 0;
  Xoshiro256 rng_;
  std::vector<Compactor> reps_;
};

}  // namespace hhq
