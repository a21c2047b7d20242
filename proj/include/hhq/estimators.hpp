#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "hhq/gk_sketch.hpp"
#include "hhq/random_sketch.hpp"
#include "hhq/reservoir.hpp"
#include "hhq/rng.hpp"
#include "hhq/space_saving.hpp"
#include "hhq/types.hpp"

namespace hhq {

//! Common face of the per-item quantile estimators. One insert call per
//! stream element; query(id, q) may be asked for any id at any point after
//! the first insert.
class Estimator {
 public:
  virtual ~Estimator() = default;

  virtual void insert(const StreamElement& element) = 0;

  //! Frequency and latency-quantile estimate for `id`.
  //! Throws std::invalid_argument when q is outside [0, 1] and
  //! std::runtime_error when nothing has been inserted yet.
  virtual QueryAnswer query(ItemId id, double q) const = 0;

  //! Stored records: samples and sketch values count 1 each, each table
  //! entry's metadata counts 1.
  virtual std::uint64_t footprint() const = 0;

  //! Same accounting with declared per-record byte sizes.
  virtual std::uint64_t footprint_bytes() const = 0;

  virtual std::uint64_t elements_seen() const = 0;

  virtual std::string_view name() const = 0;
};

//! Uniform-sample estimator: one reservoir of (id, latency) pairs sized
//! M = ceil(c_m / (theta * eps^2) * ln(2 / delta)). Answers are read off the
//! id's samples; frequencies are scaled by N / M once the reservoir is full.
class SquareEstimator final : public Estimator {
 public:
  explicit SquareEstimator(const ProblemConfig& config, double c_m = 1.0);

  static std::uint64_t sample_capacity(const ProblemConfig& config, double c_m = 1.0);

  void insert(const StreamElement& element) override;
  QueryAnswer query(ItemId id, double q) const override;
  std::uint64_t footprint() const override;
  std::uint64_t footprint_bytes() const override;
  std::uint64_t elements_seen() const override { return n_; }
  std::string_view name() const override { return "square"; }

  const Reservoir<StreamElement>& reservoir() const { return reservoir_; }

 private:
  std::uint64_t n_ = 0;
  Reservoir<StreamElement> reservoir_;
};

//! Deterministic estimator: Space Saving with k = ceil(2 / (eps * theta))
//! entries, each carrying a GK sketch run at eps / 2. The inherited count of
//! a reassigned entry covers the latencies its sketch never saw.
class QuasiEstimator final : public Estimator {
 public:
  explicit QuasiEstimator(const ProblemConfig& config);

  static std::uint64_t entry_capacity(const ProblemConfig& config);

  void insert(const StreamElement& element) override;
  QueryAnswer query(ItemId id, double q) const override;
  std::uint64_t footprint() const override;
  std::uint64_t footprint_bytes() const override;
  std::uint64_t elements_seen() const override { return n_; }
  std::string_view name() const override { return "quasi"; }

  const SpaceSavingTable<GkSketch>& table() const { return table_; }

 private:
  std::uint64_t n_ = 0;
  double gk_eps_;
  SpaceSavingTable<GkSketch> table_;
};

//! Per-entry state kept by SquadEstimator next to the Space Saving count.
struct SquadPayload {
  RandomSketch sketch;         // latencies since this id was adopted
  Timestamp adopted_at = 0;    // stream position at adoption
  std::uint64_t arrivals_since = 0;  // arrivals since adoption, incl. the adopting one
};

//! Combined estimator: a timestamped reservoir of z =
//! ceil(c_z / (theta * eps^1.5) * ln(2 / delta)) samples covers every id's
//! pre-adoption history, while a Space Saving table with m =
//! ceil(4 / (sqrt(eps) * theta)) entries tracks each current heavy hitter
//! exactly from its adoption point via a compactor sketch. Queries stitch
//! the two together: samples strictly older than the adoption timestamp are
//! weighted by N / z and merged with the sketch.
class SquadEstimator final : public Estimator {
 public:
  explicit SquadEstimator(const ProblemConfig& config, double c_z = 1.0);

  static std::uint64_t sample_capacity(const ProblemConfig& config, double c_z = 1.0);
  static std::uint64_t entry_capacity(const ProblemConfig& config);

  void insert(const StreamElement& element) override;
  QueryAnswer query(ItemId id, double q) const override;
  std::uint64_t footprint() const override;
  std::uint64_t footprint_bytes() const override;
  std::uint64_t elements_seen() const override { return n_; }
  std::string_view name() const override { return "squad"; }

  const Reservoir<TimedSample>& reservoir() const { return reservoir_; }
  const SpaceSavingTable<SquadPayload>& table() const { return table_; }

  //! Weight of one reservoir sample at the current stream length.
  double sample_weight() const;

 private:
  std::uint64_t n_ = 0;
  double sketch_eps_;
  std::uint64_t seed_;
  std::uint64_t payload_seq_ = 0;  // distinct RNG salt per adopted sketch
  Reservoir<TimedSample> reservoir_;
  SpaceSavingTable<SquadPayload> table_;
};

//! Bernoulli(p) pre-filter in front of an estimator built with tightened
//! parameters (theta, alpha*eps, alpha*delta). Selection uses geometric
//! skips, so unselected elements cost one decrement. Query answers pass
//! through with the frequency rescaled by 1 / p.
class FilteredEstimator final : public Estimator {
 public:
  //! `inner` must already be configured with the tightened parameters; see
  //! make_filtered_estimator for the one-call version.
  FilteredEstimator(std::unique_ptr<Estimator> inner, const ProblemConfig& base_config,
                    double p, double alpha);

  //! Stream prefix length after which the wrapper's accuracy targets hold:
  //! ceil(1/theta * ((1-alpha)*eps)^-2 * 1/p * ln(2 / ((1-alpha)*delta))).
  //! Advisory only; queries are answered at any N >= 1.
  static std::uint64_t convergence_threshold(const ProblemConfig& base_config, double p,
                                             double alpha);
  std::uint64_t convergence_threshold() const;

  void insert(const StreamElement& element) override;
  QueryAnswer query(ItemId id, double q) const override;
  std::uint64_t footprint() const override { return inner_->footprint(); }
  std::uint64_t footprint_bytes() const override { return inner_->footprint_bytes(); }
  std::uint64_t elements_seen() const override { return raw_n_; }
  std::string_view name() const override { return inner_->name(); }

  const Estimator& inner() const { return *inner_; }
  double sampling_probability() const { return p_; }
  double alpha() const { return alpha_; }

 private:
  std::uint64_t next_gap();

  std::unique_ptr<Estimator> inner_;
  ProblemConfig base_config_;
  double p_;
  double alpha_;
  std::uint64_t raw_n_ = 0;
  std::uint64_t gap_ = 0;
  Xoshiro256 rng_;
};

//! Tightened copy of `config` used for a filtered run's inner estimator.
ProblemConfig tightened_config(const ProblemConfig& config, double alpha);

//! Sizing-formula constants left free by the accuracy analysis. Defaults are
//! what the acceptance settings use.
struct SizingConstants {
  double c_m = 1.0;  // square reservoir
  double c_z = 1.0;  // squad reservoir
};

//! Build "square" | "quasi" | "squad". Throws std::invalid_argument on any
//! other name.
std::unique_ptr<Estimator> make_estimator(std::string_view algorithm,
                                          const ProblemConfig& config,
                                          const SizingConstants& sizing = {});

//! Like make_estimator, wrapped in a Bernoulli(p) pre-filter when p < 1 or
//! the caller asks for one explicitly.
std::unique_ptr<Estimator> make_filtered_estimator(std::string_view algorithm,
                                                   const ProblemConfig& config, double p,
                                                   double alpha,
                                                   const SizingConstants& sizing = {});

}  // namespace hhq
