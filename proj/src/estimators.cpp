#include "hhq/estimators.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hhq/oracle.hpp"

namespace hhq {
namespace {

constexpr std::uint64_t kSquareSalt = 0x5351554152ull;   // reservoir stream
constexpr std::uint64_t kSquadSalt = 0x5351554144ull;    // reservoir stream
constexpr std::uint64_t kFilterSalt = 0x46696c746572ull; // selection stream

std::uint64_t ceil_to_count(double v, const char* what) {
  const double c = std::ceil(v);
  if (!(c >= 1.0) || !(c < 9.0e18))
    throw std::invalid_argument(std::string(what) + " capacity out of range");
  return static_cast<std::uint64_t>(c);
}

void require_ready(std::uint64_t n) {
  if (n == 0) throw std::runtime_error("query before any insert");
}

}  // namespace

// ---------------------------------------------------------------- square --

std::uint64_t SquareEstimator::sample_capacity(const ProblemConfig& config, double c_m) {
  config.validate_positive_delta();
  if (!(c_m > 0.0)) throw std::invalid_argument("c_m must be positive");
  return ceil_to_count(c_m * std::log(2.0 / config.delta) /
                           (config.theta * config.epsilon * config.epsilon),
                       "sample");
}

SquareEstimator::SquareEstimator(const ProblemConfig& config, double c_m)
    : reservoir_(sample_capacity(config, c_m), config.seed, ReservoirMode::kSkipL,
                 kSquareSalt) {}

void SquareEstimator::insert(const StreamElement& element) {
  require_latency(element.latency);
  ++n_;
  reservoir_.offer(element);
}

QueryAnswer SquareEstimator::query(ItemId id, double q) const {
  require_ready(n_);
  require_quantile_arg(q);
  std::vector<double> latencies;
  for (const StreamElement& s : reservoir_.slots())
    if (s.id == id) latencies.push_back(s.latency);

  QueryAnswer answer;
  answer.monitored = !latencies.empty();
  const auto count = static_cast<double>(latencies.size());
  const std::uint64_t capacity = reservoir_.capacity();
  answer.freq_estimate =
      n_ > capacity ? count * (static_cast<double>(n_) / static_cast<double>(capacity))
                    : count;
  if (answer.monitored) answer.quantile_estimate = exact_quantile(latencies, q);
  return answer;
}

std::uint64_t SquareEstimator::footprint() const { return reservoir_.size(); }

std::uint64_t SquareEstimator::footprint_bytes() const {
  return footprint() * static_cast<std::uint64_t>(sizeof(StreamElement));
}

// ----------------------------------------------------------------- quasi --

std::uint64_t QuasiEstimator::entry_capacity(const ProblemConfig& config) {
  config.validate();
  return ceil_to_count(2.0 / (config.epsilon * config.theta), "entry");
}

QuasiEstimator::QuasiEstimator(const ProblemConfig& config)
    : gk_eps_(config.epsilon / 2.0), table_(entry_capacity(config)) {}

void QuasiEstimator::insert(const StreamElement& element) {
  require_latency(element.latency);
  ++n_;
  auto touch = table_.touch(element.id, [this] { return GkSketch(gk_eps_); });
  if (touch.kind == SpaceSavingTable<GkSketch>::TouchKind::kEvicted)
    touch.entry->payload.reset();
  touch.entry->payload.insert(element.latency);
}

QueryAnswer QuasiEstimator::query(ItemId id, double q) const {
  require_ready(n_);
  require_quantile_arg(q);
  if (const auto* entry = table_.get(id)) {
    return {static_cast<double>(entry->count), entry->payload.quantile(q), true};
  }
  return {static_cast<double>(table_.min_count()), std::nullopt, false};
}

std::uint64_t QuasiEstimator::footprint() const {
  return table_.footprint([](const GkSketch& g) { return g.stored_count(); });
}

std::uint64_t QuasiEstimator::footprint_bytes() const {
  std::uint64_t bytes = 0;
  table_.for_each([&bytes](const SpaceSavingTable<GkSketch>::Entry& e) {
    bytes += 16 + 24 * static_cast<std::uint64_t>(e.payload.stored_count());
  });
  return bytes;
}

// ----------------------------------------------------------------- squad --

std::uint64_t SquadEstimator::sample_capacity(const ProblemConfig& config, double c_z) {
  config.validate_positive_delta();
  if (!(c_z > 0.0)) throw std::invalid_argument("c_z must be positive");
  return ceil_to_count(c_z * std::log(2.0 / config.delta) /
                           (config.theta * std::pow(config.epsilon, 1.5)),
                       "sample");
}

std::uint64_t SquadEstimator::entry_capacity(const ProblemConfig& config) {
  config.validate();
  return ceil_to_count(4.0 / (std::sqrt(config.epsilon) * config.theta), "entry");
}

SquadEstimator::SquadEstimator(const ProblemConfig& config, double c_z)
    : sketch_eps_(config.epsilon / 2.0),
      seed_(config.seed),
      reservoir_(sample_capacity(config, c_z), config.seed, ReservoirMode::kSkipL,
                 kSquadSalt),
      table_(entry_capacity(config)) {}

void SquadEstimator::insert(const StreamElement& element) {
  require_latency(element.latency);
  ++n_;
  reservoir_.offer(TimedSample{element.id, element.latency, n_});

  auto touch = table_.touch(element.id, [this] {
    return SquadPayload{RandomSketch(sketch_eps_, seed_, ++payload_seq_), kTimestampNever,
                        0};
  });
  using Kind = SpaceSavingTable<SquadPayload>::TouchKind;
  SquadPayload& payload = touch.entry->payload;
  if (touch.kind == Kind::kExisting) {
    payload.arrivals_since += 1;
  } else {
    if (touch.kind == Kind::kEvicted) payload.sketch.reset();
    payload.adopted_at = n_;
    payload.arrivals_since = 1;
  }
  payload.sketch.insert(element.latency);
}

double SquadEstimator::sample_weight() const {
  const auto z = static_cast<double>(reservoir_.capacity());
  const double scale = static_cast<double>(n_) / z;
  return scale > 1.0 ? scale : 1.0;
}

QueryAnswer SquadEstimator::query(ItemId id, double q) const {
  require_ready(n_);
  require_quantile_arg(q);
  const double weight = sample_weight();
  if (const auto* entry = table_.get(id)) {
    const SquadPayload& payload = entry->payload;
    const CollectResult pre = collect_samples(reservoir_, id, payload.adopted_at);
    const double freq = weight * static_cast<double>(pre.count) +
                        static_cast<double>(payload.arrivals_since);
    const double quant = payload.sketch.quantile_with_samples(pre.latencies, weight, q);
    return {freq, quant, true};
  }
  const CollectResult all = collect_samples(reservoir_, id, kTimestampMax);
  return {weight * static_cast<double>(all.count), std::nullopt, false};
}

std::uint64_t SquadEstimator::footprint() const {
  return reservoir_.size() +
         table_.footprint([](const SquadPayload& p) { return p.sketch.stored_count(); });
}

std::uint64_t SquadEstimator::footprint_bytes() const {
  std::uint64_t bytes = reservoir_.size() * static_cast<std::uint64_t>(sizeof(TimedSample));
  table_.for_each([&bytes](const SpaceSavingTable<SquadPayload>::Entry& e) {
    bytes += 32 + 8 * static_cast<std::uint64_t>(e.payload.sketch.stored_count());
  });
  return bytes;
}

// -------------------------------------------------------------- filtered --

FilteredEstimator::FilteredEstimator(std::unique_ptr<Estimator> inner,
                                     const ProblemConfig& base_config, double p,
                                     double alpha)
    : inner_(std::move(inner)),
      base_config_(base_config),
      p_(p),
      alpha_(alpha),
      rng_(base_config.seed, kFilterSalt) {
  base_config_.validate();
  if (!inner_) throw std::invalid_argument("filtered estimator needs an inner estimator");
  if (!(p_ > 0.0) || !(p_ <= 1.0))
    throw std::invalid_argument("sampling probability p must be in (0,1]");
  if (!(alpha_ > 0.0) || !(alpha_ < 1.0))
    throw std::invalid_argument("alpha must be in (0,1)");
  if (p_ < 1.0) gap_ = next_gap();
}

std::uint64_t FilteredEstimator::convergence_threshold(const ProblemConfig& base_config,
                                                       double p, double alpha) {
  base_config.validate_positive_delta();
  if (!(p > 0.0) || !(p <= 1.0))
    throw std::invalid_argument("sampling probability p must be in (0,1]");
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw std::invalid_argument("alpha must be in (0,1)");
  const double residual_eps = (1.0 - alpha) * base_config.epsilon;
  const double residual_delta = (1.0 - alpha) * base_config.delta;
  return ceil_to_count(std::log(2.0 / residual_delta) /
                           (base_config.theta * residual_eps * residual_eps * p),
                       "convergence");
}

std::uint64_t FilteredEstimator::convergence_threshold() const {
  return convergence_threshold(base_config_, p_, alpha_);
}

std::uint64_t FilteredEstimator::next_gap() {
  const double u = rng_.uniform_pos();
  const double gap = std::floor(std::log(u) / std::log1p(-p_));
  if (!(gap < 9.0e18)) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(gap);
}

void FilteredEstimator::insert(const StreamElement& element) {
  ++raw_n_;
  if (p_ >= 1.0) {
    inner_->insert(element);
    return;
  }
  if (gap_ > 0) {
    --gap_;
    return;
  }
  inner_->insert(element);
  gap_ = next_gap();
}

QueryAnswer FilteredEstimator::query(ItemId id, double q) const {
  QueryAnswer answer = inner_->query(id, q);
  answer.freq_estimate /= p_;
  return answer;
}

// --------------------------------------------------------------- factory --

ProblemConfig tightened_config(const ProblemConfig& config, double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw std::invalid_argument("alpha must be in (0,1)");
  ProblemConfig tight = config;
  tight.epsilon *= alpha;
  tight.delta *= alpha;
  tight.validate();
  return tight;
}

std::unique_ptr<Estimator> make_estimator(std::string_view algorithm,
                                          const ProblemConfig& config,
                                          const SizingConstants& sizing) {
  if (algorithm == "square") return std::make_unique<SquareEstimator>(config, sizing.c_m);
  if (algorithm == "quasi") return std::make_unique<QuasiEstimator>(config);
  if (algorithm == "squad") return std::make_unique<SquadEstimator>(config, sizing.c_z);
  throw std::invalid_argument("unknown algorithm: " + std::string(algorithm));
}

std::unique_ptr<Estimator> make_filtered_estimator(std::string_view algorithm,
                                                   const ProblemConfig& config, double p,
                                                   double alpha,
                                                   const SizingConstants& sizing) {
  auto inner = make_estimator(algorithm, tightened_config(config, alpha), sizing);
  return std::make_unique<FilteredEstimator>(std::move(inner), config, p, alpha);
}

}  // namespace hhq
