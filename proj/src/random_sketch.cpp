#include "hhq/random_sketch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hhq {

std::size_t RandomSketch::capacity_for(double eps) {
  if (!(eps > 0.0) || !(eps < 1.0))
    throw std::invalid_argument("random-sketch eps must be in (0,1), got " + std::to_string(eps));
  const double inv = 1.0 / eps;
  auto s = static_cast<std::size_t>(std::ceil(0.5 * inv * std::sqrt(1.0 + std::log2(inv))));
  s = std::max<std::size_t>(2, s);
  if (s % 2 != 0) ++s;
  return s;
}

RandomSketch::RandomSketch(double eps, std::uint64_t seed, std::uint64_t salt, int repetitions)
    : RandomSketch(capacity_for(eps), seed, salt, repetitions) {}

RandomSketch::RandomSketch(std::size_t capacity, std::uint64_t seed, std::uint64_t salt,
                           int repetitions)
    : capacity_(capacity), rng_(seed, salt ^ 0x52616e646f6dULL) {
  if (capacity_ < 2 || capacity_ % 2 != 0)
    throw std::invalid_argument("buffer capacity must be even and >= 2");
  if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
  reps_.resize(static_cast<std::size_t>(repetitions));
}

RandomSketch RandomSketch::with_capacity(std::size_t capacity, std::uint64_t seed,
                                         std::uint64_t salt, int repetitions) {
  return RandomSketch(capacity, seed, salt, repetitions);
}

void RandomSketch::insert(double v) {
  require_latency(v);
  ++n_;
  for (Compactor& c : reps_) insert_into(c, v);
}

void RandomSketch::insert_into(Compactor& c, double v) {
  if (c.levels.empty()) c.levels.emplace_back();
  c.levels[0].push_back(v);

  // Promote any buffer that just filled: keep every second sorted element
  // starting at a random offset, handing them one level up at double weight.
  for (std::size_t h = 0; h < c.levels.size(); ++h) {
    if (c.levels[h].size() < capacity_) break;
    // Grow first: adding a level may reallocate and would invalidate any
    // reference taken into `levels` beforehand.
    if (h + 1 == c.levels.size()) c.levels.emplace_back();
    std::vector<double>& buf = c.levels[h];
    std::vector<double>& up = c.levels[h + 1];
    std::sort(buf.begin(), buf.end());
    const std::size_t offset = rng_.bounded(2);
    for (std::size_t i = offset; i < buf.size(); i += 2) up.push_back(buf[i]);
    buf.clear();
  }
}

void RandomSketch::gather(const Compactor& c, std::vector<std::pair<double, double>>& out) const {
  out.clear();
  double weight = 1.0;
  for (const std::vector<double>& buf : c.levels) {
    for (double v : buf) out.emplace_back(v, weight);
    weight *= 2.0;
  }
  std::sort(out.begin(), out.end());
}

double RandomSketch::one_quantile(const Compactor& c, double q) const {
  std::vector<std::pair<double, double>> vals;
  gather(c, vals);
  if (vals.empty()) throw std::runtime_error("no observations");

  // Stored value whose cumulative weighted rank lands closest to q*n; ties
  // resolve to the smaller value so the answer is a pure function of state.
  const double target = q * static_cast<double>(n_);
  double best = vals.front().first;
  double best_gap = std::numeric_limits<double>::infinity();
  double cum = 0.0;
  for (const auto& [v, w] : vals) {
    cum += w;
    const double gap = std::abs(cum - target);
    if (gap < best_gap) {
      best_gap = gap;
      best = v;
    }
  }
  return best;
}

double RandomSketch::one_merged_quantile(const Compactor& c, std::span<const double> samples,
                                         double w, double q) const {
  std::vector<std::pair<double, double>> vals;
  gather(c, vals);
  vals.reserve(vals.size() + samples.size());
  for (double v : samples) vals.emplace_back(v, w);
  if (vals.empty()) throw std::runtime_error("no observations");
  std::sort(vals.begin(), vals.end());

  double total = 0.0;
  for (const auto& [v, weight] : vals) total += weight;
  const double target = q * total;
  double cum = 0.0;
  for (const auto& [v, weight] : vals) {
    cum += weight;
    if (cum >= target) return v;
  }
  return vals.back().first;
}

namespace {

double median_of(std::vector<double>& answers) {
  std::sort(answers.begin(), answers.end());
  return answers[(answers.size() - 1) / 2];
}

}  // namespace

double RandomSketch::quantile(double q) const {
  require_quantile_arg(q);
  if (reps_.size() == 1) return one_quantile(reps_[0], q);
  std::vector<double> answers;
  answers.reserve(reps_.size());
  for (const Compactor& c : reps_) answers.push_back(one_quantile(c, q));
  return median_of(answers);
}

double RandomSketch::quantile_with_samples(std::span<const double> samples, double w,
                                           double q) const {
  require_quantile_arg(q);
  if (!(w > 0.0)) throw std::invalid_argument("sample weight must be positive");
  if (reps_.size() == 1) return one_merged_quantile(reps_[0], samples, w, q);
  std::vector<double> answers;
  answers.reserve(reps_.size());
  for (const Compactor& c : reps_) answers.push_back(one_merged_quantile(c, samples, w, q));
  return median_of(answers);
}

void RandomSketch::reset() {
  for (Compactor& c : reps_) c.levels.clear();
  n_ = 0;
}

std::size_t RandomSketch::stored_count() const {
  std::size_t total = 0;
  for (const Compactor& c : reps_)
    for (const std::vector<double>& buf : c.levels) total += buf.size();
  return total;
}

std::span<const std::vector<double>> RandomSketch::levels(int repetition) const {
  return reps_.at(static_cast<std::size_t>(repetition)).levels;
}

}  // namespace hhq
