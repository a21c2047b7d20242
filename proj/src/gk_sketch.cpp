#include "hhq/gk_sketch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hhq {

GkSketch::GkSketch(double eps) : eps_(eps) {
  if (!(eps > 0.0) || !(eps < 1.0))
    throw std::invalid_argument("gk eps must be in (0,1), got " + std::to_string(eps));
  compress_every_ = static_cast<std::uint64_t>(std::ceil(1.0 / (2.0 * eps_)));
  tuples_.reserve(16);
}

std::uint64_t GkSketch::merge_threshold() const {
  const auto t = static_cast<std::uint64_t>(2.0 * eps_ * static_cast<double>(n_));
  return std::max<std::uint64_t>(1, t);
}

void GkSketch::insert(double v) {
  require_latency(v);
  ++n_;

  // Position of the first kept value strictly greater than v.
  const auto it = std::upper_bound(
      tuples_.begin(), tuples_.end(), v,
      [](double lhs, const Tuple& rhs) { return lhs < rhs.value; });

  std::uint64_t delta = 0;
  if (it != tuples_.begin() && it != tuples_.end()) {
    // Interior insert: the new tuple inherits the ambient rank uncertainty.
    const auto cap = static_cast<std::uint64_t>(2.0 * eps_ * static_cast<double>(n_));
    delta = cap > 0 ? cap - 1 : 0;
  }
  tuples_.insert(it, Tuple{v, 1, delta});

  if (++since_compress_ >= compress_every_) {
    compress();
    since_compress_ = 0;
  }
}

void GkSketch::compress() {
  if (tuples_.size() <= 2) return;
  const std::uint64_t threshold = merge_threshold();

  // Right-to-left: fold tuple i into its right neighbor when the merged tuple
  // still satisfies g + delta <= threshold. First and last tuples are kept so
  // the exact minimum and maximum survive.
  std::size_t write = tuples_.size() - 1;
  for (std::size_t i = tuples_.size() - 1; i-- > 1;) {
    Tuple& right = tuples_[write];
    Tuple& cur = tuples_[i];
    if (cur.g + right.g + right.delta <= threshold) {
      right.g += cur.g;
    } else {
      tuples_[--write] = cur;
    }
  }
  tuples_[--write] = tuples_.front();
  tuples_.erase(tuples_.begin(), tuples_.begin() + static_cast<std::ptrdiff_t>(write));
}

double GkSketch::quantile(double q) const {
  require_quantile_arg(q);
  if (tuples_.empty()) throw std::runtime_error("no observations");

  const auto target = std::max<std::uint64_t>(
      1, static_cast<std::uint64_t>(std::ceil(q * static_cast<double>(n_))));

  // Half the widest rank window; a tuple within this of the target always
  // exists, and the window bound keeps it within eps*n.
  std::uint64_t widest = 0;
  for (const Tuple& t : tuples_) widest = std::max(widest, t.g + t.delta);
  const double allowed = static_cast<double>(widest) / 2.0;

  std::uint64_t r_min = 0;
  for (const Tuple& t : tuples_) {
    r_min += t.g;
    const std::uint64_t r_max = r_min + t.delta;
    const double low = static_cast<double>(target) - allowed;
    const double high = static_cast<double>(target) + allowed;
    if (static_cast<double>(r_min) >= low && static_cast<double>(r_max) <= high)
      return t.value;
  }
  return tuples_.back().value;
}

void GkSketch::reset() {
  tuples_.clear();
  n_ = 0;
  since_compress_ = 0;
}

}  // namespace hhq
