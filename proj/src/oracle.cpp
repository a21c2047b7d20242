#include "hhq/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hhq {

namespace {

[[noreturn]] void throw_empty() { throw std::runtime_error("no observations"); }

std::size_t quantile_index(std::size_t n, double q) {
  // k-th smallest with k = max(1, ceil(q*n)), as a 0-based index.
  const auto k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
  return std::max<std::size_t>(1, std::min(k, n)) - 1;
}

}  // namespace

double exact_quantile(std::span<const double> latencies, double q) {
  require_quantile_arg(q);
  if (latencies.empty()) throw_empty();
  std::vector<double> copy(latencies.begin(), latencies.end());
  const std::size_t idx = quantile_index(copy.size(), q);
  std::nth_element(copy.begin(), copy.begin() + static_cast<std::ptrdiff_t>(idx), copy.end());
  return copy[idx];
}

double exact_quantile_sorted(std::span<const double> sorted, double q) {
  require_quantile_arg(q);
  if (sorted.empty()) throw_empty();
  return sorted[quantile_index(sorted.size(), q)];
}

double exact_rank(std::span<const double> latencies, double v) {
  if (latencies.empty()) throw_empty();
  std::size_t at_most = 0;
  for (double x : latencies)
    if (x <= v) ++at_most;
  return static_cast<double>(at_most) / static_cast<double>(latencies.size());
}

double exact_rank_sorted(std::span<const double> sorted, double v) {
  if (sorted.empty()) throw_empty();
  const auto it = std::upper_bound(sorted.begin(), sorted.end(), v);
  return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

double percentage_error(double answer, double q, std::span<const double> truth) {
  return std::abs(exact_rank(truth, answer) - q);
}

void ExactOracle::insert(const StreamElement& e) {
  require_latency(e.latency);
  PerId& per = items_[e.id];
  if (!per.values.empty() && e.latency < per.values.back()) per.sorted = false;
  per.values.push_back(e.latency);
  ++total_;
}

std::uint64_t ExactOracle::freq(ItemId id) const {
  const auto it = items_.find(id);
  return it == items_.end() ? 0 : it->second.values.size();
}

std::vector<ItemId> ExactOracle::heavy_hitters(double theta) const {
  const double cutoff = theta * static_cast<double>(total_);
  std::vector<ItemId> out;
  for (const auto& [id, per] : items_)
    if (static_cast<double>(per.values.size()) >= cutoff) out.push_back(id);
  std::sort(out.begin(), out.end());
  return out;
}

ExactOracle::PerId& ExactOracle::find_or_throw(ItemId id) const {
  const auto it = items_.find(id);
  if (it == items_.end() || it->second.values.empty())
    throw std::runtime_error("no observations for id " + std::to_string(id));
  return it->second;
}

std::span<const double> ExactOracle::latencies_sorted(ItemId id) const {
  PerId& per = find_or_throw(id);
  if (!per.sorted) {
    std::sort(per.values.begin(), per.values.end());
    per.sorted = true;
  }
  return per.values;
}

double ExactOracle::quantile(ItemId id, double q) const {
  return exact_quantile_sorted(latencies_sorted(id), q);
}

double ExactOracle::rank(ItemId id, double v) const {
  return exact_rank_sorted(latencies_sorted(id), v);
}

double ExactOracle::error(ItemId id, double answer, double q) const {
  return std::abs(rank(id, answer) - q);
}

}  // namespace hhq
