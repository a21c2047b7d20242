#include "hhq/workload.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <system_error>

namespace hhq {
namespace {

constexpr std::uint64_t kIdSalt = 0x5a697066ull;     // id sequence
constexpr std::uint64_t kParamSalt = 0x506172616dull; // per-id parameters

// Latency parameter ranges. Log-normal medians span 1ms..200ms with mild to
// heavy tail spread; uniform supports sit inside [0, 0.3].
constexpr double kLogMedianLo = -6.907755278982137;  // ln 0.001
constexpr double kLogMedianHi = -1.6094379124341003; // ln 0.2
constexpr double kSigmaLo = 0.25;
constexpr double kSigmaHi = 1.0;
constexpr double kUniformLoMax = 0.1;
constexpr double kUniformWidthLo = 0.01;
constexpr double kUniformWidthHi = 0.2;

[[noreturn]] void line_error(const std::string& path, std::uint64_t line,
                             const std::string& what) {
  throw std::runtime_error(path + ": line " + std::to_string(line) + ": " + what);
}

}  // namespace

void WorkloadSpec::validate() const {
  if (n < 1) throw std::invalid_argument("workload n must be >= 1");
  if (universe < 1) throw std::invalid_argument("workload universe must be >= 1");
  if (!(zipf_s >= 0.0) || !std::isfinite(zipf_s))
    throw std::invalid_argument("zipf exponent must be finite and >= 0");
}

LatencyModel parse_latency_model(const std::string& name) {
  if (name == "lognormal") return LatencyModel::kLogNormal;
  if (name == "uniform") return LatencyModel::kUniform;
  throw std::invalid_argument("unknown latency model: " + name);
}

std::string latency_model_name(LatencyModel model) {
  return model == LatencyModel::kLogNormal ? "lognormal" : "uniform";
}

WorkloadStream::WorkloadStream(const WorkloadSpec& spec)
    : spec_(spec), rng_(spec.seed, kIdSalt) {
  spec_.validate();

  cdf_.resize(spec_.universe);
  double total = 0.0;
  for (std::uint64_t i = 0; i < spec_.universe; ++i) {
    total += std::pow(static_cast<double>(i + 1), -spec_.zipf_s);
    cdf_[i] = total;
  }
  for (double& c : cdf_) c /= total;
  cdf_.back() = 1.0;

  Xoshiro256 params(spec_.seed, kParamSalt);
  param_a_.resize(spec_.universe);
  param_b_.resize(spec_.universe);
  for (std::uint64_t i = 0; i < spec_.universe; ++i) {
    if (spec_.latency_model == LatencyModel::kLogNormal) {
      param_a_[i] = kLogMedianLo + (kLogMedianHi - kLogMedianLo) * params.uniform();
      param_b_[i] = kSigmaLo + (kSigmaHi - kSigmaLo) * params.uniform();
    } else {
      param_a_[i] = kUniformLoMax * params.uniform();
      param_b_[i] =
          kUniformWidthLo + (kUniformWidthHi - kUniformWidthLo) * params.uniform();
    }
  }
}

double WorkloadStream::id_probability(ItemId id) const {
  if (id < 1 || id > spec_.universe) return 0.0;
  const std::size_t i = static_cast<std::size_t>(id - 1);
  return i == 0 ? cdf_[0] : cdf_[i] - cdf_[i - 1];
}

StreamElement WorkloadStream::next() {
  const double u = rng_.uniform();
  const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  const std::size_t i = static_cast<std::size_t>(it - cdf_.begin());
  const ItemId id = static_cast<ItemId>(i) + 1;

  double latency;
  if (spec_.latency_model == LatencyModel::kLogNormal) {
    latency = std::exp(param_a_[i] + param_b_[i] * rng_.normal());
  } else {
    latency = param_a_[i] + param_b_[i] * rng_.uniform();
  }
  ++emitted_;
  return {id, latency};
}

std::vector<StreamElement> generate(const WorkloadSpec& spec) {
  WorkloadStream stream(spec);
  std::vector<StreamElement> out;
  out.reserve(spec.n);
  for (std::uint64_t i = 0; i < spec.n; ++i) out.push_back(stream.next());
  return out;
}

void write_trace(const std::vector<StreamElement>& elements, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);

  std::string buffer;
  buffer.reserve(1 << 20);
  char scratch[64];
  for (const StreamElement& e : elements) {
    auto idr = std::to_chars(scratch, scratch + sizeof scratch, e.id);
    buffer.append(scratch, idr.ptr);
    buffer.push_back(',');
    auto lr = std::to_chars(scratch, scratch + sizeof scratch, e.latency);
    buffer.append(scratch, lr.ptr);
    buffer.push_back('\n');
    if (buffer.size() >= (1 << 20) - 128) {
      out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
      buffer.clear();
    }
  }
  out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<StreamElement> read_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);

  std::vector<StreamElement> out;
  std::string line;
  std::uint64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() && in.eof()) break;
    const char* begin = line.data();
    const char* end = begin + line.size();

    StreamElement e;
    auto idr = std::from_chars(begin, end, e.id);
    if (idr.ec != std::errc() || idr.ptr == end || *idr.ptr != ',')
      line_error(path, lineno, "expected `<id>,<latency>`, got `" + line + "`");
    auto lr = std::from_chars(idr.ptr + 1, end, e.latency);
    if (lr.ec != std::errc() || lr.ptr != end)
      line_error(path, lineno, "bad latency in `" + line + "`");
    if (std::isnan(e.latency)) line_error(path, lineno, "latency is NaN");
    if (!std::isfinite(e.latency)) line_error(path, lineno, "latency is not finite");
    if (e.latency < 0.0) line_error(path, lineno, "latency is negative");
    out.push_back(e);
  }
  return out;
}

}  // namespace hhq
