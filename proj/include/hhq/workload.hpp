#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hhq/rng.hpp"
#include "hhq/types.hpp"

namespace hhq {

//! Family of per-id latency distributions. Parameters are drawn per id from
//! the workload seed, so different ids have genuinely different latency
//! profiles (and therefore different true quantiles).
enum class LatencyModel {
  kLogNormal,  // exp(mu_x + sigma_x * Normal(0,1))
  kUniform,    // Uniform[a_x, b_x]
};

//! Everything that defines a synthetic trace. Same spec => same trace.
struct WorkloadSpec {
  std::uint64_t n = 0;           // stream length
  std::uint64_t universe = 1;    // ids are 1..universe
  double zipf_s = 1.0;           // skew exponent, 0 = uniform
  LatencyModel latency_model = LatencyModel::kLogNormal;
  std::uint64_t seed = 1;

  void validate() const;
};

LatencyModel parse_latency_model(const std::string& name);
std::string latency_model_name(LatencyModel model);

//! Incremental generator: call next() up to any count. Ids are drawn i.i.d.
//! from Zipf(zipf_s) over {1..universe} (probability of id i proportional to
//! i^-s), latencies from the id's own distribution. Exists so that streams
//! far larger than memory can be produced twice, identically, by
//! constructing two instances from the same spec.
class WorkloadStream {
 public:
  explicit WorkloadStream(const WorkloadSpec& spec);

  StreamElement next();

  std::uint64_t emitted() const { return emitted_; }
  const WorkloadSpec& spec() const { return spec_; }

  //! Probability of id (1-based) under the configured Zipf law.
  double id_probability(ItemId id) const;

 private:
  WorkloadSpec spec_;
  std::vector<double> cdf_;     // cdf_[i] = P(id <= i+1), back() == 1
  std::vector<double> param_a_; // mu_x   or lower bound a_x
  std::vector<double> param_b_; // sigma_x or width b_x - a_x
  Xoshiro256 rng_;
  std::uint64_t emitted_ = 0;
};

//! Materialize spec.n elements.
std::vector<StreamElement> generate(const WorkloadSpec& spec);

//! One element per line, `<id>,<latency>`, LF endings, no header. Latencies
//! use the shortest decimal form that round-trips the exact double.
void write_trace(const std::vector<StreamElement>& elements, const std::string& path);

//! Inverse of write_trace. Malformed lines and invalid latencies raise
//! std::runtime_error naming the 1-based line number.
std::vector<StreamElement> read_trace(const std::string& path);

}  // namespace hhq
