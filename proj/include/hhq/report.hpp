#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hhq/estimators.hpp"
#include "hhq/types.hpp"

namespace hhq {

//! One (heavy hitter, q) measurement against the exact oracle.
struct RunRow {
  ItemId id = 0;
  std::uint64_t true_freq = 0;
  double freq_estimate = 0.0;
  double q = 0.0;
  std::optional<double> quantile_estimate;  // absent => empty CSV field
  double percentage_error = 0.0;
};

//! Knobs for one benchmark run.
struct RunOptions {
  std::string algorithm = "quasi";
  ProblemConfig config;
  std::vector<double> quantiles = {0.5, 0.9, 0.99};
  double filter_p = 1.0;  // < 1 puts the Bernoulli pre-filter in front
  double alpha = 0.5;     // pre-filter parameter split
  bool use_filter = false;  // wrap even when filter_p == 1
  SizingConstants sizing;
  bool report_bytes = false;
  bool time_queries = false;
  bool warmup = true;  // untimed extra pass for runs under 10^6 elements
};

//! Everything a run produces. Timing fields are wall-clock and therefore
//! excluded from byte-determinism guarantees; every other field is a pure
//! function of (trace, options).
struct RunReport {
  std::string algorithm;
  ProblemConfig config;
  double filter_p = 1.0;
  double alpha = 0.5;
  bool filtered = false;
  std::uint64_t convergence_n = 0;  // advisory threshold, filtered runs only
  std::uint64_t n = 0;
  std::uint64_t footprint = 0;
  std::uint64_t footprint_bytes = 0;
  bool has_bytes = false;
  double insert_ns_per_element = 0.0;
  double query_ns_per_query = 0.0;
  bool has_query_time = false;
  std::vector<RunRow> rows;  // sorted by (id, q)
  double max_error = 0.0;
  double mean_error = 0.0;
};

//! Single pass over `elements`: feeds the estimator (timed) and the oracle,
//! then queries every oracle heavy hitter at every requested q.
RunReport run_benchmark(const std::vector<StreamElement>& elements,
                        const RunOptions& options);

//! CSV layout: `# schema=1`, a `# run` metadata comment, a header row, data
//! rows, and a trailing `# summary` comment with the aggregate metrics.
void write_report_csv(const RunReport& report, std::ostream& out);

//! Parses write_report_csv output. Throws std::runtime_error on schema or
//! format mismatches (with a line number).
RunReport parse_report_csv(std::istream& in);

//! One sweep cell: a full run reduced to its summary metrics.
struct SweepRow {
  std::string algorithm;
  double eps = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t footprint = 0;
  double max_error = 0.0;
  double mean_error = 0.0;
  double insert_ns_per_element = 0.0;
};

struct SweepOptions {
  std::vector<std::string> algorithms;
  double theta = 0.01;
  double delta = 0.05;
  std::vector<double> eps_grid;
  std::vector<double> quantiles = {0.5, 0.9, 0.99};
  std::vector<std::uint64_t> seeds = {1};
  bool warmup = true;
};

//! One run per (algorithm, eps, seed) over the same trace; the oracle is
//! computed once. Rows come back sorted by (algorithm, eps, seed).
std::vector<SweepRow> run_sweep(const std::vector<StreamElement>& elements,
                                const SweepOptions& options);

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

//! One compared metric. Counted metrics (footprint, rows, n) use relative
//! deltas; error metrics, already fractions of rank, use absolute deltas.
struct MetricDelta {
  std::string name;
  double a = 0.0;
  double b = 0.0;
  double delta = 0.0;
  bool within = true;
};

struct CompareResult {
  std::vector<MetricDelta> metrics;
  bool ok = true;
};

CompareResult compare_reports(const RunReport& a, const RunReport& b, double tolerance);

}  // namespace hhq
