#include "hhq/report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string_view>
#include <system_error>

#include "hhq/estimators.hpp"
#include "hhq/oracle.hpp"

namespace hhq {
namespace {

constexpr std::string_view kSchemaLine = "# schema=1";
constexpr std::string_view kRowHeader =
    "id,true_freq,freq_estimate,q,quantile_estimate,percentage_error";
constexpr std::string_view kSweepHeader =
    "algorithm,eps,seed,footprint,max_error,mean_error,insert_ns_per_element";

void append_number(std::string& s, double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  s.append(buf, r.ptr);
}

void append_number(std::string& s, std::uint64_t v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  s.append(buf, r.ptr);
}

[[noreturn]] void parse_fail(std::uint64_t line, const std::string& what) {
  throw std::runtime_error("report parse error at line " + std::to_string(line) + ": " +
                           what);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

double to_double(std::string_view s, std::uint64_t line) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    parse_fail(line, "bad number `" + std::string(s) + "`");
  return v;
}

std::uint64_t to_uint(std::string_view s, std::uint64_t line) {
  std::uint64_t v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    parse_fail(line, "bad count `" + std::string(s) + "`");
  return v;
}

//! key=value tokens of a `# <tag> ...` comment line.
std::map<std::string, std::string, std::less<>> parse_meta(std::string_view body,
                                                           std::uint64_t line) {
  std::map<std::string, std::string, std::less<>> out;
  for (std::string_view token : split(body, ' ')) {
    if (token.empty()) continue;
    const std::size_t eq = token.find('=');
    if (eq == std::string_view::npos)
      parse_fail(line, "expected key=value, got `" + std::string(token) + "`");
    out.emplace(std::string(token.substr(0, eq)), std::string(token.substr(eq + 1)));
  }
  return out;
}

std::string_view require_key(const std::map<std::string, std::string, std::less<>>& meta,
                             std::string_view key, std::uint64_t line) {
  const auto it = meta.find(key);
  if (it == meta.end()) parse_fail(line, "missing field `" + std::string(key) + "`");
  return it->second;
}

//! The run proper, with the oracle supplied by the caller (sweeps reuse one
//! oracle across cells).
RunReport run_with_oracle(const std::vector<StreamElement>& elements,
                          const ExactOracle& oracle, const RunOptions& options) {
  options.config.validate();
  if (options.quantiles.empty())
    throw std::invalid_argument("at least one quantile is required");
  for (double q : options.quantiles) require_quantile_arg(q);

  RunReport report;
  report.algorithm = options.algorithm;
  report.config = options.config;
  report.filter_p = options.filter_p;
  report.alpha = options.alpha;
  report.filtered = options.use_filter || options.filter_p < 1.0;
  if (report.filtered)
    report.convergence_n = FilteredEstimator::convergence_threshold(
        options.config, options.filter_p, options.alpha);

  const auto build = [&options, &report]() {
    return report.filtered
               ? make_filtered_estimator(options.algorithm, options.config,
                                         options.filter_p, options.alpha, options.sizing)
               : make_estimator(options.algorithm, options.config, options.sizing);
  };

  if (options.warmup && elements.size() < 1000000) {
    const auto scratch = build();
    for (const StreamElement& e : elements) scratch->insert(e);
  }

  const auto estimator = build();
  const auto insert_begin = std::chrono::steady_clock::now();
  for (const StreamElement& e : elements) estimator->insert(e);
  const auto insert_end = std::chrono::steady_clock::now();

  report.n = estimator->elements_seen();
  report.insert_ns_per_element =
      elements.empty()
          ? 0.0
          : std::chrono::duration<double, std::nano>(insert_end - insert_begin).count() /
                static_cast<double>(elements.size());
  report.footprint = estimator->footprint();
  report.footprint_bytes = estimator->footprint_bytes();
  report.has_bytes = options.report_bytes;
  report.has_query_time = options.time_queries;

  std::vector<double> qs = options.quantiles;
  std::sort(qs.begin(), qs.end());
  qs.erase(std::unique(qs.begin(), qs.end()), qs.end());

  const std::vector<ItemId> hitters = oracle.heavy_hitters(options.config.theta);
  const auto query_begin = std::chrono::steady_clock::now();
  for (const ItemId id : hitters) {
    for (const double q : qs) {
      const QueryAnswer answer = estimator->query(id, q);
      RunRow row;
      row.id = id;
      row.true_freq = oracle.freq(id);
      row.freq_estimate = answer.freq_estimate;
      row.q = q;
      if (answer.quantile_estimate) {
        row.quantile_estimate = answer.quantile_estimate;
        row.percentage_error = oracle.error(id, *answer.quantile_estimate, q);
      } else {
        row.percentage_error = 1.0;  // no answer: worst possible rank distance
      }
      report.rows.push_back(row);
    }
  }
  const auto query_end = std::chrono::steady_clock::now();
  if (!report.rows.empty())
    report.query_ns_per_query =
        std::chrono::duration<double, std::nano>(query_end - query_begin).count() /
        static_cast<double>(report.rows.size());

  std::sort(report.rows.begin(), report.rows.end(),
            [](const RunRow& a, const RunRow& b) {
              return a.id != b.id ? a.id < b.id : a.q < b.q;
            });

  double sum = 0.0;
  for (const RunRow& row : report.rows) {
    report.max_error = std::max(report.max_error, row.percentage_error);
    sum += row.percentage_error;
  }
  report.mean_error =
      report.rows.empty() ? 0.0 : sum / static_cast<double>(report.rows.size());
  return report;
}

}  // namespace

RunReport run_benchmark(const std::vector<StreamElement>& elements,
                        const RunOptions& options) {
  ExactOracle oracle;
  for (const StreamElement& e : elements) oracle.insert(e);
  return run_with_oracle(elements, oracle, options);
}

void write_report_csv(const RunReport& report, std::ostream& out) {
  std::string s;
  s.reserve(1 << 16);
  s.append(kSchemaLine).push_back('\n');

  s.append("# run algorithm=").append(report.algorithm);
  s.append(" theta=");
  append_number(s, report.config.theta);
  s.append(" eps=");
  append_number(s, report.config.epsilon);
  s.append(" delta=");
  append_number(s, report.config.delta);
  s.append(" seed=");
  append_number(s, report.config.seed);
  s.append(" n=");
  append_number(s, report.n);
  s.append(" p=");
  append_number(s, report.filter_p);
  s.append(" alpha=");
  append_number(s, report.alpha);
  if (report.filtered) {
    s.append(" convergence_n=");
    append_number(s, report.convergence_n);
  }
  s.push_back('\n');

  s.append(kRowHeader).push_back('\n');
  for (const RunRow& row : report.rows) {
    append_number(s, row.id);
    s.push_back(',');
    append_number(s, row.true_freq);
    s.push_back(',');
    append_number(s, row.freq_estimate);
    s.push_back(',');
    append_number(s, row.q);
    s.push_back(',');
    if (row.quantile_estimate) append_number(s, *row.quantile_estimate);
    s.push_back(',');
    append_number(s, row.percentage_error);
    s.push_back('\n');
  }

  s.append("# summary footprint=");
  append_number(s, report.footprint);
  if (report.has_bytes) {
    s.append(" footprint_bytes=");
    append_number(s, report.footprint_bytes);
  }
  s.append(" insert_ns_per_element=");
  append_number(s, report.insert_ns_per_element);
  if (report.has_query_time) {
    s.append(" query_ns_per_query=");
    append_number(s, report.query_ns_per_query);
  }
  s.append(" max_error=");
  append_number(s, report.max_error);
  s.append(" mean_error=");
  append_number(s, report.mean_error);
  s.append(" rows=");
  append_number(s, static_cast<std::uint64_t>(report.rows.size()));
  s.push_back('\n');

  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

RunReport parse_report_csv(std::istream& in) {
  RunReport report;
  std::string line;
  std::uint64_t lineno = 0;

  if (!std::getline(in, line)) parse_fail(1, "empty input");
  ++lineno;
  if (line != kSchemaLine)
    parse_fail(lineno, "schema mismatch: expected `" + std::string(kSchemaLine) + "`");

  if (!std::getline(in, line)) parse_fail(lineno + 1, "missing `# run` line");
  ++lineno;
  if (line.rfind("# run ", 0) != 0) parse_fail(lineno, "missing `# run` line");
  {
    const auto meta = parse_meta(std::string_view(line).substr(6), lineno);
    report.algorithm = require_key(meta, "algorithm", lineno);
    report.config.theta = to_double(require_key(meta, "theta", lineno), lineno);
    report.config.epsilon = to_double(require_key(meta, "eps", lineno), lineno);
    report.config.delta = to_double(require_key(meta, "delta", lineno), lineno);
    report.config.seed = to_uint(require_key(meta, "seed", lineno), lineno);
    report.n = to_uint(require_key(meta, "n", lineno), lineno);
    report.filter_p = to_double(require_key(meta, "p", lineno), lineno);
    report.alpha = to_double(require_key(meta, "alpha", lineno), lineno);
    if (const auto it = meta.find("convergence_n"); it != meta.end()) {
      report.filtered = true;
      report.convergence_n = to_uint(it->second, lineno);
    } else {
      report.filtered = report.filter_p < 1.0;
    }
  }

  if (!std::getline(in, line)) parse_fail(lineno + 1, "missing header row");
  ++lineno;
  if (line != kRowHeader) parse_fail(lineno, "unexpected header `" + line + "`");

  bool saw_summary = false;
  std::uint64_t declared_rows = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.rfind("# summary ", 0) == 0) {
      const auto meta = parse_meta(std::string_view(line).substr(10), lineno);
      report.footprint = to_uint(require_key(meta, "footprint", lineno), lineno);
      if (const auto it = meta.find("footprint_bytes"); it != meta.end()) {
        report.has_bytes = true;
        report.footprint_bytes = to_uint(it->second, lineno);
      }
      report.insert_ns_per_element =
          to_double(require_key(meta, "insert_ns_per_element", lineno), lineno);
      if (const auto it = meta.find("query_ns_per_query"); it != meta.end()) {
        report.has_query_time = true;
        report.query_ns_per_query = to_double(it->second, lineno);
      }
      report.max_error = to_double(require_key(meta, "max_error", lineno), lineno);
      report.mean_error = to_double(require_key(meta, "mean_error", lineno), lineno);
      declared_rows = to_uint(require_key(meta, "rows", lineno), lineno);
      saw_summary = true;
      break;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 6)
      parse_fail(lineno, "expected 6 fields, got " + std::to_string(fields.size()));
    RunRow row;
    row.id = to_uint(fields[0], lineno);
    row.true_freq = to_uint(fields[1], lineno);
    row.freq_estimate = to_double(fields[2], lineno);
    row.q = to_double(fields[3], lineno);
    if (!fields[4].empty()) row.quantile_estimate = to_double(fields[4], lineno);
    row.percentage_error = to_double(fields[5], lineno);
    report.rows.push_back(row);
  }
  if (!saw_summary) parse_fail(lineno, "missing `# summary` line");
  if (declared_rows != report.rows.size())
    parse_fail(lineno, "summary declares " + std::to_string(declared_rows) +
                           " rows but " + std::to_string(report.rows.size()) +
                           " are present");
  return report;
}

std::vector<SweepRow> run_sweep(const std::vector<StreamElement>& elements,
                                const SweepOptions& options) {
  if (options.algorithms.empty()) throw std::invalid_argument("no algorithms to sweep");
  if (options.eps_grid.empty()) throw std::invalid_argument("eps grid is empty");
  if (options.seeds.empty()) throw std::invalid_argument("no seeds to sweep");
  if (options.quantiles.empty()) throw std::invalid_argument("no quantiles to sweep");

  ExactOracle oracle;
  for (const StreamElement& e : elements) oracle.insert(e);

  std::vector<SweepRow> out;
  for (const std::string& algorithm : options.algorithms) {
    for (const double eps : options.eps_grid) {
      for (const std::uint64_t seed : options.seeds) {
        RunOptions cell;
        cell.algorithm = algorithm;
        cell.config = ProblemConfig{options.theta, eps, options.delta, seed};
        cell.quantiles = options.quantiles;
        cell.warmup = options.warmup;
        const RunReport r = run_with_oracle(elements, oracle, cell);
        out.push_back({algorithm, eps, seed, r.footprint, r.max_error, r.mean_error,
                       r.insert_ns_per_element});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.algorithm != b.algorithm) return a.algorithm < b.algorithm;
    if (a.eps != b.eps) return a.eps < b.eps;
    return a.seed < b.seed;
  });
  return out;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  std::string s;
  s.reserve(1 << 14);
  s.append(kSchemaLine).push_back('\n');
  s.append(kSweepHeader).push_back('\n');
  for (const SweepRow& row : rows) {
    s.append(row.algorithm);
    s.push_back(',');
    append_number(s, row.eps);
    s.push_back(',');
    append_number(s, row.seed);
    s.push_back(',');
    append_number(s, row.footprint);
    s.push_back(',');
    append_number(s, row.max_error);
    s.push_back(',');
    append_number(s, row.mean_error);
    s.push_back(',');
    append_number(s, row.insert_ns_per_element);
    s.push_back('\n');
  }
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

CompareResult compare_reports(const RunReport& a, const RunReport& b, double tolerance) {
  if (!(tolerance >= 0.0)) throw std::invalid_argument("tolerance must be >= 0");
  CompareResult result;

  const auto relative = [&](std::string name, double x, double y) {
    const double scale = std::max(std::abs(x), std::abs(y));
    const double delta = scale == 0.0 ? 0.0 : std::abs(x - y) / scale;
    result.metrics.push_back({std::move(name), x, y, delta, delta <= tolerance});
  };
  const auto absolute = [&](std::string name, double x, double y) {
    const double delta = std::abs(x - y);
    result.metrics.push_back({std::move(name), x, y, delta, delta <= tolerance});
  };

  relative("n", static_cast<double>(a.n), static_cast<double>(b.n));
  relative("footprint", static_cast<double>(a.footprint),
           static_cast<double>(b.footprint));
  if (a.has_bytes && b.has_bytes)
    relative("footprint_bytes", static_cast<double>(a.footprint_bytes),
             static_cast<double>(b.footprint_bytes));
  relative("rows", static_cast<double>(a.rows.size()),
           static_cast<double>(b.rows.size()));
  absolute("max_error", a.max_error, b.max_error);
  absolute("mean_error", a.mean_error, b.mean_error);

  for (const MetricDelta& m : result.metrics) result.ok = result.ok && m.within;
  return result;
}

}  // namespace hhq
