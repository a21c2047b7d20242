#include "hhq/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "doctest.h"
#include "hhq/oracle.hpp"
#include "hhq/rng.hpp"
#include "hhq/workload.hpp"

using namespace hhq;

namespace {

ProblemConfig config_with(double theta, double eps, double delta, std::uint64_t seed = 1) {
  ProblemConfig c;
  c.theta = theta;
  c.epsilon = eps;
  c.delta = delta;
  c.seed = seed;
  return c;
}

// Loosest configuration at which every structure retains the whole stream:
// reservoirs and entry tables sized past n, sketches that never compact or
// merge. Answers must then be exact.
ProblemConfig lossless_config(std::uint64_t n, std::uint64_t seed) {
  return config_with(1.0, 1.0 / (2.0 * static_cast<double>(n)), 0.5, seed);
}

}  // namespace

TEST_CASE("capacity formulas: frozen values recomputed independently") {
  // See tools/frozen_values.py; the values below come from that script, not
  // from running the library.
  const ProblemConfig base = config_with(0.01, 0.1, 0.05);
  CHECK(SquareEstimator::sample_capacity(base) == 36889);
  CHECK(SquareEstimator::sample_capacity(config_with(0.01, 0.05, 0.05)) == 147556);
  CHECK(SquareEstimator::sample_capacity(config_with(0.01, 0.025, 0.05)) == 590221);

  CHECK(QuasiEstimator::entry_capacity(base) == 2000);
  CHECK(QuasiEstimator::entry_capacity(config_with(0.01, 0.05, 0.05)) == 4000);
  CHECK(QuasiEstimator::entry_capacity(config_with(0.01, 0.025, 0.05)) == 8000);

  CHECK(SquadEstimator::sample_capacity(base) == 11666);
  CHECK(SquadEstimator::sample_capacity(config_with(0.01, 0.05, 0.05)) == 32995);
  CHECK(SquadEstimator::sample_capacity(config_with(0.01, 0.025, 0.05)) == 93323);
  CHECK(SquadEstimator::entry_capacity(base) == 1265);
  CHECK(SquadEstimator::entry_capacity(config_with(0.01, 0.05, 0.05)) == 1789);
  CHECK(SquadEstimator::entry_capacity(config_with(0.01, 0.025, 0.05)) == 2530);

  // Sizing constants scale the reservoir formulas directly.
  CHECK(SquareEstimator::sample_capacity(base, 2.0) == 73778);
  CHECK(SquadEstimator::sample_capacity(base, 0.5) == 5833);

  CHECK(FilteredEstimator::convergence_threshold(config_with(0.01, 0.05, 0.05), 0.1, 0.9) ==
        239658582);
  CHECK(FilteredEstimator::convergence_threshold(config_with(0.1, 0.2, 0.2), 0.5, 0.5) == 5992);
}

TEST_CASE("randomized estimators refuse delta = 0; the deterministic one accepts it") {
  ProblemConfig c = config_with(0.1, 0.2, 0.0);
  CHECK_THROWS_AS(SquareEstimator{c}, std::invalid_argument);
  CHECK_THROWS_AS(SquadEstimator{c}, std::invalid_argument);
  CHECK(QuasiEstimator(c).footprint() == 0);
}

TEST_CASE("factory builds by name and rejects unknown names") {
  const ProblemConfig c = config_with(0.1, 0.2, 0.2);
  CHECK(make_estimator("square", c)->name() == "square");
  CHECK(make_estimator("quasi", c)->name() == "quasi");
  CHECK(make_estimator("squad", c)->name() == "squad");
  CHECK_THROWS_AS(make_estimator("qausi", c), std::invalid_argument);
  CHECK_THROWS_AS(make_estimator("", c), std::invalid_argument);
}

TEST_CASE("fresh estimators have footprint 0 and refuse queries") {
  const ProblemConfig c = config_with(0.1, 0.2, 0.2);
  for (const char* name : {"square", "quasi", "squad"}) {
    auto est = make_estimator(name, c);
    CHECK(est->footprint() == 0);
    CHECK(est->elements_seen() == 0);
    CHECK_THROWS_AS(est->query(1, 0.5), std::runtime_error);
    est->insert({1, 1.0});
    CHECK_THROWS_AS(est->query(1, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(est->query(1, -0.5), std::invalid_argument);
  }
}

TEST_CASE("elements_seen counts insert calls for every estimator and the wrapper") {
  const ProblemConfig c = config_with(0.1, 0.2, 0.2);
  Xoshiro256 rng(4, 0);
  auto square = make_estimator("square", c);
  auto quasi = make_estimator("quasi", c);
  auto squad = make_estimator("squad", c);
  auto filtered = make_filtered_estimator("squad", c, 0.3, 0.5);
  for (std::uint64_t i = 1; i <= 3000; ++i) {
    const StreamElement e{1 + rng.bounded(50), rng.uniform()};
    square->insert(e);
    quasi->insert(e);
    squad->insert(e);
    filtered->insert(e);
    CHECK(square->elements_seen() == i);
    CHECK(quasi->elements_seen() == i);
    CHECK(squad->elements_seen() == i);
    CHECK(filtered->elements_seen() == i);   // raw stream, not the thinned one
  }
}

// ------------------------------------------------------------------ square --

TEST_CASE("square with capacity beyond the stream keeps everything and is exact") {
  const ProblemConfig c = lossless_config(200, 3);
  SquareEstimator est(c);
  REQUIRE(SquareEstimator::sample_capacity(c) >= 200);
  Xoshiro256 rng(9, 0);
  std::vector<StreamElement> stream;
  for (int i = 0; i < 200; ++i) stream.push_back({1 + rng.bounded(5), rng.uniform()});
  ExactOracle oracle;
  for (const auto& e : stream) {
    est.insert(e);
    oracle.insert(e);
  }
  CHECK(est.reservoir().size() == 200);   // full retention
  CHECK(est.footprint() == 200);
  for (ItemId id = 1; id <= 5; ++id) {
    const auto ans = est.query(id, 0.5);
    CHECK(ans.monitored);
    CHECK(ans.freq_estimate == static_cast<double>(oracle.freq(id)));
    REQUIRE(ans.quantile_estimate.has_value());
    CHECK(*ans.quantile_estimate == oracle.quantile(id, 0.5));
  }
}

TEST_CASE("square answers (0, absent, unmonitored) for an unsampled id") {
  SquareEstimator est(config_with(0.5, 0.5, 0.5));
  est.insert({1, 1.0});
  const auto ans = est.query(999, 0.5);
  CHECK(ans.freq_estimate == 0.0);
  CHECK(!ans.quantile_estimate.has_value());
  CHECK(!ans.monitored);
}

TEST_CASE("square frequency scaling switches on exactly when the reservoir overflows") {
  const ProblemConfig c = config_with(1.0, 0.3, 0.5);   // tiny M
  const auto m = SquareEstimator::sample_capacity(c);
  SquareEstimator est(c);
  for (std::uint64_t i = 0; i < m; ++i) est.insert({1, 0.5});
  CHECK(est.query(1, 0.5).freq_estimate == static_cast<double>(m));  // N == M: raw count
  est.insert({1, 0.5});
  const double n = static_cast<double>(m + 1);
  // All samples are id 1, so S_x = M and the scaled estimate is exactly N.
  CHECK(est.query(1, 0.5).freq_estimate == static_cast<double>(m) * n / static_cast<double>(m));
  CHECK(est.footprint() == m);           // capped at capacity
}

TEST_CASE("square frequency estimates are unbiased across seeds") {
  const double f_x = 3000.0;
  const std::uint64_t n = 20000;
  const int runs = 500;
  std::vector<StreamElement> stream;
  for (std::uint64_t i = 0; i < n; ++i) {
    // id 1 on every ~7th slot: 3000 arrivals; filler ids otherwise.
    if (i % 20 < 3) stream.push_back({1, 0.5});
    else stream.push_back({2 + i % 170, 0.5});
  }
  REQUIRE(std::count_if(stream.begin(), stream.end(),
                        [](const StreamElement& e) { return e.id == 1; }) == 3000);

  const ProblemConfig base = config_with(0.1, 0.1, 0.5);
  const double m = static_cast<double>(SquareEstimator::sample_capacity(base));
  double sum = 0.0;
  for (int run = 0; run < runs; ++run) {
    ProblemConfig c = base;
    c.seed = 7000 + static_cast<std::uint64_t>(run);
    SquareEstimator est(c);
    for (const auto& e : stream) est.insert(e);
    sum += est.query(1, 0.5).freq_estimate;
  }
  const double mean = sum / runs;
  const double p = f_x / static_cast<double>(n);
  const double sigma = (static_cast<double>(n) / m) * std::sqrt(m * p * (1.0 - p));
  const double tol = 3.0 * sigma / std::sqrt(static_cast<double>(runs));
  INFO("mean=", mean, " expected=", f_x, " tol=", tol);
  CHECK(std::abs(mean - f_x) <= tol);
}

// ------------------------------------------------------------------- quasi --

TEST_CASE("quasi hand simulation: eviction resets the payload sketch") {
  // Loosest valid parameters give the smallest possible table, 3 entries.
  const ProblemConfig c = config_with(1.0, 0.999, 0.5);
  REQUIRE(QuasiEstimator::entry_capacity(c) == 3);
  QuasiEstimator est(c);
  est.insert({'a', 1.0});
  est.insert({'a', 2.0});
  est.insert({'b', 5.0});
  est.insert({'d', 6.0});
  est.insert({'c', 9.0});   // evicts b (least-recently-touched minimal entry)

  const auto* entry = est.table().get('c');
  REQUIRE(entry != nullptr);
  CHECK(entry->count == 2);                        // b's 1 + 1
  CHECK(entry->payload.inserted_count() == 1);     // fresh sketch: only the 9
  CHECK(entry->payload.quantile(0.5) == 9.0);
  CHECK(est.table().get('b') == nullptr);
  CHECK(est.table().get('a')->count == 2);

  const auto ans = est.query('c', 0.5);
  CHECK(ans.monitored);
  CHECK(ans.freq_estimate == 2.0);
  CHECK(*ans.quantile_estimate == 9.0);
}

TEST_CASE("quasi answers (min count, absent) for unmonitored ids") {
  const ProblemConfig c = config_with(1.0, 0.999, 0.5);   // 3 entries
  QuasiEstimator est(c);
  for (ItemId id = 1; id <= 3; ++id) {
    est.insert({id, 1.0});
    est.insert({id, 2.0});
  }
  const auto ans = est.query(99, 0.5);
  CHECK(!ans.monitored);
  CHECK(ans.freq_estimate == 2.0);     // the minimal live count
  CHECK(!ans.quantile_estimate.has_value());
}

TEST_CASE("quasi per-entry sketches never claim more values than the entry count") {
  WorkloadSpec spec{30000, 400, 1.1, LatencyModel::kLogNormal, 17};
  QuasiEstimator est(config_with(0.05, 0.2, 0.05));
  for (const auto& e : generate(spec)) est.insert(e);
  int bad = 0;
  est.table().for_each([&bad](const SpaceSavingTable<GkSketch>::Entry& e) {
    if (e.payload.inserted_count() > e.count) ++bad;
  });
  CHECK(bad == 0);
}

TEST_CASE("quasi missing-prefix bound: unsketched arrivals per heavy hitter stay under N/k") {
  // 400 table entries over 500 live ids, so tail evictions really happen.
  WorkloadSpec spec{50000, 500, 1.2, LatencyModel::kUniform, 21};
  const ProblemConfig c = config_with(0.05, 0.1, 0.05);
  QuasiEstimator est(c);
  ExactOracle oracle;
  for (const auto& e : generate(spec)) {
    est.insert(e);
    oracle.insert(e);
  }
  const double bound = static_cast<double>(oracle.total()) /
                       static_cast<double>(QuasiEstimator::entry_capacity(c));
  for (ItemId id : oracle.heavy_hitters(c.theta)) {
    const auto* entry = est.table().get(id);
    REQUIRE(entry != nullptr);
    const std::uint64_t missed = oracle.freq(id) - entry->payload.inserted_count();
    CHECK(static_cast<double>(missed) <= bound);
  }
}

TEST_CASE("quasi heavy-hitter answers stay within eps deterministically") {
  WorkloadSpec spec{100000, 2000, 1.2, LatencyModel::kLogNormal, 33};
  const ProblemConfig c = config_with(0.01, 0.05, 0.05);
  QuasiEstimator est(c);
  ExactOracle oracle;
  for (const auto& e : generate(spec)) {
    est.insert(e);
    oracle.insert(e);
  }
  for (ItemId id : oracle.heavy_hitters(c.theta)) {
    for (double q : {0.5, 0.9, 0.99}) {
      const auto ans = est.query(id, q);
      REQUIRE(ans.monitored);
      CHECK(oracle.error(id, *ans.quantile_estimate, q) <= c.epsilon);
      CHECK(std::abs(ans.freq_estimate - static_cast<double>(oracle.freq(id))) <=
            c.epsilon * static_cast<double>(oracle.total()));
    }
  }
}

// ------------------------------------------------------------------- squad --

TEST_CASE("squad first element: monitored at once, sampled at once") {
  const ProblemConfig c = config_with(0.1, 0.2, 0.2);
  SquadEstimator est(c);
  est.insert({42, 3.5});

  const auto* entry = est.table().get(42);
  REQUIRE(entry != nullptr);
  CHECK(entry->count == 1);
  CHECK(entry->payload.arrivals_since == 1);
  CHECK(entry->payload.adopted_at == 1);
  CHECK(entry->payload.sketch.inserted_count() == 1);
  CHECK(entry->payload.sketch.quantile(0.5) == 3.5);

  REQUIRE(est.reservoir().size() == 1);
  CHECK(est.reservoir().slots()[0].id == 42);
  CHECK(est.reservoir().slots()[0].latency == 3.5);
  CHECK(est.reservoir().slots()[0].ts == 1);

  const auto ans = est.query(42, 0.9);
  CHECK(ans.monitored);
  CHECK(ans.freq_estimate == 1.0);
  CHECK(*ans.quantile_estimate == 3.5);
}

TEST_CASE("squad eviction path: fresh timestamp, count 1 since adoption, reset sketch") {
  // theta=1, eps=0.64: 5-entry table, 3-sample reservoir.
  const ProblemConfig c = config_with(1.0, 0.64, 0.5);
  REQUIRE(SquadEstimator::entry_capacity(c) == 5);
  SquadEstimator est(c);
  for (ItemId id = 1; id <= 5; ++id) est.insert({id, static_cast<double>(id)});
  est.insert({6, 60.0});   // evicts id 1

  CHECK(est.table().get(1) == nullptr);
  const auto* entry = est.table().get(6);
  REQUIRE(entry != nullptr);
  CHECK(entry->count == 2);                       // inherited 1 + 1
  CHECK(entry->payload.arrivals_since == 1);
  CHECK(entry->payload.adopted_at == 6);          // the eviction position
  CHECK(entry->payload.sketch.inserted_count() == 1);
  CHECK(entry->payload.sketch.quantile(0.5) == 60.0);
}

TEST_CASE("squad bookkeeping matches a shadow log on a skewed stream") {
  WorkloadSpec spec{20000, 500, 1.2, LatencyModel::kLogNormal, 12};
  const ProblemConfig c = config_with(0.05, 0.2, 0.05);
  SquadEstimator est(c);
  const auto stream = generate(spec);
  // Shadow log: arrival positions (1-based) and latencies per id.
  std::unordered_map<ItemId, std::vector<std::pair<Timestamp, double>>> log;
  Timestamp pos = 0;
  for (const auto& e : stream) {
    est.insert(e);
    log[e.id].emplace_back(++pos, e.latency);
  }

  const std::uint64_t n = est.elements_seen();
  int bad = 0;
  est.table().for_each([&](const SpaceSavingTable<SquadPayload>::Entry& e) {
    if (e.payload.arrivals_since > e.count) ++bad;
    if (e.payload.adopted_at > n) ++bad;
    if (e.payload.sketch.inserted_count() != e.payload.arrivals_since) ++bad;
    // The sketch saw exactly the arrivals at ts >= adoption timestamp.
    std::uint64_t since = 0;
    for (const auto& [ts, latency] : log[e.id])
      since += (ts >= e.payload.adopted_at);
    if (since != e.payload.arrivals_since) ++bad;
  });
  CHECK(bad == 0);
}

TEST_CASE("squad frequency answers decompose into weighted samples plus exact suffix") {
  WorkloadSpec spec{15000, 300, 1.1, LatencyModel::kUniform, 31};
  const ProblemConfig c = config_with(0.05, 0.25, 0.1);
  SquadEstimator est(c);
  for (const auto& e : generate(spec)) est.insert(e);

  const double w = est.sample_weight();
  CHECK(w == std::max(1.0, static_cast<double>(est.elements_seen()) /
                               static_cast<double>(est.reservoir().capacity())));

  for (ItemId id = 1; id <= 310; ++id) {    // includes never-seen ids
    const auto ans = est.query(id, 0.5);
    const auto* entry = est.table().get(id);
    if (entry != nullptr) {
      std::uint64_t before = 0;
      for (const auto& s : est.reservoir().slots())
        before += (s.id == id && s.ts < entry->payload.adopted_at);
      CHECK(ans.monitored);
      CHECK(ans.freq_estimate ==
            w * static_cast<double>(before) + static_cast<double>(entry->payload.arrivals_since));
      CHECK(ans.quantile_estimate.has_value());
    } else {
      std::uint64_t all = 0;
      for (const auto& s : est.reservoir().slots()) all += (s.id == id);
      CHECK(!ans.monitored);
      CHECK(ans.freq_estimate == w * static_cast<double>(all));
      CHECK(!ans.quantile_estimate.has_value());
    }
  }
}

// ---------------------------------------------------------------- wrapper --

TEST_CASE("filter wrapper validates p and alpha") {
  const ProblemConfig c = config_with(0.1, 0.2, 0.2);
  CHECK_THROWS_AS(make_filtered_estimator("squad", c, 0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(make_filtered_estimator("squad", c, 1.1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(make_filtered_estimator("squad", c, 0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_filtered_estimator("squad", c, 0.5, 1.0), std::invalid_argument);
}

TEST_CASE("tightened_config scales eps and delta by alpha") {
  const ProblemConfig c = config_with(0.01, 0.1, 0.2);
  const ProblemConfig t = tightened_config(c, 0.5);
  CHECK(t.theta == c.theta);
  CHECK(t.epsilon == 0.05);
  CHECK(t.delta == 0.1);
  CHECK(t.seed == c.seed);
}

TEST_CASE("filter at p = 1 is a byte-for-byte identity over the tightened inner") {
  const ProblemConfig c = config_with(0.05, 0.2, 0.2, 77);
  for (const char* name : {"square", "quasi", "squad"}) {
    auto wrapped = make_filtered_estimator(name, c, 1.0, 0.5);
    auto bare = make_estimator(name, tightened_config(c, 0.5));
    WorkloadSpec spec{20000, 200, 1.1, LatencyModel::kLogNormal, 5};
    for (const auto& e : generate(spec)) {
      wrapped->insert(e);
      bare->insert(e);
    }
    CHECK(wrapped->footprint() == bare->footprint());
    for (ItemId id = 1; id <= 200; ++id) {
      for (double q : {0.5, 0.99}) {
        const auto a = wrapped->query(id, q);
        const auto b = bare->query(id, q);
        CHECK(a.monitored == b.monitored);
        CHECK(a.freq_estimate == b.freq_estimate);   // exact: dividing by 1 changes no bits
        CHECK(a.quantile_estimate == b.quantile_estimate);
      }
    }
  }
}

TEST_CASE("filter at p = 0.1 thins the stream to a binomial-sized inner count") {
  const ProblemConfig c = config_with(0.05, 0.2, 0.2, 11);
  auto est = make_filtered_estimator("square", c, 0.1, 0.5);
  const std::uint64_t n = 1000000;
  for (std::uint64_t i = 0; i < n; ++i) est->insert({1 + i % 100, 0.5});
  CHECK(est->elements_seen() == n);
  const auto* wrapper = dynamic_cast<const FilteredEstimator*>(est.get());
  REQUIRE(wrapper != nullptr);
  const double inner_n = static_cast<double>(wrapper->inner().elements_seen());
  const double expected = 0.1 * static_cast<double>(n);
  const double tol = 4.0 * std::sqrt(static_cast<double>(n) * 0.1 * 0.9);
  INFO("inner saw ", inner_n, ", expected ", expected, " +- ", tol);
  CHECK(std::abs(inner_n - expected) <= tol);
}

TEST_CASE("filter rescales frequencies by 1/p and passes quantiles through") {
  const ProblemConfig c = config_with(0.1, 0.3, 0.3, 13);
  auto est = make_filtered_estimator("squad", c, 0.5, 0.5);
  WorkloadSpec spec{50000, 60, 1.0, LatencyModel::kUniform, 2};
  for (const auto& e : generate(spec)) est->insert(e);
  const auto* wrapper = dynamic_cast<const FilteredEstimator*>(est.get());
  REQUIRE(wrapper != nullptr);
  for (ItemId id = 1; id <= 60; ++id) {
    const auto outer = est->query(id, 0.9);
    const auto inner = wrapper->inner().query(id, 0.9);
    CHECK(outer.freq_estimate == inner.freq_estimate / 0.5);
    CHECK(outer.quantile_estimate == inner.quantile_estimate);
    CHECK(outer.monitored == inner.monitored);
  }
}

TEST_CASE("filtered heavy-hitter frequencies converge to the truth across seeds") {
  // Unit-scale convergence run: threshold 5992 (frozen), stream length 1e5.
  const ProblemConfig base = config_with(0.1, 0.2, 0.2);
  REQUIRE(FilteredEstimator::convergence_threshold(base, 0.5, 0.5) == 5992);

  WorkloadSpec spec{100000, 100, 1.2, LatencyModel::kLogNormal, 3};
  const auto stream = generate(spec);
  ExactOracle oracle;
  for (const auto& e : stream) oracle.insert(e);
  const auto hitters = oracle.heavy_hitters(base.theta);
  REQUIRE(!hitters.empty());

  int failures = 0, rows = 0;
  for (int run = 0; run < 50; ++run) {
    ProblemConfig c = base;
    c.seed = 400 + static_cast<std::uint64_t>(run);
    auto est = make_filtered_estimator("square", c, 0.5, 0.5);
    for (const auto& e : stream) est->insert(e);
    for (ItemId id : hitters) {
      ++rows;
      const double err = std::abs(est->query(id, 0.5).freq_estimate -
                                  static_cast<double>(oracle.freq(id)));
      failures += err > base.epsilon * static_cast<double>(oracle.total());
    }
  }
  INFO(failures, " of ", rows, " outside the bound");
  CHECK(static_cast<double>(failures) <= base.delta * static_cast<double>(rows));
}

// ------------------------------------------------------------- degeneration --

TEST_CASE("every estimator is exact when capacities exceed the stream") {
  Xoshiro256 rng(71, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const std::uint64_t n = 50 + rng.bounded(350);
    WorkloadSpec spec{n, 32, 0.8, trial % 2 ? LatencyModel::kUniform : LatencyModel::kLogNormal,
                      100 + static_cast<std::uint64_t>(trial)};
    const auto stream = generate(spec);
    ExactOracle oracle;
    for (const auto& e : stream) oracle.insert(e);

    const ProblemConfig c = lossless_config(n, 55 + static_cast<std::uint64_t>(trial));
    for (const char* name : {"square", "quasi", "squad"}) {
      auto est = make_estimator(name, c);
      for (const auto& e : stream) est->insert(e);
      for (ItemId id = 1; id <= 32; ++id) {
        if (oracle.freq(id) == 0) continue;
        for (double q : {0.0, 0.3, 0.5, 0.9, 1.0}) {
          const auto ans = est->query(id, q);
          REQUIRE(ans.monitored);
          CHECK(ans.freq_estimate == static_cast<double>(oracle.freq(id)));
          REQUIRE(ans.quantile_estimate.has_value());
          const double err = oracle.error(id, *ans.quantile_estimate, q);
          const double oracle_err = oracle.error(id, oracle.quantile(id, q), q);
          CHECK(err <= oracle_err + 1.0 / static_cast<double>(oracle.freq(id)) + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("square footprint is monotone and plateaus at min(N, M)") {
  // Quasi and squad footprints legitimately shrink (sketch compaction,
  // eviction resets), so monotonicity is a square-only property.
  const ProblemConfig c = config_with(0.2, 0.3, 0.3);
  const std::uint64_t m = SquareEstimator::sample_capacity(c);
  WorkloadSpec spec{20000, 100, 1.0, LatencyModel::kUniform, 9};
  SquareEstimator est(c);
  std::uint64_t prev = 0;
  std::uint64_t seen = 0;
  int bad = 0;
  for (const auto& e : generate(spec)) {
    est.insert(e);
    ++seen;
    const auto fp = est.footprint();
    bad += fp < prev;
    bad += fp != std::min<std::uint64_t>(seen, m);
    prev = fp;
  }
  CHECK(bad == 0);
  CHECK(est.footprint() == m);
}

TEST_CASE("footprint accounting matches a by-hand recount of the structures") {
  const ProblemConfig c = config_with(0.05, 0.2, 0.1);
  WorkloadSpec spec{30000, 400, 1.1, LatencyModel::kLogNormal, 44};
  const auto stream = generate(spec);

  SquareEstimator square(c);
  QuasiEstimator quasi(c);
  SquadEstimator squad(c);
  for (const auto& e : stream) {
    square.insert(e);
    quasi.insert(e);
    squad.insert(e);
  }
  CHECK(square.footprint() ==
        std::min<std::uint64_t>(30000, SquareEstimator::sample_capacity(c)));

  std::uint64_t quasi_expect = 0;
  quasi.table().for_each([&quasi_expect](const SpaceSavingTable<GkSketch>::Entry& e) {
    quasi_expect += 1 + e.payload.stored_count();
  });
  CHECK(quasi.footprint() == quasi_expect);

  std::uint64_t squad_expect = squad.reservoir().size();
  squad.table().for_each([&squad_expect](const SpaceSavingTable<SquadPayload>::Entry& e) {
    squad_expect += 1 + e.payload.sketch.stored_count();
  });
  CHECK(squad.footprint() == squad_expect);

  // Byte accounting is derived from the same counts, so it must be at least
  // the record count times the smallest record size.
  CHECK(square.footprint_bytes() >= square.footprint());
  CHECK(quasi.footprint_bytes() >= quasi.footprint());
  CHECK(squad.footprint_bytes() >= squad.footprint());
}
