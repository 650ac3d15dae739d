#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <vector>

#include "socsim/generators.hpp"
#include "socsim/simulation.hpp"
#include "socsim/summary_io.hpp"
#include "test_util.hpp"

using namespace socsim;

namespace {

bool same_aggregates(const RunSummary& a, const RunSummary& b) {
  return a.events_recorded == b.events_recorded &&
         a.histogram.exact == b.histogram.exact &&
         a.histogram.overflow == b.histogram.overflow &&
         a.moments.count == b.moments.count && a.moments.sum == b.moments.sum &&
         a.moments.sum_squares == b.moments.sum_squares &&
         a.involvement == b.involvement;
}

}  // namespace

TEST_CASE("init_inventories") {
  const FirmNetwork net = generate_scale_free(500, 4, 6);

  SECTION("zeros mode") {
    const InventoryState state = init_inventories(net, InventoryInit::zeros, 1);
    for (Quantity z : state.z) CHECK(z == 0);
  }

  SECTION("uniform mode respects [0, n_i] and primary firms stay empty") {
    const InventoryState state =
        init_inventories(net, InventoryInit::uniform, 2);
    state.validate(net);
    for (FirmId i = 0; i < net.firm_count(); ++i)
      if (net.supplier_count(i) == 0) CHECK(state.z[i] == 0);
  }

  SECTION("uniform mode is uniform over {0..n_i} (chi-square over seeds)") {
    // One firm with 4 suppliers; 100k draws across seeds.
    const FirmNetwork star =
        FirmNetwork::from_links(5, {{1, 0}, {2, 0}, {3, 0}, {4, 0}});
    std::vector<std::uint64_t> counts(5, 0);
    const int draws = 100000;
    for (int seed = 0; seed < draws; ++seed) {
      const InventoryState state =
          init_inventories(star, InventoryInit::uniform, seed);
      ++counts[static_cast<std::size_t>(state.z[0])];
    }
    const double expected = draws / 5.0;
    double chi2 = 0.0;
    for (auto c : counts) {
      const double d = static_cast<double>(c) - expected;
      chi2 += d * d / expected;
    }
    CHECK(chi2 < 23.51);  // 4 dof, p ~ 1e-4
  }
}

TEST_CASE("single event served from stock gives histogram {0: 1}") {
  const FirmNetwork net = FirmNetwork::from_links(2, {{1, 0}});
  InventoryState initial{{1, 0}};
  SimulationConfig cfg;
  cfg.events = 1;
  cfg.source_mode = SourceMode::firm_list;
  cfg.source_firms = {0};
  cfg.seed = 3;
  const RunSummary summary = run_experiment(net, cfg, &initial);
  REQUIRE(summary.histogram.exact.size() == 1);
  CHECK(summary.histogram.exact[0] == 1);
  CHECK(summary.events_recorded == 1);
}

TEST_CASE("two events on the three-firm chain with a fixed source") {
  // With single-supplier firms every batch equals the deficit, so no
  // leftover inventory accumulates anywhere: both events cascade fully.
  const FirmNetwork net = FirmNetwork::from_links(3, {{2, 1}, {1, 0}});
  SimulationConfig cfg;
  cfg.events = 2;
  cfg.source_mode = SourceMode::firm_list;
  cfg.source_firms = {0};
  cfg.seed = 1;
  cfg.record_mode = RecordMode::full_records;
  const RunSummary summary = run_experiment(net, cfg);
  REQUIRE(summary.records.size() == 2);
  CHECK(summary.records[0].second == 3);
  CHECK(summary.records[1].second == 3);
}

TEST_CASE("inventory persists across events where batches leave leftovers") {
  // Source with two suppliers: event 1 produces 2 for a deficit of 1 and
  // banks the spare unit; event 2 is served from that stock.
  const FirmNetwork net = FirmNetwork::from_links(3, {{1, 0}, {2, 0}});
  SimulationConfig cfg;
  cfg.events = 3;
  cfg.source_mode = SourceMode::firm_list;
  cfg.source_firms = {0};
  cfg.seed = 1;
  cfg.record_mode = RecordMode::full_records;
  const RunSummary summary = run_experiment(net, cfg);
  REQUIRE(summary.records.size() == 3);
  CHECK(summary.records[0].second == 4);  // 2 at source + 1 each primary
  CHECK(summary.records[1].second == 0);  // served from the banked unit
  CHECK(summary.records[2].second == 4);  // stock exhausted, cascade again
}

TEST_CASE("same seed reproduces the summary exactly") {
  const FirmNetwork net = generate_scale_free(400, 3, 10);
  SimulationConfig cfg;
  cfg.events = 5000;
  cfg.warmup_events = 1000;
  cfg.inventory_init = InventoryInit::uniform;
  cfg.seed = 99;
  const RunSummary a = run_experiment(net, cfg);
  const RunSummary b = run_experiment(net, cfg);
  CHECK(same_aggregates(a, b));
}

TEST_CASE("histogram total equals the configured event count") {
  const FirmNetwork net = generate_scale_free(200, 2, 4);
  SimulationConfig cfg;
  cfg.events = 3333;
  cfg.warmup_events = 100;
  cfg.seed = 12;
  const RunSummary summary = run_experiment(net, cfg);
  CHECK(summary.histogram.total() == 3333);
  CHECK(summary.events_recorded == 3333);
  CHECK(summary.moments.count == 3333);
}

TEST_CASE("industry mode draws sources from that industry only") {
  FirmNetwork net = generate_scale_free(300, 2, 8);
  net = assign_industries(net, {{"A", 0.3}, {"B", 0.7}}, 5);
  SimulationConfig cfg;
  cfg.events = 2000;
  cfg.source_mode = SourceMode::industry;
  cfg.source_industry = "A";
  cfg.seed = 77;
  cfg.record_mode = RecordMode::full_records;
  const RunSummary summary = run_experiment(net, cfg);
  REQUIRE(summary.records.size() == 2000);
  for (const auto& [source, size] : summary.records)
    CHECK(net.industry_code_of(source) == "A");
}

TEST_CASE("unknown or empty industries are configuration errors") {
  FirmNetwork net = generate_scale_free(50, 2, 8);
  net = assign_industries(net, {{"A", 1.0}, {"B", 0.0}}, 5);
  SimulationConfig cfg;
  cfg.events = 10;
  cfg.seed = 1;
  cfg.source_mode = SourceMode::industry;
  cfg.source_industry = "NOPE";
  CHECK_THROWS_AS(run_experiment(net, cfg), std::invalid_argument);
  cfg.source_industry = "B";  // exists, holds no firms
  CHECK_THROWS_AS(run_experiment(net, cfg), std::invalid_argument);
}

TEST_CASE("merge of replica aggregates is associative and order-free") {
  const FirmNetwork net = generate_scale_free(150, 3, 9);
  auto make = [&](std::uint64_t seed) {
    SimulationConfig cfg;
    cfg.events = 700;
    cfg.seed = seed;
    cfg.record_mode = RecordMode::full_records;
    return run_experiment(net, cfg);
  };
  const RunSummary a = make(1), b = make(2), c = make(3);

  RunSummary left = a;
  merge_aggregates(left, b);
  merge_aggregates(left, c);

  RunSummary bc = b;
  merge_aggregates(bc, c);
  RunSummary right = a;
  merge_aggregates(right, bc);

  CHECK(left.events_recorded == right.events_recorded);
  CHECK(left.histogram.exact == right.histogram.exact);
  CHECK(left.moments.sum == right.moments.sum);
  CHECK(left.moments.sum_squares == right.moments.sum_squares);
  CHECK(left.involvement == right.involvement);

  // Order independence of the counters (records keep their fold order).
  RunSummary swapped = c;
  merge_aggregates(swapped, b);
  merge_aggregates(swapped, a);
  CHECK(left.histogram.exact == swapped.histogram.exact);
  CHECK(left.moments.sum == swapped.moments.sum);
  CHECK(left.involvement == swapped.involvement);
}

TEST_CASE("aggregates-only and full-records agree for the same seed") {
  const FirmNetwork net = generate_scale_free(250, 3, 13);
  SimulationConfig cfg;
  cfg.events = 4000;
  cfg.seed = 31;
  cfg.record_mode = RecordMode::aggregates_only;
  const RunSummary agg = run_experiment(net, cfg);
  cfg.record_mode = RecordMode::full_records;
  const RunSummary full = run_experiment(net, cfg);

  CHECK(agg.histogram.exact == full.histogram.exact);
  CHECK(agg.moments.sum == full.moments.sum);
  REQUIRE(full.records.size() == 4000);
  SizeHistogram rebuilt;
  for (const auto& [source, size] : full.records) rebuilt.add(size);
  CHECK(rebuilt.exact == agg.histogram.exact);
}

TEST_CASE("replicas split the event budget and stay deterministic") {
  const FirmNetwork net = generate_scale_free(300, 3, 14);
  SimulationConfig cfg;
  cfg.events = 1001;
  cfg.warmup_events = 50;
  cfg.seed = 8;
  cfg.replicas = 3;
  const RunSummary a = run_experiment(net, cfg);
  const RunSummary b = run_experiment(net, cfg);
  CHECK(a.events_recorded == 1001);
  REQUIRE(a.replica_stats.size() == 3);
  CHECK(a.replica_stats[0].events == 334);
  CHECK(a.replica_stats[1].events == 334);
  CHECK(a.replica_stats[2].events == 333);
  CHECK(same_aggregates(a, b));
  CHECK(a.histogram.total() == 1001);
}

TEST_CASE("per-firm involvement counts are bounded by the event count") {
  const FirmNetwork net = generate_scale_free(200, 3, 15);
  SimulationConfig cfg;
  cfg.events = 500;
  cfg.seed = 4;
  const RunSummary summary = run_experiment(net, cfg);
  for (auto count : summary.involvement) CHECK(count <= 500);
  std::uint64_t total_involvements = 0;
  for (auto count : summary.involvement) total_involvements += count;
  CHECK(total_involvements >= 500);  // at least the source, every event
}

TEST_CASE("reset_per_event pins every event to the initial state") {
  const FirmNetwork net = FirmNetwork::from_links(3, {{1, 0}, {2, 0}});
  SimulationConfig cfg;
  cfg.events = 5;
  cfg.source_mode = SourceMode::firm_list;
  cfg.source_firms = {0};
  cfg.seed = 6;
  cfg.reset_per_event = true;
  cfg.record_mode = RecordMode::full_records;
  const RunSummary summary = run_experiment(net, cfg);
  for (const auto& [source, size] : summary.records) CHECK(size == 4);
}

TEST_CASE("run summary JSON and sidecars round-trip") {
  testutil::TempDir tmp;
  FirmNetwork net = generate_scale_free(120, 2, 16);
  net = assign_industries(net, {{"A", 0.5}, {"B", 0.5}}, 2);
  SimulationConfig cfg;
  cfg.events = 800;
  cfg.warmup_events = 10;
  cfg.seed = 21;
  const RunSummary summary = run_experiment(net, cfg);
  write_run_outputs(summary, net, tmp.file("run.json"));

  const LoadedRun loaded = read_summary_json(tmp.file("run.json"));
  CHECK(loaded.summary.events_recorded == summary.events_recorded);
  CHECK(loaded.summary.histogram.exact == summary.histogram.exact);
  CHECK(loaded.summary.moments.sum == summary.moments.sum);
  CHECK(loaded.summary.moments.sum_squares == summary.moments.sum_squares);
  CHECK(loaded.summary.config.seed == 21);
  CHECK(loaded.summary.config.source_mode == SourceMode::all_firms);

  const auto counts = read_firm_counts_csv(loaded.firm_sidecar_path);
  REQUIRE(counts.size() == net.firm_count());
  std::uint64_t total = 0;
  for (const auto& [firm, count] : counts) total += count;
  std::uint64_t expected = 0;
  for (auto c : summary.involvement) expected += c;
  CHECK(total == expected);
}
