#pragma once

// Repeated demand-event experiments.
//
// Each event draws a source firm uniformly from the configured pool (all
// firms, one industry, or an explicit list), runs one avalanche, and feeds
// the aggregates. Inventories persist across events unless reset_per_event
// asks for every event to start from the initial inventory snapshot.
// Warm-up events are simulated but never recorded.
//
// Replicas own independent inventories and disjoint RNG streams (replica r
// takes r long_jump()s of the seeded engine), and split the configured event
// total between them, so the merged summary always covers exactly
// config.events recorded events. Aggregates are integer-exact, which makes
// the merge associative and order-independent.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "socsim/dynamics.hpp"
#include "socsim/errors.hpp"
#include "socsim/firm_network.hpp"
#include "socsim/rng.hpp"

namespace socsim {

enum class SourceMode { all_firms, industry, firm_list };
enum class InventoryInit { zeros, uniform };
enum class RecordMode { aggregates_only, full_records };

struct SimulationConfig {
  std::uint64_t events = 0;         // recorded demand events, > 0
  std::uint64_t warmup_events = 0;  // discarded events per replica
  SourceMode source_mode = SourceMode::all_firms;
  std::string source_industry;     // used when source_mode == industry
  std::vector<FirmId> source_firms;  // used when source_mode == firm_list
  InventoryInit inventory_init = InventoryInit::zeros;
  std::uint64_t seed = 0;
  std::uint32_t replicas = 1;
  RecordMode record_mode = RecordMode::aggregates_only;
  bool reset_per_event = false;

  // Enough events for the inventory field to reach its stationary regime
  // before statistics start.
  static std::uint64_t default_warmup(const FirmNetwork& net) {
    return 10ull * net.firm_count();
  }
};

// Exact counts per integer avalanche size up to exact_limit; sizes above
// that land in power-of-two bins keyed by floor(log2(size)).
struct SizeHistogram {
  static constexpr Quantity exact_limit = 1'000'000;

  std::vector<std::uint64_t> exact;        // index = size
  std::map<int, std::uint64_t> overflow;   // key = floor(log2(size))

  void add(Quantity size) {
    if (size <= exact_limit) {
      if (static_cast<std::size_t>(size) >= exact.size())
        exact.resize(static_cast<std::size_t>(size) + 1, 0);
      ++exact[static_cast<std::size_t>(size)];
    } else {
      int bin = 63 - std::countl_zero(static_cast<std::uint64_t>(size));
      ++overflow[bin];
    }
  }

  void merge(const SizeHistogram& other) {
    if (other.exact.size() > exact.size()) exact.resize(other.exact.size(), 0);
    for (std::size_t i = 0; i < other.exact.size(); ++i)
      exact[i] += other.exact[i];
    for (auto [bin, count] : other.overflow) overflow[bin] += count;
  }

  std::uint64_t total() const {
    std::uint64_t n = 0;
    for (auto c : exact) n += c;
    for (auto [bin, c] : overflow) n += c;
    return n;
  }

  std::uint64_t zero_count() const { return exact.empty() ? 0 : exact[0]; }

  // (size, count) pairs with count > 0, ascending; overflow bins are
  // represented at their lower edge 2^bin.
  std::vector<std::pair<Quantity, std::uint64_t>> nonzero_counts() const {
    std::vector<std::pair<Quantity, std::uint64_t>> out;
    for (std::size_t s = 0; s < exact.size(); ++s)
      if (exact[s] > 0) out.emplace_back(static_cast<Quantity>(s), exact[s]);
    for (auto [bin, c] : overflow)
      out.emplace_back(Quantity{1} << bin, c);
    return out;
  }
};

// Integer-exact running moments of recorded avalanche sizes.
struct SizeMoments {
  std::uint64_t count = 0;
  std::uint64_t sum = 0;
  unsigned __int128 sum_squares = 0;
  Quantity min = 0;
  Quantity max = 0;

  void add(Quantity size) {
    if (count == 0) {
      min = max = size;
    } else {
      if (size < min) min = size;
      if (size > max) max = size;
    }
    ++count;
    sum += static_cast<std::uint64_t>(size);
    sum_squares += static_cast<unsigned __int128>(size) *
                   static_cast<unsigned __int128>(size);
  }

  void merge(const SizeMoments& other) {
    if (other.count == 0) return;
    if (count == 0) {
      *this = other;
      return;
    }
    if (other.min < min) min = other.min;
    if (other.max > max) max = other.max;
    count += other.count;
    sum += other.sum;
    sum_squares += other.sum_squares;
  }

  double mean() const {
    return count ? static_cast<double>(sum) / static_cast<double>(count) : 0.0;
  }

  // Population standard deviation (divide by n).
  double population_std() const {
    if (count == 0) return 0.0;
    const long double n = static_cast<long double>(count);
    const long double m = static_cast<long double>(sum) / n;
    const long double msq = static_cast<long double>(sum_squares) / n;
    long double var = msq - m * m;
    if (var < 0) var = 0;
    return static_cast<double>(std::sqrt(var));
  }

  // Moments of the subset with size > 0: zeros contribute nothing to the
  // sums, so dropping them is exact integer algebra. min stays a lower
  // bound rather than the exact nonzero minimum.
  SizeMoments without_zeros(std::uint64_t zero_count) const {
    SizeMoments out = *this;
    out.count -= zero_count;
    return out;
  }
};

struct ReplicaStats {
  std::uint64_t events = 0;
  SizeMoments moments;
};

struct RunSummary {
  SimulationConfig config;  // resolved echo
  std::uint64_t network_firms = 0;
  std::uint64_t network_links = 0;
  std::uint64_t events_recorded = 0;
  SizeHistogram histogram;
  SizeMoments moments;
  std::vector<std::uint64_t> involvement;  // per firm, recorded events only
  std::vector<ReplicaStats> replica_stats;
  // full_records mode only: (source, size) per recorded event.
  std::vector<std::pair<FirmId, Quantity>> records;
  std::string rng_algorithm;
  std::string rng_version;
};

inline void init_inventories(const FirmNetwork& net, InventoryInit mode,
                             Xoshiro256StarStar& rng, InventoryState& state) {
  state.z.assign(net.firm_count(), 0);
  if (mode == InventoryInit::uniform) {
    for (FirmId i = 0; i < net.firm_count(); ++i) {
      const Quantity n = net.supplier_count(i);
      if (n > 0)
        state.z[i] = static_cast<Quantity>(
            uniform_index(rng, static_cast<std::uint64_t>(n) + 1));
    }
  }
}

inline InventoryState init_inventories(const FirmNetwork& net,
                                       InventoryInit mode,
                                       std::uint64_t seed) {
  Xoshiro256StarStar rng(seed);
  InventoryState state;
  init_inventories(net, mode, rng, state);
  return state;
}

namespace detail {

inline std::vector<FirmId> resolve_source_pool(const FirmNetwork& net,
                                               const SimulationConfig& cfg) {
  std::vector<FirmId> pool;
  switch (cfg.source_mode) {
    case SourceMode::all_firms:
      pool.resize(net.firm_count());
      for (FirmId i = 0; i < net.firm_count(); ++i) pool[i] = i;
      break;
    case SourceMode::industry: {
      auto idx = net.taxonomy().index_of(cfg.source_industry);
      if (!idx)
        throw std::invalid_argument("unknown source industry '" +
                                    cfg.source_industry + "'");
      for (FirmId i = 0; i < net.firm_count(); ++i)
        if (net.industry_index_of(i) == *idx) pool.push_back(i);
      if (pool.empty())
        throw std::invalid_argument("industry '" + cfg.source_industry +
                                    "' contains no firms");
      break;
    }
    case SourceMode::firm_list:
      pool = cfg.source_firms;
      for (FirmId f : pool)
        if (f >= net.firm_count())
          throw std::invalid_argument("source firm id out of range");
      if (pool.empty())
        throw std::invalid_argument("source firm list is empty");
      break;
  }
  return pool;
}

struct ReplicaResult {
  std::uint64_t events = 0;
  SizeHistogram histogram;
  SizeMoments moments;
  std::vector<std::uint64_t> involvement;
  std::vector<std::pair<FirmId, Quantity>> records;
};

inline void run_replica(const FirmNetwork& net, const SimulationConfig& cfg,
                        const std::vector<FirmId>& pool,
                        const InventoryState* initial, std::uint32_t replica,
                        std::uint64_t replica_events, ReplicaResult& out) {
  Xoshiro256StarStar rng(cfg.seed);
  for (std::uint32_t j = 0; j < replica; ++j) rng.long_jump();

  InventoryState state;
  if (initial)
    state = *initial;
  else
    init_inventories(net, cfg.inventory_init, rng, state);
  const InventoryState snapshot = cfg.reset_per_event ? state
                                                      : InventoryState{};

  PropagationScratch scratch;
  scratch.bind(net);
  AvalancheRecord record;
  out.events = replica_events;
  out.involvement.assign(net.firm_count(), 0);
  if (cfg.record_mode == RecordMode::full_records)
    out.records.reserve(replica_events);

  const std::uint64_t total = cfg.warmup_events + replica_events;
  for (std::uint64_t e = 0; e < total; ++e) {
    const FirmId source =
        pool[uniform_index(rng, static_cast<std::uint64_t>(pool.size()))];
    propagate_avalanche(net, state, source, scratch, record);
    if (e >= cfg.warmup_events) {
      out.histogram.add(record.total_size);
      out.moments.add(record.total_size);
      for (FirmId f : record.involved) ++out.involvement[f];
      if (cfg.record_mode == RecordMode::full_records)
        out.records.emplace_back(source, record.total_size);
    }
    if (cfg.reset_per_event)
      for (FirmId f : record.involved) state.z[f] = snapshot.z[f];
  }
}

}  // namespace detail

// Merges the aggregate fields of `other` into `dst` (histogram, moments,
// involvement, replica stats, records). Exact integer arithmetic: the fold
// is associative and order-independent.
inline void merge_aggregates(RunSummary& dst, const RunSummary& other) {
  dst.events_recorded += other.events_recorded;
  dst.histogram.merge(other.histogram);
  dst.moments.merge(other.moments);
  if (dst.involvement.size() < other.involvement.size())
    dst.involvement.resize(other.involvement.size(), 0);
  for (std::size_t i = 0; i < other.involvement.size(); ++i)
    dst.involvement[i] += other.involvement[i];
  dst.replica_stats.insert(dst.replica_stats.end(),
                           other.replica_stats.begin(),
                           other.replica_stats.end());
  dst.records.insert(dst.records.end(), other.records.begin(),
                     other.records.end());
}

inline RunSummary run_experiment(const FirmNetwork& net,
                                 const SimulationConfig& cfg,
                                 const InventoryState* initial = nullptr) {
  if (cfg.events == 0)
    throw std::invalid_argument("config.events must be positive");
  if (cfg.replicas == 0)
    throw std::invalid_argument("config.replicas must be positive");
  if (initial) initial->validate(net);
  const auto pool = detail::resolve_source_pool(net, cfg);

  // Replica r takes events/R rounded, the first (events mod R) one extra.
  const std::uint64_t base = cfg.events / cfg.replicas;
  const std::uint64_t extra = cfg.events % cfg.replicas;

  std::vector<detail::ReplicaResult> results(cfg.replicas);
  if (cfg.replicas == 1) {
    detail::run_replica(net, cfg, pool, initial, 0, cfg.events, results[0]);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(cfg.replicas);
    for (std::uint32_t r = 0; r < cfg.replicas; ++r) {
      const std::uint64_t n = base + (r < extra ? 1 : 0);
      workers.emplace_back(detail::run_replica, std::cref(net),
                           std::cref(cfg), std::cref(pool), initial, r, n,
                           std::ref(results[r]));
    }
    for (auto& w : workers) w.join();
  }

  RunSummary summary;
  summary.config = cfg;
  summary.network_firms = net.firm_count();
  summary.network_links = net.link_count();
  summary.involvement.assign(net.firm_count(), 0);
  summary.rng_algorithm = Xoshiro256StarStar::algorithm_name;
  summary.rng_version = Xoshiro256StarStar::algorithm_version;
  for (auto& r : results) {
    RunSummary part;
    part.events_recorded = r.events;
    part.histogram = std::move(r.histogram);
    part.moments = r.moments;
    part.involvement = std::move(r.involvement);
    part.records = std::move(r.records);
    part.replica_stats.push_back({r.events, r.moments});
    merge_aggregates(summary, part);
  }
  return summary;
}

// Per-taxonomy-code involvement totals (sum over the code's firms of the
// number of recorded events each was involved in). UNK included.
inline std::vector<std::pair<std::string, std::uint64_t>> industry_involvement(
    const RunSummary& summary, const FirmNetwork& net) {
  std::vector<std::uint64_t> totals(net.taxonomy().size(), 0);
  for (FirmId i = 0; i < net.firm_count() && i < summary.involvement.size();
       ++i)
    totals[net.industry_index_of(i)] += summary.involvement[i];
  std::vector<std::pair<std::string, std::uint64_t>> out;
  out.reserve(totals.size());
  for (std::size_t k = 0; k < totals.size(); ++k)
    out.emplace_back(net.taxonomy().codes[k], totals[k]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace socsim
