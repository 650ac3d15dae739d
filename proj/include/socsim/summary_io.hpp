#pragma once

// RunSummary persistence: a JSON document (metadata, resolved config echo,
// histogram, moments) plus CSV sidecars next to it:
//   <stem>.hist.csv        "size,count"
//   <stem>.firms.csv       "firm_id,involved_count"
//   <stem>.industries.csv  "industry,involved_count"
// Every file is byte-reproducible for a given seed and config.

#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "socsim/detail/text.hpp"
#include "socsim/errors.hpp"
#include "socsim/firm_network.hpp"
#include "socsim/simulation.hpp"
#include "socsim/version.hpp"

namespace socsim {

namespace detail {

inline std::string u128_to_string(unsigned __int128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v > 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return {out.rbegin(), out.rend()};
}

inline unsigned __int128 u128_from_string(const std::string& s) {
  unsigned __int128 v = 0;
  for (char c : s) {
    if (c < '0' || c > '9')
      throw ParseError("invalid unsigned integer '" + s + "'");
    v = v * 10 + static_cast<unsigned>(c - '0');
  }
  return v;
}

inline std::string source_mode_name(SourceMode mode) {
  switch (mode) {
    case SourceMode::all_firms: return "all-firms";
    case SourceMode::industry: return "industry";
    default: return "firm-list";
  }
}

inline SourceMode source_mode_from(const std::string& name) {
  if (name == "all-firms") return SourceMode::all_firms;
  if (name == "industry") return SourceMode::industry;
  if (name == "firm-list") return SourceMode::firm_list;
  throw ParseError("unknown source mode '" + name + "'");
}

struct SidecarNames {
  std::string histogram, firms, industries;
};

inline SidecarNames sidecar_names(const std::filesystem::path& json_path) {
  std::filesystem::path stem = json_path;
  stem.replace_extension();
  const std::string base = stem.filename().string();
  return {base + ".hist.csv", base + ".firms.csv", base + ".industries.csv"};
}

}  // namespace detail

inline nlohmann::json summary_to_json(const RunSummary& summary,
                                      const FirmNetwork& net,
                                      const detail::SidecarNames& sidecars) {
  nlohmann::json j;
  j["schema_version"] = summary_schema_version;
  j["kind"] = "run_summary";
  j["rng"] = {{"algorithm", summary.rng_algorithm},
              {"version", summary.rng_version}};

  nlohmann::json cfg;
  const auto& c = summary.config;
  cfg["events"] = c.events;
  cfg["warmup_events"] = c.warmup_events;
  cfg["source_mode"] = detail::source_mode_name(c.source_mode);
  if (c.source_mode == SourceMode::industry)
    cfg["source_industry"] = c.source_industry;
  if (c.source_mode == SourceMode::firm_list) {
    auto firms = nlohmann::json::array();
    for (FirmId f : c.source_firms) firms.push_back(net.label_of(f));
    cfg["source_firms"] = std::move(firms);
  }
  cfg["inventory_init"] =
      c.inventory_init == InventoryInit::zeros ? "zeros" : "uniform";
  cfg["seed"] = c.seed;
  cfg["replicas"] = c.replicas;
  cfg["record_mode"] = c.record_mode == RecordMode::aggregates_only
                           ? "aggregates-only"
                           : "full-records";
  cfg["reset_per_event"] = c.reset_per_event;
  j["config"] = std::move(cfg);

  j["network"] = {{"firms", summary.network_firms},
                  {"links", summary.network_links}};
  j["events_recorded"] = summary.events_recorded;

  nlohmann::json hist;
  hist["exact_limit"] = SizeHistogram::exact_limit;
  auto counts = nlohmann::json::array();
  for (std::size_t s = 0; s < summary.histogram.exact.size(); ++s)
    if (summary.histogram.exact[s] > 0)
      counts.push_back({s, summary.histogram.exact[s]});
  hist["counts"] = std::move(counts);
  auto bins = nlohmann::json::array();
  for (auto [bin, count] : summary.histogram.overflow)
    bins.push_back({bin, count});
  hist["overflow_log2_bins"] = std::move(bins);
  j["histogram"] = std::move(hist);

  const auto& m = summary.moments;
  j["size_moments"] = {{"count", m.count},
                       {"sum", m.sum},
                       {"sum_squares", detail::u128_to_string(m.sum_squares)},
                       {"min", m.min},
                       {"max", m.max},
                       {"mean", m.mean()},
                       {"std", m.population_std()}};

  auto reps = nlohmann::json::array();
  for (const auto& r : summary.replica_stats)
    reps.push_back({{"events", r.events},
                    {"mean", r.moments.mean()},
                    {"std", r.moments.population_std()},
                    {"max", r.moments.max}});
  j["replica_stats"] = std::move(reps);

  if (summary.config.record_mode == RecordMode::full_records) {
    auto records = nlohmann::json::array();
    for (const auto& [source, size] : summary.records)
      records.push_back({net.label_of(source), size});
    j["records"] = std::move(records);
  }

  j["sidecars"] = {{"histogram", sidecars.histogram},
                   {"firm_involvement", sidecars.firms},
                   {"industry_involvement", sidecars.industries}};
  return j;
}

// Writes the JSON summary and its three CSV sidecars.
inline void write_run_outputs(const RunSummary& summary,
                              const FirmNetwork& net,
                              const std::string& json_path) {
  const std::filesystem::path path(json_path);
  const auto sidecars = detail::sidecar_names(path);
  const auto dir = path.parent_path();

  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + json_path + "'");
    out << summary_to_json(summary, net, sidecars).dump(2) << '\n';
    if (!out) throw DataError("write failed on '" + json_path + "'");
  }
  {
    std::ofstream out(dir / sidecars.histogram, std::ios::binary);
    if (!out)
      throw DataError("cannot write '" + sidecars.histogram + "'");
    out << "size,count\n";
    for (auto [size, count] : summary.histogram.nonzero_counts())
      out << size << ',' << count << '\n';
  }
  {
    std::ofstream out(dir / sidecars.firms, std::ios::binary);
    if (!out) throw DataError("cannot write '" + sidecars.firms + "'");
    out << "firm_id,involved_count\n";
    for (FirmId i = 0; i < net.firm_count(); ++i)
      out << net.label_of(i) << ',' << summary.involvement[i] << '\n';
  }
  {
    std::ofstream out(dir / sidecars.industries, std::ios::binary);
    if (!out) throw DataError("cannot write '" + sidecars.industries + "'");
    out << "industry,involved_count\n";
    for (const auto& [code, count] : industry_involvement(summary, net))
      out << code << ',' << count << '\n';
  }
}

struct LoadedRun {
  RunSummary summary;  // involvement left empty; read the firms sidecar
  std::string firm_sidecar_path;
  std::string histogram_sidecar_path;
};

inline LoadedRun read_summary_json(const std::string& json_path) {
  std::ifstream in(json_path);
  if (!in) throw ParseError("cannot open '" + json_path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("'" + json_path + "': " + e.what());
  }

  LoadedRun run;
  try {
    if (j.at("schema_version").get<int>() != summary_schema_version)
      throw ParseError("'" + json_path + "': unsupported schema_version");
    auto& s = run.summary;
    const auto& cfg = j.at("config");
    s.config.events = cfg.at("events").get<std::uint64_t>();
    s.config.warmup_events = cfg.at("warmup_events").get<std::uint64_t>();
    s.config.source_mode =
        detail::source_mode_from(cfg.at("source_mode").get<std::string>());
    if (cfg.contains("source_industry"))
      s.config.source_industry = cfg.at("source_industry").get<std::string>();
    s.config.inventory_init =
        cfg.at("inventory_init").get<std::string>() == "zeros"
            ? InventoryInit::zeros
            : InventoryInit::uniform;
    s.config.seed = cfg.at("seed").get<std::uint64_t>();
    s.config.replicas = cfg.at("replicas").get<std::uint32_t>();
    s.config.record_mode =
        cfg.at("record_mode").get<std::string>() == "aggregates-only"
            ? RecordMode::aggregates_only
            : RecordMode::full_records;
    s.config.reset_per_event = cfg.at("reset_per_event").get<bool>();

    s.network_firms = j.at("network").at("firms").get<std::uint64_t>();
    s.network_links = j.at("network").at("links").get<std::uint64_t>();
    s.events_recorded = j.at("events_recorded").get<std::uint64_t>();

    for (const auto& pair : j.at("histogram").at("counts")) {
      const auto size = pair.at(0).get<Quantity>();
      const auto count = pair.at(1).get<std::uint64_t>();
      if (static_cast<std::size_t>(size) >= s.histogram.exact.size())
        s.histogram.exact.resize(static_cast<std::size_t>(size) + 1, 0);
      s.histogram.exact[static_cast<std::size_t>(size)] = count;
    }
    for (const auto& pair : j.at("histogram").at("overflow_log2_bins"))
      s.histogram.overflow[pair.at(0).get<int>()] =
          pair.at(1).get<std::uint64_t>();

    const auto& m = j.at("size_moments");
    s.moments.count = m.at("count").get<std::uint64_t>();
    s.moments.sum = m.at("sum").get<std::uint64_t>();
    s.moments.sum_squares =
        detail::u128_from_string(m.at("sum_squares").get<std::string>());
    s.moments.min = m.at("min").get<Quantity>();
    s.moments.max = m.at("max").get<Quantity>();

    s.rng_algorithm = j.at("rng").at("algorithm").get<std::string>();
    s.rng_version = j.at("rng").at("version").get<std::string>();

    const auto dir = std::filesystem::path(json_path).parent_path();
    run.firm_sidecar_path =
        (dir / j.at("sidecars").at("firm_involvement").get<std::string>())
            .string();
    run.histogram_sidecar_path =
        (dir / j.at("sidecars").at("histogram").get<std::string>()).string();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("'" + json_path + "': " + e.what());
  }
  return run;
}

// Reads a "firm_id,involved_count" sidecar.
inline std::vector<std::pair<std::string, std::uint64_t>> read_firm_counts_csv(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::vector<std::pair<std::string, std::uint64_t>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto content = detail::trim(line);
    if (content.empty()) continue;
    if (line_no == 1) {
      if (content != "firm_id,involved_count")
        throw ParseError(path + ":1: unexpected header '" +
                         std::string(content) + "'");
      continue;
    }
    auto cells = detail::split_on(content, ',');
    std::uint64_t count = 0;
    if (cells.size() != 2 || !detail::parse_u64(detail::trim(cells[1]), count))
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected 'firm_id,involved_count'");
    out.emplace_back(std::string(detail::trim(cells[0])), count);
  }
  return out;
}

// Reads a "FIRM_ID<TAB>INDUSTRY_CODE" label file into a lookup map.
inline std::unordered_map<std::string, std::string> read_label_map(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open label file '" + path + "'");
  std::unordered_map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto content = detail::trim(line);
    if (content.empty() || content.front() == '#') continue;
    auto fields = detail::split_fields(content);
    if (fields.size() != 2)
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected 'FIRM_ID<TAB>INDUSTRY_CODE'");
    out[std::string(fields[0])] = std::string(fields[1]);
  }
  return out;
}

}  // namespace socsim
