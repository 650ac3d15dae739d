// socsim command-line frontend.
//
// Single binary, one subcommand per pipeline stage:
//   gen-random    sample a directed Erdos-Renyi-style firm network
//   gen-sf        grow a scale-free firm network
//   degree-dist   degree CCDF of a stored network
//   simulate      run demand-event experiments, write JSON + CSV sidecars
//   analyze       turn run summaries into CCDF / tail-exponent / industry
//                 tables
//   leontief      invert an input-output table, emit sector multipliers
//   compare       correlate IO-table multipliers with simulated means
//
// Every randomized subcommand takes an explicit --seed; reruns with the same
// arguments produce byte-identical outputs. Exit codes: 0 success, 1 usage
// error, 2 data error.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "socsim/socsim.hpp"

namespace {

using namespace socsim;

// --industries accepts either a count ("19": codes I01..I19, equal weights)
// or an explicit "CODE:WEIGHT,CODE:WEIGHT,..." list.
std::vector<std::pair<std::string, double>> parse_industry_spec(
    const std::string& spec) {
  std::vector<std::pair<std::string, double>> weights;
  std::uint64_t count = 0;
  if (detail::parse_u64(spec, count)) {
    if (count == 0 || count > 9999)
      throw DataError("--industries count must be in [1, 9999]");
    char buf[16];
    for (std::uint64_t i = 1; i <= count; ++i) {
      std::snprintf(buf, sizeof(buf), "I%02llu",
                    static_cast<unsigned long long>(i));
      weights.emplace_back(buf, 1.0 / static_cast<double>(count));
    }
    return weights;
  }
  for (auto part : detail::split_on(spec, ',')) {
    auto item = detail::trim(part);
    auto colon = item.rfind(':');
    double w = 0.0;
    if (colon == std::string_view::npos ||
        !detail::parse_double(detail::trim(item.substr(colon + 1)), w))
      throw DataError("--industries expects a count or CODE:WEIGHT list");
    weights.emplace_back(std::string(detail::trim(item.substr(0, colon))), w);
  }
  return weights;
}

void write_generated(const FirmNetwork& net, const std::string& out,
                     const std::string& labels_out) {
  write_edge_list(net, out);
  if (!labels_out.empty()) write_labels(net, labels_out);
}

DegreeKind parse_kind(const std::string& kind) {
  if (kind == "in") return DegreeKind::incoming;
  if (kind == "out") return DegreeKind::outgoing;
  if (kind == "total") return DegreeKind::total;
  throw DataError("--kind must be in, out, or total");
}

std::vector<FirmId> parse_firm_list(const FirmNetwork& net,
                                    const std::string& csv,
                                    const std::string& file) {
  std::vector<std::string> tokens;
  if (!csv.empty())
    for (auto t : detail::split_on(csv, ','))
      tokens.emplace_back(detail::trim(t));
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw ParseError("cannot open firm list '" + file + "'");
    std::string line;
    while (std::getline(in, line)) {
      auto content = detail::trim(line);
      if (content.empty() || content.front() == '#') continue;
      tokens.emplace_back(content);
    }
  }
  std::vector<FirmId> firms;
  firms.reserve(tokens.size());
  for (const auto& token : tokens) {
    auto id = net.find_label(token);
    if (!id) throw DataError("unknown firm id '" + token + "'");
    firms.push_back(*id);
  }
  return firms;
}

// Expands "key = value" lines from simulate's --config file into
// "--key=value" tokens, skipping keys already present on the command line,
// so explicit flags always win. Keys must name real simulate options.
std::vector<std::string> expand_simulate_config(std::vector<std::string> args,
                                                const CLI::App* simulate) {
  auto sub = std::find(args.begin(), args.end(), "simulate");
  if (sub == args.end()) return args;
  std::string path;
  for (auto it = sub; it != args.end(); ++it) {
    if (*it == "--config" && it + 1 != args.end())
      path = *(it + 1);
    else if (it->rfind("--config=", 0) == 0)
      path = it->substr(9);
  }
  if (path.empty()) return args;

  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file '" + path + "'");
  auto given = [&](const std::string& flag) {
    for (const auto& arg : args)
      if (arg == flag || arg.rfind(flag + "=", 0) == 0) return true;
    return false;
  };
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto content = detail::trim(line);
    if (content.empty() || content.front() == '#') continue;
    const auto eq = content.find('=');
    if (eq == std::string_view::npos)
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected 'key = value'");
    const std::string key(detail::trim(content.substr(0, eq)));
    const std::string value(detail::trim(content.substr(eq + 1)));
    if (key.empty() || key == "config")
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": invalid key");
    const std::string flag = "--" + key;
    if (const_cast<CLI::App*>(simulate)->get_option_no_throw(flag) == nullptr)
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": unknown option '" + key + "'");
    if (!given(flag)) args.push_back(flag + "=" + value);
  }
  return args;
}

// Pools the avalanche-size histograms of several runs.
SizeHistogram merged_histogram(const std::vector<LoadedRun>& runs) {
  SizeHistogram hist;
  for (const auto& run : runs) hist.merge(run.summary.histogram);
  return hist;
}

std::vector<std::pair<std::string, double>> read_means_csv(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open means table '" + path + "'");
  std::vector<std::pair<std::string, double>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto content = detail::trim(line);
    if (content.empty()) continue;
    if (line_no == 1) {
      if (!content.starts_with("industry,mean"))
        throw ParseError(path + ":1: expected 'industry,mean,...' header");
      continue;
    }
    auto cells = detail::split_on(content, ',');
    double mean = 0.0;
    if (cells.size() < 2 || !detail::parse_double(detail::trim(cells[1]), mean))
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected 'industry,mean,...'");
    out.emplace_back(std::string(detail::trim(cells[0])), mean);
  }
  if (out.empty()) throw DataError("'" + path + "' contains no rows");
  return out;
}

int run_gen_random(FirmId nodes, double p, std::uint64_t seed,
                   const std::string& out, const std::string& labels_out,
                   const std::string& industries) {
  std::uint64_t sm = seed;
  const std::uint64_t net_seed = splitmix64_next(sm);
  const std::uint64_t label_seed = splitmix64_next(sm);
  FirmNetwork net = generate_random_directed(nodes, p, net_seed);
  if (!industries.empty())
    net = assign_industries(net, parse_industry_spec(industries), label_seed);
  write_generated(net, out, labels_out);
  std::cout << "firms = " << net.firm_count()
            << "\nlinks = " << net.link_count() << "\n";
  return 0;
}

int run_gen_sf(FirmId nodes, std::uint32_t m, std::uint64_t seed,
               const std::string& out, const std::string& labels_out,
               const std::string& industries) {
  std::uint64_t sm = seed;
  const std::uint64_t net_seed = splitmix64_next(sm);
  const std::uint64_t label_seed = splitmix64_next(sm);
  FirmNetwork net = generate_scale_free(nodes, m, net_seed);
  if (!industries.empty())
    net = assign_industries(net, parse_industry_spec(industries), label_seed);
  write_generated(net, out, labels_out);
  std::cout << "firms = " << net.firm_count()
            << "\nlinks = " << net.link_count() << "\n";
  return 0;
}

int run_degree_dist(const std::string& net_path, const std::string& kind,
                    const std::string& out) {
  const FirmNetwork net = load_edge_list(net_path);
  write_degree_ccdf_csv(degree_ccdf(net, parse_kind(kind)), out);
  return 0;
}

int run_simulate(const std::string& net_path, const std::string& labels_path,
                 SimulationConfig cfg, bool warmup_given,
                 const std::string& source_mode, const std::string& industry,
                 const std::string& firms_csv, const std::string& firms_file,
                 const std::string& init, const std::string& record,
                 const std::string& out) {
  const FirmNetwork net = load_edge_list(net_path, labels_path);
  if (!warmup_given) cfg.warmup_events = SimulationConfig::default_warmup(net);

  if (source_mode == "all") {
    cfg.source_mode = SourceMode::all_firms;
  } else if (source_mode == "industry") {
    cfg.source_mode = SourceMode::industry;
    if (industry.empty())
      throw DataError("--source-mode industry requires --industry CODE");
    cfg.source_industry = industry;
  } else if (source_mode == "list") {
    cfg.source_mode = SourceMode::firm_list;
    cfg.source_firms = parse_firm_list(net, firms_csv, firms_file);
  } else {
    throw DataError("--source-mode must be all, industry, or list");
  }

  if (init == "zeros")
    cfg.inventory_init = InventoryInit::zeros;
  else if (init == "uniform")
    cfg.inventory_init = InventoryInit::uniform;
  else
    throw DataError("--init must be zeros or uniform");

  if (record == "aggregates")
    cfg.record_mode = RecordMode::aggregates_only;
  else if (record == "full")
    cfg.record_mode = RecordMode::full_records;
  else
    throw DataError("--record must be aggregates or full");

  const RunSummary summary = run_experiment(net, cfg);
  write_run_outputs(summary, net, out);
  std::cout << "events = " << summary.events_recorded
            << "\nmean_size = " << detail::format_g17(summary.moments.mean())
            << "\nmax_size = " << summary.moments.max << "\n";
  return 0;
}

int run_analyze(const std::vector<std::string>& run_paths,
                const std::string& ccdf_out, bool include_zeros,
                std::optional<double> hill_xmin, const std::string& means_out,
                bool exclude_zero_means, const std::string& involvement_out,
                const std::string& labels_path) {
  if (ccdf_out.empty() && !hill_xmin && means_out.empty() &&
      involvement_out.empty())
    throw DataError(
        "analyze: nothing to do (give --ccdf-out, --hill-xmin, --means-out, "
        "or --involvement-out)");

  std::vector<LoadedRun> runs;
  runs.reserve(run_paths.size());
  for (const auto& path : run_paths) runs.push_back(read_summary_json(path));

  if (!ccdf_out.empty()) {
    const auto hist = merged_histogram(runs);
    write_size_ccdf_csv(
        ccdf_from_counts(hist.nonzero_counts(), !include_zeros), ccdf_out);
  }
  if (hill_xmin) {
    const auto hist = merged_histogram(runs);
    const double alpha = hill_mle_from_counts(hist.nonzero_counts(),
                                              *hill_xmin);
    std::cout << "hill_alpha = " << detail::format_g17(alpha) << "\n";
  }
  if (!means_out.empty()) {
    std::vector<std::pair<std::string, const RunSummary*>> keyed;
    keyed.reserve(runs.size());
    for (const auto& run : runs) {
      if (run.summary.config.source_mode != SourceMode::industry)
        throw DataError(
            "--means-out needs runs recorded with --source-mode industry");
      keyed.emplace_back(run.summary.config.source_industry, &run.summary);
    }
    write_industry_means_csv(industry_summary(keyed, !exclude_zero_means),
                             means_out);
  }
  if (!involvement_out.empty()) {
    if (runs.size() != 1)
      throw DataError("--involvement-out expects exactly one --run");
    if (labels_path.empty())
      throw DataError("--involvement-out requires --labels");
    const auto counts = read_firm_counts_csv(runs[0].firm_sidecar_path);
    const auto labels = read_label_map(labels_path);
    write_involvement_csv(
        involvement_expectation_from_counts(counts, labels,
                                            runs[0].summary.events_recorded),
        involvement_out);
  }
  return 0;
}

int run_leontief(const std::string& io_path, const std::string& inverse_out,
                 const std::string& multipliers_out,
                 const std::string& reduction) {
  const IOTable table = load_io_table(io_path);
  const double rho = spectral_radius(table.coefficients);
  const Eigen::MatrixXd inverse = leontief_inverse(table);

  if (!inverse_out.empty()) {
    std::ofstream out(inverse_out, std::ios::binary);
    if (!out) throw DataError("cannot write '" + inverse_out + "'");
    for (std::size_t j = 0; j < table.sectors.size(); ++j)
      out << (j ? "," : "") << table.sectors[j];
    out << '\n';
    for (Eigen::Index i = 0; i < inverse.rows(); ++i) {
      for (Eigen::Index j = 0; j < inverse.cols(); ++j)
        out << (j ? "," : "") << detail::format_g17(inverse(i, j));
      out << '\n';
    }
  }
  if (!multipliers_out.empty()) {
    const auto mult = reduction == "row" ? row_multipliers(inverse)
                                         : column_multipliers(inverse);
    std::ofstream out(multipliers_out, std::ios::binary);
    if (!out) throw DataError("cannot write '" + multipliers_out + "'");
    out << "sector,multiplier\n";
    for (std::size_t j = 0; j < table.sectors.size(); ++j)
      out << table.sectors[j] << ',' << detail::format_g17(mult[j]) << '\n';
  }
  std::cout << "sectors = " << table.sectors.size()
            << "\nspectral_radius = " << detail::format_g17(rho) << "\n";
  return 0;
}

int run_compare(const std::string& io_path, const std::string& map_path,
                const std::string& means_path, const std::string& reduction,
                const std::string& pairs_out) {
  const IOTable table = load_io_table(io_path);
  const Eigen::MatrixXd inverse = leontief_inverse(table);
  const auto mult = reduction == "row" ? row_multipliers(inverse)
                                       : column_multipliers(inverse);
  const auto sector_map = load_sector_map(map_path);
  const auto means = read_means_csv(means_path);

  std::vector<double> x, y;
  std::vector<std::pair<std::string, std::string>> matched;
  for (std::size_t j = 0; j < table.sectors.size(); ++j) {
    const std::string* industry = nullptr;
    for (const auto& [sector, code] : sector_map)
      if (sector == table.sectors[j]) {
        industry = &code;
        break;
      }
    if (!industry) {
      std::cerr << "warning: sector '" << table.sectors[j]
                << "' has no industry mapping, skipped\n";
      continue;
    }
    const double* mean = nullptr;
    for (const auto& [code, value] : means)
      if (code == *industry) {
        mean = &value;
        break;
      }
    if (!mean) {
      std::cerr << "warning: industry '" << *industry
                << "' missing from means table, skipped\n";
      continue;
    }
    x.push_back(mult[j]);
    y.push_back(*mean);
    matched.emplace_back(table.sectors[j], *industry);
  }
  if (x.size() < 2)
    throw DataError("compare: fewer than 2 matched sector/industry pairs");

  if (!pairs_out.empty()) {
    std::ofstream out(pairs_out, std::ios::binary);
    if (!out) throw DataError("cannot write '" + pairs_out + "'");
    out << "sector,industry,multiplier,mean\n";
    for (std::size_t i = 0; i < matched.size(); ++i)
      out << matched[i].first << ',' << matched[i].second << ','
          << detail::format_g17(x[i]) << ',' << detail::format_g17(y[i])
          << '\n';
  }
  std::cout << "pairs = " << x.size() << "\npearson_r = "
            << detail::format_g17(pearson(x, y)) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Avalanche simulator for directed supplier-client firm "
               "networks",
               "socsim"};
  app.set_version_flag("--version", socsim::version_string);
  app.require_subcommand(1);

  // gen-random
  FirmId gr_nodes = 0;
  double gr_p = 0.0;
  std::uint64_t gr_seed = 0;
  std::string gr_out, gr_labels_out, gr_industries;
  auto* gen_random = app.add_subcommand(
      "gen-random", "Sample a constant-probability directed network");
  gen_random->add_option("--nodes", gr_nodes, "Firm count (>= 2)")
      ->required();
  gen_random->add_option("--p", gr_p, "Pair connection probability in [0,1]")
      ->required();
  gen_random->add_option("--seed", gr_seed, "RNG seed")->required();
  gen_random->add_option("--out", gr_out, "Edge-list output path")
      ->required();
  gen_random->add_option("--labels-out", gr_labels_out,
                         "Label-file output path");
  gen_random->add_option(
      "--industries", gr_industries,
      "Industry spec: a count (equal weights) or CODE:WEIGHT,...");

  // gen-sf
  FirmId sf_nodes = 0;
  std::uint32_t sf_m = 0;
  std::uint64_t sf_seed = 0;
  std::string sf_out, sf_labels_out, sf_industries;
  auto* gen_sf = app.add_subcommand(
      "gen-sf", "Grow a preferential-attachment scale-free network");
  gen_sf->add_option("--nodes", sf_nodes, "Firm count (> m)")->required();
  gen_sf->add_option("--m", sf_m, "Links per new firm (>= 1)")->required();
  gen_sf->add_option("--seed", sf_seed, "RNG seed")->required();
  gen_sf->add_option("--out", sf_out, "Edge-list output path")->required();
  gen_sf->add_option("--labels-out", sf_labels_out, "Label-file output path");
  gen_sf->add_option(
      "--industries", sf_industries,
      "Industry spec: a count (equal weights) or CODE:WEIGHT,...");

  // degree-dist
  std::string dd_net, dd_kind = "total", dd_out;
  auto* degree_dist =
      app.add_subcommand("degree-dist", "Degree CCDF of a stored network");
  degree_dist->add_option("--net", dd_net, "Edge-list path")->required();
  degree_dist->add_option("--kind", dd_kind, "in, out, or total");
  degree_dist->add_option("--out", dd_out, "CCDF CSV output path")
      ->required();

  // simulate
  std::string sim_net, sim_labels, sim_source_mode = "all", sim_industry;
  std::string sim_firms, sim_firms_file, sim_init = "zeros";
  std::string sim_record = "aggregates", sim_out, sim_config;
  SimulationConfig sim_cfg;
  auto* simulate =
      app.add_subcommand("simulate", "Run repeated demand-event experiments");
  simulate->add_option("--config", sim_config,
                       "Config file with 'key = value' lines; command-line "
                       "flags take precedence");
  simulate->add_option("--net", sim_net, "Edge-list path")->required();
  simulate->add_option("--labels", sim_labels, "Label-file path");
  simulate->add_option("--events", sim_cfg.events, "Recorded demand events")
      ->required();
  auto* warmup_opt = simulate->add_option(
      "--warmup", sim_cfg.warmup_events,
      "Warm-up events per replica (default: 10 x firm count)");
  simulate->add_option("--source-mode", sim_source_mode,
                       "all, industry, or list");
  simulate->add_option("--industry", sim_industry,
                       "Source industry code (with --source-mode industry)");
  simulate->add_option("--firms", sim_firms,
                       "Comma-separated source firm ids (with list mode)");
  simulate->add_option("--firms-file", sim_firms_file,
                       "File of source firm ids, one per line");
  simulate->add_option("--init", sim_init,
                       "Inventory initialization: zeros or uniform");
  simulate->add_option("--seed", sim_cfg.seed, "RNG seed")->required();
  simulate->add_option("--replicas", sim_cfg.replicas,
                       "Independent replicas (events split between them)");
  simulate->add_option("--record", sim_record, "aggregates or full");
  simulate->add_flag("--reset-per-event", sim_cfg.reset_per_event,
                     "Restore the initial inventory snapshot after every "
                     "event");
  simulate->add_option("--out", sim_out, "Run-summary JSON output path")
      ->required();

  // analyze
  std::vector<std::string> an_runs;
  std::string an_ccdf_out, an_means_out, an_involvement_out, an_labels;
  bool an_include_zeros = false, an_exclude_zero_means = false;
  double an_hill_xmin = 0.0;
  auto* analyze =
      app.add_subcommand("analyze", "Summarize one or more run summaries");
  analyze->add_option("--run", an_runs, "Run-summary JSON path (repeatable)")
      ->required();
  analyze->add_option("--ccdf-out", an_ccdf_out,
                      "Avalanche-size CCDF CSV output");
  analyze->add_flag("--include-zeros", an_include_zeros,
                    "Keep zero-size avalanches in the CCDF");
  auto* hill_opt = analyze->add_option(
      "--hill-xmin", an_hill_xmin,
      "Print the Hill tail exponent above this threshold");
  analyze->add_option("--means-out", an_means_out,
                      "Per-source-industry mean/std CSV output");
  analyze->add_flag("--exclude-zero-means", an_exclude_zero_means,
                    "Drop zero-size avalanches from means and stds");
  analyze->add_option("--involvement-out", an_involvement_out,
                      "Per-industry involvement-expectation CSV output");
  analyze->add_option("--labels", an_labels,
                      "Label file (needed by --involvement-out)");

  // leontief
  std::string lt_io, lt_inverse_out, lt_multipliers_out,
      lt_reduction = "column";
  auto* leontief = app.add_subcommand(
      "leontief", "Invert an input-output coefficient table");
  leontief->add_option("--io", lt_io, "IO-table CSV path")->required();
  leontief->add_option("--inverse-out", lt_inverse_out,
                       "Leontief inverse CSV output");
  leontief->add_option("--multipliers-out", lt_multipliers_out,
                       "Sector multipliers CSV output");
  leontief->add_option("--reduction", lt_reduction, "column or row sums");

  // compare
  std::string cp_io, cp_map, cp_means, cp_reduction = "column", cp_pairs_out;
  auto* compare = app.add_subcommand(
      "compare", "Correlate IO multipliers with simulated industry means");
  compare->add_option("--io", cp_io, "IO-table CSV path")->required();
  compare->add_option("--map", cp_map, "Sector-to-industry mapping path")
      ->required();
  compare->add_option("--means", cp_means,
                      "Means CSV (from analyze --means-out)")
      ->required();
  compare->add_option("--reduction", cp_reduction, "column or row sums");
  compare->add_option("--pairs-out", cp_pairs_out,
                      "Matched sector/industry pairs CSV output");

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = expand_simulate_config(std::move(args), simulate);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::reverse(args.begin(), args.end());  // CLI11 consumes back to front

  try {
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (gen_random->parsed())
      return run_gen_random(gr_nodes, gr_p, gr_seed, gr_out, gr_labels_out,
                            gr_industries);
    if (gen_sf->parsed())
      return run_gen_sf(sf_nodes, sf_m, sf_seed, sf_out, sf_labels_out,
                        sf_industries);
    if (degree_dist->parsed()) return run_degree_dist(dd_net, dd_kind, dd_out);
    if (simulate->parsed())
      return run_simulate(sim_net, sim_labels, sim_cfg,
                          warmup_opt->count() > 0, sim_source_mode,
                          sim_industry, sim_firms, sim_firms_file, sim_init,
                          sim_record, sim_out);
    if (analyze->parsed())
      return run_analyze(an_runs, an_ccdf_out, an_include_zeros,
                         hill_opt->count() > 0
                             ? std::optional<double>(an_hill_xmin)
                             : std::nullopt,
                         an_means_out, an_exclude_zero_means,
                         an_involvement_out, an_labels);
    if (leontief->parsed())
      return run_leontief(lt_io, lt_inverse_out, lt_multipliers_out,
                          lt_reduction);
    if (compare->parsed())
      return run_compare(cp_io, cp_map, cp_means, cp_reduction, cp_pairs_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
