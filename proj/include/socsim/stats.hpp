#pragma once

// Distribution and comparison statistics over avalanche records: CCDFs,
// Hill tail-exponent estimates, per-industry means, involvement
// expectations, Pearson correlation.
//
// Convention pinned here once: zero-size avalanches are excluded from CCDFs
// (they cannot sit on log axes) but included in per-industry means and
// standard deviations unless the caller flips include_zeros. Standard
// deviations are the population (divide-by-n) form.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "socsim/detail/text.hpp"
#include "socsim/errors.hpp"
#include "socsim/firm_network.hpp"
#include "socsim/simulation.hpp"

namespace socsim {

// P(X >= s) over the distinct observed sizes, ascending; the first point has
// probability 1. The denominator is the sample count after exclusion.
inline std::vector<std::pair<Quantity, double>> ccdf_from_counts(
    std::vector<std::pair<Quantity, std::uint64_t>> counts,
    bool exclude_zero) {
  std::sort(counts.begin(), counts.end());
  std::vector<std::pair<Quantity, double>> out;
  std::uint64_t n = 0;
  for (const auto& [size, count] : counts) {
    if (exclude_zero && size == 0) continue;
    n += count;
  }
  if (n == 0)
    throw std::invalid_argument("ccdf: no samples left after exclusion");
  std::uint64_t at_least = n;
  for (const auto& [size, count] : counts) {
    if (exclude_zero && size == 0) continue;
    if (count == 0) continue;
    out.emplace_back(size, static_cast<double>(at_least) /
                               static_cast<double>(n));
    at_least -= count;
  }
  return out;
}

inline std::vector<std::pair<Quantity, double>> ccdf(
    std::span<const Quantity> sizes, bool exclude_zero) {
  std::unordered_map<Quantity, std::uint64_t> tally;
  for (Quantity s : sizes) ++tally[s];
  std::vector<std::pair<Quantity, std::uint64_t>> counts(tally.begin(),
                                                         tally.end());
  return ccdf_from_counts(std::move(counts), exclude_zero);
}

// Hill maximum-likelihood tail exponent over samples >= xmin:
//   alpha = 1 + n / sum(ln(x_i / xmin)).
// The caller supplies xmin; there is no automatic threshold selection.
inline double hill_mle_from_counts(
    const std::vector<std::pair<Quantity, std::uint64_t>>& counts,
    double xmin) {
  if (!(xmin > 0)) throw std::invalid_argument("hill_mle: xmin must be > 0");
  std::uint64_t n = 0;
  double log_sum = 0.0;
  for (const auto& [size, count] : counts) {
    if (static_cast<double>(size) < xmin || count == 0) continue;
    n += count;
    log_sum += static_cast<double>(count) *
               std::log(static_cast<double>(size) / xmin);
  }
  if (n < 2)
    throw std::invalid_argument("hill_mle: fewer than 2 tail samples");
  if (!(log_sum > 0.0))
    throw std::invalid_argument(
        "hill_mle: degenerate tail (all samples at xmin)");
  return 1.0 + static_cast<double>(n) / log_sum;
}

inline double hill_mle(std::span<const double> samples, double xmin) {
  if (!(xmin > 0)) throw std::invalid_argument("hill_mle: xmin must be > 0");
  std::uint64_t n = 0;
  double log_sum = 0.0;
  for (double x : samples) {
    if (x < xmin) continue;
    ++n;
    log_sum += std::log(x / xmin);
  }
  if (n < 2)
    throw std::invalid_argument("hill_mle: fewer than 2 tail samples");
  if (!(log_sum > 0.0))
    throw std::invalid_argument(
        "hill_mle: degenerate tail (all samples at xmin)");
  return 1.0 + static_cast<double>(n) / log_sum;
}

inline double hill_mle(std::span<const Quantity> samples, double xmin) {
  std::vector<double> xs(samples.begin(), samples.end());
  return hill_mle(std::span<const double>(xs), xmin);
}

struct IndustryStats {
  struct Row {
    std::string industry;
    double mean;
    double std_dev;  // population form
    std::uint64_t count;
  };
  std::vector<Row> rows;  // sorted by industry code
};

// Mean and population std of avalanche sizes, one row per source industry.
// Zero-size events are included by default; include_zeros=false drops them
// (exact integer algebra on the aggregates either way).
inline IndustryStats industry_summary(
    const std::vector<std::pair<std::string, const RunSummary*>>& runs,
    bool include_zeros = true) {
  std::map<std::string, SizeMoments> by_industry;
  std::map<std::string, std::uint64_t> zeros;
  for (const auto& [industry, summary] : runs) {
    auto& m = by_industry[industry];
    m.merge(summary->moments);
    zeros[industry] += summary->histogram.zero_count();
  }
  IndustryStats out;
  for (const auto& [industry, moments] : by_industry) {
    SizeMoments m =
        include_zeros ? moments : moments.without_zeros(zeros[industry]);
    if (m.count == 0) continue;  // nothing left to summarize
    out.rows.push_back(
        {industry, m.mean(), m.population_std(), m.count});
  }
  return out;
}

struct InvolvementStats {
  struct Row {
    std::string industry;
    double expectation;  // mean over the industry's firms of count/events
    std::uint64_t firms;
  };
  std::vector<Row> rows;  // sorted by industry code
};

// Involvement expectation: for industry I, the average over its firms of
// (events the firm was involved in) / (recorded events). Firms labeled UNK
// are excluded from per-industry statistics.
inline InvolvementStats involvement_expectation(const RunSummary& summary,
                                                const FirmNetwork& net) {
  if (summary.involvement.size() != net.firm_count())
    throw std::invalid_argument(
        "involvement_expectation: summary does not carry per-firm counts "
        "for this network");
  if (summary.events_recorded == 0)
    throw std::invalid_argument("involvement_expectation: no recorded events");
  const auto& taxonomy = net.taxonomy();
  std::vector<double> sums(taxonomy.size(), 0.0);
  std::vector<std::uint64_t> firms(taxonomy.size(), 0);
  const double events = static_cast<double>(summary.events_recorded);
  for (FirmId i = 0; i < net.firm_count(); ++i) {
    const std::uint32_t k = net.industry_index_of(i);
    sums[k] += static_cast<double>(summary.involvement[i]) / events;
    ++firms[k];
  }
  InvolvementStats out;
  for (std::size_t k = 0; k < taxonomy.size(); ++k) {
    if (firms[k] == 0) continue;
    if (taxonomy.codes[k] == IndustryTaxonomy::unknown_code) continue;
    out.rows.push_back({taxonomy.codes[k],
                        sums[k] / static_cast<double>(firms[k]), firms[k]});
  }
  std::sort(out.rows.begin(), out.rows.end(),
            [](const auto& a, const auto& b) { return a.industry < b.industry; });
  return out;
}

// Same expectation computed from sidecar data: (external id, involved
// count) rows plus an external-id -> industry-code map.
inline InvolvementStats involvement_expectation_from_counts(
    const std::vector<std::pair<std::string, std::uint64_t>>& firm_counts,
    const std::unordered_map<std::string, std::string>& industry_of,
    std::uint64_t events) {
  if (events == 0)
    throw std::invalid_argument("involvement_expectation: no recorded events");
  std::map<std::string, std::pair<double, std::uint64_t>> acc;
  for (const auto& [firm, count] : firm_counts) {
    auto it = industry_of.find(firm);
    const std::string code = it == industry_of.end()
                                 ? std::string(IndustryTaxonomy::unknown_code)
                                 : it->second;
    auto& [sum, firms] = acc[code];
    sum += static_cast<double>(count) / static_cast<double>(events);
    ++firms;
  }
  InvolvementStats out;
  for (const auto& [code, pair] : acc) {
    if (code == IndustryTaxonomy::unknown_code) continue;
    out.rows.push_back(
        {code, pair.first / static_cast<double>(pair.second), pair.second});
  }
  return out;
}

// Product-moment correlation; rejects constant inputs.
inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw std::invalid_argument("pearson: length mismatch");
  if (x.size() < 2)
    throw std::invalid_argument("pearson: need at least 2 points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw std::invalid_argument("pearson: constant vector");
  return sxy / std::sqrt(sxx * syy);
}

// --- CSV emitters (17 significant digits throughout) ---

inline void write_size_ccdf_csv(
    const std::vector<std::pair<Quantity, double>>& points,
    const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << "size,ccdf\n";
  for (const auto& [size, p] : points)
    out << size << ',' << detail::format_g17(p) << '\n';
  if (!out) throw DataError("write failed on '" + path + "'");
}

inline void write_industry_means_csv(const IndustryStats& stats,
                                     const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << "industry,mean,std,count\n";
  for (const auto& row : stats.rows)
    out << row.industry << ',' << detail::format_g17(row.mean) << ','
        << detail::format_g17(row.std_dev) << ',' << row.count << '\n';
  if (!out) throw DataError("write failed on '" + path + "'");
}

inline void write_involvement_csv(const InvolvementStats& stats,
                                  const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << "industry,expectation\n";
  for (const auto& row : stats.rows)
    out << row.industry << ',' << detail::format_g17(row.expectation) << '\n';
  if (!out) throw DataError("write failed on '" + path + "'");
}

}  // namespace socsim
