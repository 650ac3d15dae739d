#pragma once

// Synthetic network generators.
//
// generate_random_directed samples unordered firm pairs with constant
// probability p (expected link count C(n,2)*p) and gives each realized link
// a uniformly random direction. Pair enumeration uses geometric gap
// skipping, so cost is proportional to the number of realized links, not to
// C(n,2).
//
// generate_scale_free grows a preferential-attachment graph on total degree
// (complete seed graph on m+1 firms, then m links per new firm), again with
// uniformly random link directions. Total degree ends up fat-tailed with
// tail exponent near 3.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "socsim/errors.hpp"
#include "socsim/firm_network.hpp"
#include "socsim/rng.hpp"

namespace socsim {

namespace detail {

// Pairs (a, b), 0 <= a < b < n, enumerated row-major; start(a) is the linear
// index of (a, a+1). All arithmetic stays exact in 64-bit for n < 2^32.
inline std::uint64_t pair_row_start(std::uint64_t a, std::uint64_t n) {
  return a * (2 * n - a - 1) / 2;
}

inline std::pair<FirmId, FirmId> pair_from_index(std::uint64_t idx,
                                                 std::uint64_t n) {
  const double m = 2.0 * static_cast<double>(n) - 1.0;
  double root = m * m - 8.0 * static_cast<double>(idx);
  root = root > 0 ? std::sqrt(root) : 0.0;
  auto a = static_cast<std::uint64_t>((m - root) / 2.0);
  if (a >= n - 1) a = n - 2;
  while (a + 1 < n - 1 && pair_row_start(a + 1, n) <= idx) ++a;
  while (a > 0 && pair_row_start(a, n) > idx) --a;
  const std::uint64_t b = a + 1 + (idx - pair_row_start(a, n));
  return {static_cast<FirmId>(a), static_cast<FirmId>(b)};
}

}  // namespace detail

inline FirmNetwork generate_random_directed(FirmId n, double p,
                                            std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("generate_random_directed: n >= 2");
  if (!(p >= 0.0) || p > 1.0)
    throw std::invalid_argument(
        "generate_random_directed: p must lie in [0, 1]");

  Xoshiro256StarStar rng(seed);
  std::vector<std::pair<FirmId, FirmId>> links;
  const std::uint64_t total_pairs =
      static_cast<std::uint64_t>(n) * (n - 1) / 2;

  auto emit = [&](std::uint64_t idx) {
    auto [a, b] = detail::pair_from_index(idx, n);
    if (rng() & 1)
      links.emplace_back(a, b);
    else
      links.emplace_back(b, a);
  };

  if (p >= 1.0) {
    links.reserve(total_pairs);
    for (std::uint64_t idx = 0; idx < total_pairs; ++idx) emit(idx);
  } else if (p > 0.0) {
    links.reserve(static_cast<std::size_t>(
        static_cast<double>(total_pairs) * p * 1.1 + 16.0));
    const double log_q = std::log1p(-p);
    std::uint64_t idx = 0;
    bool first = true;
    while (true) {
      const double gap =
          std::floor(std::log(uniform_real_positive(rng)) / log_q);
      if (gap >= static_cast<double>(total_pairs)) break;
      idx += static_cast<std::uint64_t>(gap) + (first ? 0 : 1);
      first = false;
      if (idx >= total_pairs) break;
      emit(idx);
    }
  }
  return FirmNetwork::from_links(n, std::move(links));
}

inline FirmNetwork generate_scale_free(FirmId n, std::uint32_t m,
                                       std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("generate_scale_free: m >= 1");
  if (n <= m)
    throw std::invalid_argument("generate_scale_free: n must exceed m");

  Xoshiro256StarStar rng(seed);
  std::vector<std::pair<FirmId, FirmId>> links;
  links.reserve(static_cast<std::size_t>(m) * (m + 1) / 2 +
                static_cast<std::size_t>(n - m - 1) * m);

  auto add_link = [&](FirmId a, FirmId b) {
    if (rng() & 1)
      links.emplace_back(a, b);
    else
      links.emplace_back(b, a);
  };

  // One entry per link endpoint; drawing uniformly from it is drawing a
  // firm with probability proportional to its total degree.
  std::vector<FirmId> endpoints;
  endpoints.reserve(2 * links.capacity());

  for (FirmId a = 0; a + 1 <= m; ++a)
    for (FirmId b = a + 1; b <= m; ++b) {
      add_link(a, b);
      endpoints.push_back(a);
      endpoints.push_back(b);
    }

  std::vector<FirmId> targets;
  targets.reserve(m);
  for (FirmId v = m + 1; v < n; ++v) {
    targets.clear();
    while (targets.size() < m) {
      FirmId t = endpoints[uniform_index(rng, endpoints.size())];
      bool fresh = true;
      for (FirmId u : targets)
        if (u == t) {
          fresh = false;
          break;
        }
      if (fresh) targets.push_back(t);
    }
    for (FirmId t : targets) {
      add_link(v, t);
      endpoints.push_back(v);
      endpoints.push_back(t);
    }
  }
  return FirmNetwork::from_links(n, std::move(links));
}

// Labels every firm independently according to `weights` (code, probability)
// pairs; weights must be nonnegative and sum to 1 within 1e-9.
inline FirmNetwork assign_industries(
    const FirmNetwork& net,
    const std::vector<std::pair<std::string, double>>& weights,
    std::uint64_t seed, IndustryLevel level = IndustryLevel::division) {
  if (weights.empty())
    throw std::invalid_argument("assign_industries: empty weight list");
  IndustryTaxonomy taxonomy;
  taxonomy.level = level;
  std::vector<double> cumulative;
  cumulative.reserve(weights.size());
  double sum = 0.0;
  for (const auto& [code, w] : weights) {
    if (w < 0.0)
      throw std::invalid_argument("assign_industries: negative weight for '" +
                                  code + "'");
    taxonomy.codes.push_back(code);
    sum += w;
    cumulative.push_back(sum);
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("assign_industries: weights sum to " +
                                std::to_string(sum) + ", expected 1");
  cumulative.back() = 1.0;
  taxonomy.validate();

  Xoshiro256StarStar rng(seed);
  std::vector<std::uint32_t> industry(net.firm_count());
  for (FirmId i = 0; i < net.firm_count(); ++i) {
    const double u = uniform_real(rng);  // in [0, 1)
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    industry[i] = static_cast<std::uint32_t>(it - cumulative.begin());
  }

  std::vector<std::string> labels;
  labels.reserve(net.firm_count());
  bool has_labels = false;
  for (FirmId i = 0; i < net.firm_count(); ++i) {
    labels.push_back(net.label_of(i));
    if (labels.back() != std::to_string(i)) has_labels = true;
  }
  if (!has_labels) labels.clear();

  return FirmNetwork::from_links(net.firm_count(), net.links(),
                                 std::move(taxonomy), std::move(industry),
                                 std::move(labels));
}

}  // namespace socsim
