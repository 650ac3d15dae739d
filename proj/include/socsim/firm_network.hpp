#pragma once

// Immutable directed supplier->client network with per-firm industry labels.
//
// Firms are dense integer ids assigned at load/generation time; the original
// external tokens are kept for I/O. Adjacency is stored in compressed
// sorted-neighbor (CSR) form, one array pair per direction. Instances never
// mutate after from_links() returns and are safe to share across threads.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "socsim/errors.hpp"

namespace socsim {

using FirmId = std::uint32_t;
using Quantity = std::int64_t;

enum class IndustryLevel { division, group };

struct IndustryTaxonomy {
  std::vector<std::string> codes;
  std::vector<std::string> names;  // empty, or one display name per code
  IndustryLevel level = IndustryLevel::division;

  static constexpr std::string_view unknown_code = "UNK";

  std::size_t size() const { return codes.size(); }

  std::optional<std::uint32_t> index_of(std::string_view code) const {
    for (std::uint32_t i = 0; i < codes.size(); ++i)
      if (codes[i] == code) return i;
    return std::nullopt;
  }

  void validate() const {
    if (!names.empty() && names.size() != codes.size())
      throw DataError("taxonomy: names/codes size mismatch");
    for (std::size_t i = 0; i < codes.size(); ++i) {
      if (codes[i].empty()) throw DataError("taxonomy: empty industry code");
      for (std::size_t j = i + 1; j < codes.size(); ++j)
        if (codes[i] == codes[j])
          throw DataError("taxonomy: duplicate industry code '" + codes[i] +
                          "'");
    }
  }
};

enum class DegreeKind { incoming, outgoing, total };

class FirmNetwork {
 public:
  FirmNetwork() = default;

  // Validates and compacts a link list into CSR form.
  //   links      (supplier_id, client_id) pairs; rejects self-loops and
  //              duplicates
  //   industry   per-firm index into taxonomy.codes; empty means every firm
  //              is labeled UNK
  //   labels     external id per firm; empty means decimal internal ids
  static FirmNetwork from_links(FirmId firm_count,
                                std::vector<std::pair<FirmId, FirmId>> links,
                                IndustryTaxonomy taxonomy = {},
                                std::vector<std::uint32_t> industry = {},
                                std::vector<std::string> labels = {}) {
    if (firm_count == 0) throw DataError("network must contain firms");

    FirmNetwork net;
    net.firm_count_ = firm_count;
    net.link_count_ = links.size();

    if (taxonomy.codes.empty()) {
      taxonomy.codes = {std::string(IndustryTaxonomy::unknown_code)};
    }
    taxonomy.validate();
    if (industry.empty()) {
      std::uint32_t unk = taxonomy.index_of(IndustryTaxonomy::unknown_code)
                              .value_or(0);
      if (!taxonomy.index_of(IndustryTaxonomy::unknown_code)) {
        unk = static_cast<std::uint32_t>(taxonomy.codes.size());
        taxonomy.codes.emplace_back(IndustryTaxonomy::unknown_code);
        if (!taxonomy.names.empty()) taxonomy.names.emplace_back("Unknown");
      }
      industry.assign(firm_count, unk);
    }
    if (industry.size() != firm_count)
      throw DataError("industry label vector size mismatch");
    for (std::uint32_t idx : industry)
      if (idx >= taxonomy.codes.size())
        throw DataError("industry index out of range of taxonomy");
    if (!labels.empty() && labels.size() != firm_count)
      throw DataError("external label vector size mismatch");
    net.taxonomy_ = std::move(taxonomy);
    net.industry_ = std::move(industry);
    net.labels_ = std::move(labels);

    for (auto [s, c] : links) {
      if (s >= firm_count || c >= firm_count)
        throw DataError("link endpoint out of range");
      if (s == c)
        throw DataError("self-loop on firm '" + net.label_of(s) + "'");
    }
    std::sort(links.begin(), links.end());
    for (std::size_t i = 1; i < links.size(); ++i)
      if (links[i] == links[i - 1])
        throw DataError("duplicate link (" + net.label_of(links[i].first) +
                        ", " + net.label_of(links[i].second) + ")");

    // links sorted by (supplier, client): client rows come out sorted.
    net.cli_off_.assign(firm_count + 1, 0);
    net.sup_off_.assign(firm_count + 1, 0);
    for (auto [s, c] : links) {
      ++net.cli_off_[s + 1];
      ++net.sup_off_[c + 1];
    }
    for (FirmId i = 0; i < firm_count; ++i) {
      net.cli_off_[i + 1] += net.cli_off_[i];
      net.sup_off_[i + 1] += net.sup_off_[i];
    }
    net.cli_ids_.resize(links.size());
    net.sup_ids_.resize(links.size());
    std::vector<std::uint64_t> cursor(net.sup_off_.begin(),
                                      net.sup_off_.end() - 1);
    // Fill clients in one pass (input already grouped by supplier), then
    // suppliers with a running cursor; supplier rows get sorted afterwards.
    std::size_t k = 0;
    for (auto [s, c] : links) {
      net.cli_ids_[k++] = c;
      net.sup_ids_[cursor[c]++] = s;
    }
    for (FirmId i = 0; i < firm_count; ++i) {
      auto row = net.sup_ids_.begin();
      std::sort(row + static_cast<std::ptrdiff_t>(net.sup_off_[i]),
                row + static_cast<std::ptrdiff_t>(net.sup_off_[i + 1]));
    }
    return net;
  }

  FirmId firm_count() const { return firm_count_; }
  std::size_t link_count() const { return link_count_; }

  std::span<const FirmId> suppliers_of(FirmId firm) const {
    return {sup_ids_.data() + sup_off_[firm],
            sup_ids_.data() + sup_off_[firm + 1]};
  }
  std::span<const FirmId> clients_of(FirmId firm) const {
    return {cli_ids_.data() + cli_off_[firm],
            cli_ids_.data() + cli_off_[firm + 1]};
  }

  // n_i of the production rule: how many firms supply `firm`.
  Quantity supplier_count(FirmId firm) const {
    return static_cast<Quantity>(sup_off_[firm + 1] - sup_off_[firm]);
  }
  Quantity client_count(FirmId firm) const {
    return static_cast<Quantity>(cli_off_[firm + 1] - cli_off_[firm]);
  }
  Quantity degree(FirmId firm, DegreeKind kind) const {
    switch (kind) {
      case DegreeKind::incoming: return supplier_count(firm);
      case DegreeKind::outgoing: return client_count(firm);
      default: return supplier_count(firm) + client_count(firm);
    }
  }

  const IndustryTaxonomy& taxonomy() const { return taxonomy_; }
  std::uint32_t industry_index_of(FirmId firm) const {
    return industry_[firm];
  }
  const std::string& industry_code_of(FirmId firm) const {
    return taxonomy_.codes[industry_[firm]];
  }
  bool has_unknown_industry(FirmId firm) const {
    return industry_code_of(firm) == IndustryTaxonomy::unknown_code;
  }

  std::string label_of(FirmId firm) const {
    return labels_.empty() ? std::to_string(firm) : labels_[firm];
  }

  // Resolves an external token to an internal id.
  std::optional<FirmId> find_label(std::string_view token) const {
    if (labels_.empty()) {
      std::uint64_t v = 0;
      const char* b = token.data();
      const char* e = b + token.size();
      auto [p, ec] = std::from_chars(b, e, v);
      if (ec != std::errc{} || p != e || v >= firm_count_)
        return std::nullopt;
      return static_cast<FirmId>(v);
    }
    for (FirmId i = 0; i < firm_count_; ++i)
      if (labels_[i] == token) return i;
    return std::nullopt;
  }

  // All links in canonical (supplier, client) order.
  std::vector<std::pair<FirmId, FirmId>> links() const {
    std::vector<std::pair<FirmId, FirmId>> out;
    out.reserve(link_count_);
    for (FirmId s = 0; s < firm_count_; ++s)
      for (FirmId c : clients_of(s)) out.emplace_back(s, c);
    return out;
  }

  // Firms per taxonomy code, UNK included.
  std::vector<std::uint64_t> industry_sizes() const {
    std::vector<std::uint64_t> sizes(taxonomy_.size(), 0);
    for (FirmId i = 0; i < firm_count_; ++i) ++sizes[industry_[i]];
    return sizes;
  }

 private:
  FirmId firm_count_ = 0;
  std::size_t link_count_ = 0;
  std::vector<std::uint64_t> sup_off_, cli_off_;
  std::vector<FirmId> sup_ids_, cli_ids_;
  std::vector<std::uint32_t> industry_;
  IndustryTaxonomy taxonomy_;
  std::vector<std::string> labels_;
};

// Complementary cumulative degree distribution over positive degrees.
// Points are (degree, P(K >= degree)) for each distinct observed positive
// degree, ascending; the denominator counts every firm, so the first point
// is below 1 whenever zero-degree firms exist.
inline std::vector<std::pair<Quantity, double>> degree_ccdf(
    const FirmNetwork& net, DegreeKind kind) {
  if (net.firm_count() == 0) throw DataError("degree_ccdf: empty network");
  std::vector<Quantity> degrees;
  degrees.reserve(net.firm_count());
  for (FirmId i = 0; i < net.firm_count(); ++i) {
    Quantity d = net.degree(i, kind);
    if (d > 0) degrees.push_back(d);
  }
  std::sort(degrees.begin(), degrees.end());
  std::vector<std::pair<Quantity, double>> points;
  const double n = static_cast<double>(net.firm_count());
  std::size_t i = 0;
  while (i < degrees.size()) {
    std::size_t j = i;
    while (j < degrees.size() && degrees[j] == degrees[i]) ++j;
    points.emplace_back(degrees[i],
                        static_cast<double>(degrees.size() - i) / n);
    i = j;
  }
  return points;
}

}  // namespace socsim
