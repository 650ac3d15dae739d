#pragma once

// Edge-list and label-file ingestion and emission.
//
// Edge list: UTF-8 text, one "SUPPLIER_ID<TAB>CLIENT_ID" link per line; ids
// are arbitrary non-whitespace tokens; '#' starts a comment line. Label
// file: "FIRM_ID<TAB>INDUSTRY_CODE" with the same comment rule. Firms are
// the union of ids seen in both files, numbered in order of first
// appearance; firms without a label get the sentinel code UNK.

#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "socsim/detail/text.hpp"
#include "socsim/errors.hpp"
#include "socsim/firm_network.hpp"

namespace socsim {

inline FirmNetwork load_edge_list(const std::string& edge_path,
                                  const std::string& label_path = {}) {
  std::ifstream edges(edge_path);
  if (!edges) throw ParseError("cannot open edge list '" + edge_path + "'");

  std::unordered_map<std::string, FirmId> id_of;
  std::vector<std::string> labels;
  auto intern = [&](std::string_view token) {
    auto it = id_of.find(std::string(token));
    if (it != id_of.end()) return it->second;
    auto id = static_cast<FirmId>(labels.size());
    labels.emplace_back(token);
    id_of.emplace(labels.back(), id);
    return id;
  };

  std::vector<std::pair<FirmId, FirmId>> links;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(edges, line)) {
    ++line_no;
    auto content = detail::trim(line);
    if (content.empty() || content.front() == '#') continue;
    auto fields = detail::split_fields(content);
    if (fields.size() != 2)
      throw ParseError(edge_path + ":" + std::to_string(line_no) +
                       ": expected 'SUPPLIER<TAB>CLIENT', got '" + line +
                       "'");
    if (fields[0] == fields[1])
      throw ParseError(edge_path + ":" + std::to_string(line_no) +
                       ": self-loop on firm '" + std::string(fields[0]) +
                       "'");
    links.emplace_back(intern(fields[0]), intern(fields[1]));
  }

  IndustryTaxonomy taxonomy;
  taxonomy.codes = {std::string(IndustryTaxonomy::unknown_code)};
  std::vector<std::uint32_t> industry;
  std::unordered_map<std::string, std::uint32_t> code_index{
      {std::string(IndustryTaxonomy::unknown_code), 0}};

  if (!label_path.empty()) {
    std::ifstream in(label_path);
    if (!in) throw ParseError("cannot open label file '" + label_path + "'");
    industry.resize(labels.size(), 0);
    std::vector<bool> seen(labels.size(), false);
    line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      auto content = detail::trim(line);
      if (content.empty() || content.front() == '#') continue;
      auto fields = detail::split_fields(content);
      if (fields.size() != 2)
        throw ParseError(label_path + ":" + std::to_string(line_no) +
                         ": expected 'FIRM_ID<TAB>INDUSTRY_CODE', got '" +
                         line + "'");
      FirmId firm = intern(fields[0]);
      if (firm >= industry.size()) {
        industry.resize(labels.size(), 0);
        seen.resize(labels.size(), false);
      }
      if (seen[firm])
        throw ParseError(label_path + ":" + std::to_string(line_no) +
                         ": duplicate label for firm '" +
                         std::string(fields[0]) + "'");
      seen[firm] = true;
      std::string code(fields[1]);
      auto [it, inserted] =
          code_index.emplace(code, static_cast<std::uint32_t>(
                                       taxonomy.codes.size()));
      if (inserted) taxonomy.codes.push_back(code);
      industry[firm] = it->second;
    }
    industry.resize(labels.size(), 0);
  }

  if (labels.empty())
    throw ParseError("'" + edge_path + "' defines no firms");
  if (!industry.empty()) industry.resize(labels.size(), 0);

  const auto firm_count = static_cast<FirmId>(labels.size());
  try {
    return FirmNetwork::from_links(firm_count, std::move(links),
                                   std::move(taxonomy), std::move(industry),
                                   std::move(labels));
  } catch (const DataError& e) {
    throw DataError("'" + edge_path + "': " + e.what());
  }
}

inline void write_edge_list(const FirmNetwork& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  for (FirmId s = 0; s < net.firm_count(); ++s)
    for (FirmId c : net.clients_of(s))
      out << net.label_of(s) << '\t' << net.label_of(c) << '\n';
  if (!out) throw DataError("write failed on '" + path + "'");
}

inline void write_labels(const FirmNetwork& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  for (FirmId i = 0; i < net.firm_count(); ++i)
    out << net.label_of(i) << '\t' << net.industry_code_of(i) << '\n';
  if (!out) throw DataError("write failed on '" + path + "'");
}

inline void write_degree_ccdf_csv(
    const std::vector<std::pair<Quantity, double>>& points,
    const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << "degree,ccdf\n";
  for (const auto& [degree, p] : points)
    out << degree << ',' << detail::format_g17(p) << '\n';
  if (!out) throw DataError("write failed on '" + path + "'");
}

}  // namespace socsim
