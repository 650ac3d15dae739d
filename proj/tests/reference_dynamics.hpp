#pragma once

// Naive reference cascade, kept deliberately independent of the production
// engine: explicit per-wave ordered maps, a fresh involved set per event, no
// scratch reuse, no epoch marking. Used as the ground-truth oracle when
// checking propagate_avalanche.

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "socsim/firm_network.hpp"

namespace refsim {

struct RefResult {
  socsim::Quantity total = 0;
  std::map<socsim::FirmId, socsim::Quantity> productions;
  std::set<socsim::FirmId> involved;
};

inline RefResult propagate(const socsim::FirmNetwork& net,
                           std::vector<socsim::Quantity>& z,
                           socsim::FirmId source) {
  RefResult result;
  std::map<socsim::FirmId, socsim::Quantity> wave{{source, 1}};
  result.involved.insert(source);

  while (!wave.empty()) {
    std::map<socsim::FirmId, socsim::Quantity> next;
    for (const auto& [firm, orders] : wave) {
      std::vector<socsim::FirmId> available;
      for (socsim::FirmId u : net.suppliers_of(firm))
        if (!result.involved.count(u)) available.push_back(u);

      socsim::Quantity produced = 0;
      if (!available.empty()) {
        const auto n = static_cast<socsim::Quantity>(available.size());
        socsim::Quantity batches = 0;
        if (orders > z[firm]) {
          const socsim::Quantity deficit = orders - z[firm];
          batches = deficit / n + (deficit % n != 0 ? 1 : 0);
        }
        produced = batches * n;
        z[firm] = z[firm] + produced - orders;
        for (socsim::FirmId u : available)
          if (batches > 0) next[u] += batches;
      } else {
        produced = orders > z[firm] ? orders - z[firm] : 0;
        z[firm] = z[firm] - orders + produced;
      }
      if (produced > 0) {
        result.productions[firm] = produced;
        result.total += produced;
      }
    }
    for (const auto& [firm, orders] : next) result.involved.insert(firm);
    wave = std::move(next);
  }
  return result;
}

}  // namespace refsim
