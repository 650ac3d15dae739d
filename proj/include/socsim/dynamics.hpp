#pragma once

// One external-demand avalanche: order propagation, batch production,
// loop avoidance, inventory renewal.
//
// A firm holding inventory z that receives s orders while n of its suppliers
// are still available produces in whole batches of n units:
//
//   a = max(0, ceil((s - z) / n)),  y = a * n,  z' = z + y - s,
//
// and places a orders with each available supplier. Production is one unit
// out per unit of material in, so y is always a multiple of n and the
// leftover z' stays below n. A firm whose suppliers are exhausted -- none to
// begin with, or all already involved in this avalanche -- acts as a primary
// producer: it turns out exactly the deficit max(0, s - z) with no orders
// placed and stores nothing.
//
// Propagation is wave-synchronous: every order emitted in wave w and
// addressed to the same firm is summed before that firm acts exactly once
// in wave w+1. A firm that has received orders is "involved" and is ignored
// as a supplier for the rest of the event, which breaks supply loops and
// bounds every cascade by the firm count.

#include <cstdint>
#include <utility>
#include <vector>

#include "socsim/errors.hpp"
#include "socsim/firm_network.hpp"

namespace socsim {

// Per-firm inventories, persisted across demand events.
// Invariant: 0 <= z[i] <= n_i, and z[i] == 0 where n_i == 0.
struct InventoryState {
  std::vector<Quantity> z;

  void validate(const FirmNetwork& net) const {
    if (z.size() != net.firm_count())
      throw DataError("inventory vector size mismatch");
    for (FirmId i = 0; i < net.firm_count(); ++i) {
      if (z[i] < 0 || z[i] > net.supplier_count(i))
        throw DataError("inventory out of [0, n_i] for firm " +
                        net.label_of(i));
    }
  }
};

// Outcome of one external demand event.
struct AvalancheRecord {
  FirmId source = 0;
  Quantity total_size = 0;                             // Y = sum of y_i
  std::vector<std::pair<FirmId, Quantity>> productions;  // firms with y > 0
  std::vector<FirmId> involved;  // every firm that received orders

  void clear() {
    total_size = 0;
    productions.clear();
    involved.clear();
  }
};

// Reusable per-event working set; epoch marking resets the visited state in
// O(1) between events.
// mark[i] == epoch  <=>  firm i is involved in the current event.
struct PropagationScratch {
  std::uint64_t epoch = 0;
  std::vector<std::uint64_t> mark;        // last epoch the firm was involved
  std::vector<std::uint64_t> order_mark;  // last epoch `pending` was valid
  std::vector<Quantity> pending;          // orders accumulated for next wave
  std::vector<FirmId> wave, next_wave;

  void bind(const FirmNetwork& net) {
    mark.assign(net.firm_count(), 0);
    order_mark.assign(net.firm_count(), 0);
    pending.assign(net.firm_count(), 0);
    wave.clear();
    next_wave.clear();
    epoch = 0;
  }
};

// Optional per-firm audit of a single event, for conservation checks.
struct AuditTrace {
  struct Row {
    FirmId firm;
    Quantity orders_received;  // s
    Quantity suppliers_available;  // n_avail (0 in primary mode)
    Quantity batches;          // a (0 in primary mode)
    Quantity produced;         // y
    Quantity inventory_before;
    Quantity inventory_after;
    bool primary_mode;
  };
  std::vector<Row> rows;
};

// a = max(0, ceil((s - z) / n_avail)) -- batches needed to cover the deficit.
constexpr Quantity required_batches(Quantity z, Quantity s,
                                    Quantity n_avail) {
  const Quantity deficit = s - z;
  return deficit > 0 ? (deficit + n_avail - 1) / n_avail : 0;
}

// y = a * n_avail; smallest multiple of n_avail covering the deficit.
constexpr Quantity production_amount(Quantity z, Quantity s,
                                     Quantity n_avail) {
  return required_batches(z, s, n_avail) * n_avail;
}

// Runs one avalanche triggered by a unit of external demand at `source`.
// Mutates `state` in place (inventory renewal z' = z - s + y for every
// involved firm) and reuses `record` and `scratch` buffers across calls.
inline void propagate_avalanche(const FirmNetwork& net, InventoryState& state,
                                FirmId source, PropagationScratch& scratch,
                                AvalancheRecord& record,
                                AuditTrace* audit = nullptr) {
  if (scratch.mark.size() != net.firm_count()) scratch.bind(net);
  const std::uint64_t epoch = ++scratch.epoch;
  auto& z = state.z;

  record.clear();
  record.source = source;
  record.involved.push_back(source);
  scratch.mark[source] = epoch;
  scratch.order_mark[source] = epoch;
  scratch.pending[source] = 1;  // the external unit of demand
  scratch.wave.assign(1, source);

  while (!scratch.wave.empty()) {
    scratch.next_wave.clear();
    for (FirmId firm : scratch.wave) {
      const Quantity s = scratch.pending[firm];
      const Quantity z_before = z[firm];

      Quantity n_avail = 0;
      for (FirmId u : net.suppliers_of(firm))
        n_avail += (scratch.mark[u] != epoch);

      Quantity y;
      Quantity batches = 0;
      if (n_avail >= 1) {
        batches = required_batches(z[firm], s, n_avail);
        y = batches * n_avail;
        z[firm] += y - s;
        if (batches > 0) {
          for (FirmId u : net.suppliers_of(firm)) {
            if (scratch.mark[u] == epoch) continue;
            if (scratch.order_mark[u] != epoch) {
              scratch.order_mark[u] = epoch;
              scratch.pending[u] = 0;
              scratch.next_wave.push_back(u);
            }
            scratch.pending[u] += batches;
          }
        }
      } else {
        // Primary mode: produce the deficit exactly, store nothing.
        const Quantity deficit = s - z[firm];
        y = deficit > 0 ? deficit : 0;
        z[firm] = deficit > 0 ? 0 : z[firm] - s;
      }

      if (y > 0) {
        record.productions.emplace_back(firm, y);
        record.total_size += y;
      }
      if (audit)
        audit->rows.push_back({firm, s, n_avail, batches, y, z_before,
                               z[firm], n_avail == 0});
    }
    // Wave boundary: recipients become involved together, before any of
    // them acts, so the outcome cannot depend on intra-wave order.
    for (FirmId u : scratch.next_wave) {
      scratch.mark[u] = epoch;
      record.involved.push_back(u);
    }
    std::swap(scratch.wave, scratch.next_wave);
  }
}

inline AvalancheRecord propagate_avalanche(const FirmNetwork& net,
                                           InventoryState& state,
                                           FirmId source,
                                           PropagationScratch& scratch,
                                           AuditTrace* audit = nullptr) {
  AvalancheRecord record;
  propagate_avalanche(net, state, source, scratch, record, audit);
  return record;
}

}  // namespace socsim
