#pragma once

// Pricing: SPPRC with 2-cycle elimination solved by forward label setting
// over a (possibly reduced) network with dual-modified arc costs.

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "mlcg/column.hpp"
#include "mlcg/network.hpp"

namespace mlcg {

struct PricedArc {
  int arc_id = 0;
  double modified_cost = 0.0;
};

/// c̄_a = c_a - π[row(a)] for arcs covering a row, c_a otherwise.
std::vector<PricedArc> price_arcs(const Network& net, std::span<const double> duals);

struct Label {
  int node = 0;
  double rcost = 0.0;
  Resources res{};
  int pred_label = -1;  // index in the owning label pool, -1 for the root
  int pred_node = -1;
  int arc = -1;         // arc (in the priced network) that created the label
};

/// Extends `label` along `arc`. Returns std::nullopt when a resource exceeds
/// its window at the head. The returned label's pred_label is left at -1;
/// the caller owns the pool and sets it. Throws std::logic_error if the
/// label does not sit at the arc's tail.
std::optional<Label> extend(const Label& label, const ArcData& arc,
                            const PricedArc& priced, const NodeData& head);

/// Componentwise dominance at a shared node. The 2-cycle keep-two rule is
/// applied by the label-setting loop, not here.
bool dominates(const Label& a, const Label& b);

struct PricingLimits {
  int max_columns = 200;
  double neg_eps = 1e-6;       // a column needs rcost < -neg_eps
  bool use_dominance = true;
};

struct PricingResult {
  std::vector<Column> columns;
  std::size_t labels_created = 0;
  std::size_t labels_dominated = 0;
  double seconds = 0.0;
};

/// Returns at most limits.max_columns negative reduced cost routes, most
/// negative first (ties by node sequence). Column arcs are reported with
/// full-network ids.
PricingResult solve_pricing(const Network& net, std::span<const PricedArc> priced,
                            const PricingLimits& limits = {});

}  // namespace mlcg
