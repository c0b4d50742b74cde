#pragma once

// Column generation drivers: the exact baseline loop, data collection,
// ML arc-selection pricing with reduced/full network switching, and the
// non-learned selection strategies.

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mlcg/network.hpp"
#include "mlcg/pricing.hpp"
#include "mlcg/rmp.hpp"

namespace mlcg {

enum class Strategy { baseline, ml_s, random_s, cost_s, redcost_s, ml_redcost_s };

std::string_view to_string(Strategy s);
/// Accepts the names printed by to_string ("baseline", "ml_s", ...).
Strategy parse_strategy(std::string_view name);

inline constexpr int kUnlimited = std::numeric_limits<int>::max();

struct CgConfig {
  Strategy strategy = Strategy::baseline;
  int eta_min = 30;
  int eta_max = 100;
  bool disable_reduced_after_first_failure = true;
  std::vector<int> redcost_levels{10, 20, kUnlimited};
  int max_columns_per_iter = 200;
  std::uint64_t rng_seed = 1;
  double neg_eps = 1e-6;
  int max_iterations = 100000;

  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
};

enum class NetworkTag { full, reduced };
std::string_view to_string(NetworkTag tag);

struct IterationRecord {
  int index = 0;
  NetworkTag network = NetworkTag::full;
  int level = kUnlimited;          // redcost level of the final pricing call
  int pricing_calls = 1;
  int columns = 0;                 // |C_i|
  std::size_t labels_created = 0;  // summed over the iteration's pricing calls
  double pricing_seconds = 0.0;
  double rmp_seconds = 0.0;
  double objective = 0.0;          // RMP objective whose duals were priced
};

struct RunStats {
  int iterations = 0;
  int full_network_iterations = 0;
  double pp_seconds = 0.0;
  double rmp_seconds = 0.0;
  double total_seconds = 0.0;
  std::vector<IterationRecord> per_iteration;
};

struct CgResult {
  LpSolution solution;
  RunStats stats;
  std::vector<Column> pool;  // every pooled column, seeds included
};

/// Optional observers, e.g. for the LP duality checks of the test suites.
struct CgHooks {
  std::function<void(const RmpState&, const LpSolution&)> on_lp_solved;
  std::function<void(const std::vector<Column>&)> on_columns_generated;
};

CgResult run_baseline(const Network& net, const CgConfig& cfg, const CgHooks& hooks = {});

struct CollectResult {
  CgResult run;
  ArcMask arc_labels;  // y_a over the full network's arcs
  double positive_fraction() const;
};

/// Baseline trajectory; additionally marks every arc used by a generated
/// column (seeds excluded).
CollectResult run_collect(const Network& net, const CgConfig& cfg, const CgHooks& hooks = {});

/// Reduced-network pricing with fallback to the full network. For
/// Strategy::ml_redcost_s the reduced-cost filter is also applied to
/// whichever network is active.
CgResult run_ml(const Network& net, const CgConfig& cfg, std::span<const std::uint8_t> keep,
                const CgHooks& hooks = {});

/// Per-iteration reduced-cost arc filtering with level escalation.
CgResult run_redcost(const Network& net, const CgConfig& cfg, const CgHooks& hooks = {});

/// Uniformly random mask over `arc_count` selectable slots with exactly
/// `keep_count` entries set.
ArcMask select_random(int keep_count, int arc_count, std::uint64_t seed);

/// Smallest uniform per-node quota q such that the union of each customer's
/// q cheapest incoming and q cheapest outgoing selectable arcs has at least
/// `target_count` arcs. Mask indexed by the network's arcs.
ArcMask select_cost(const Network& net, int target_count);
/// Union of every customer's `quota` cheapest in/out selectable arcs.
ArcMask cost_mask(const Network& net, int quota);

/// Mask over `net`'s arcs keeping, for every customer, its `level` lowest
/// modified-cost incoming and outgoing arcs.
ArcMask redcost_mask(const Network& net, std::span<const PricedArc> priced, int level);

/// Expands a mask over selectable arcs (in arc-id order) to a mask over all
/// arcs; depot arcs get 0.
ArcMask expand_selectable(const Network& net, std::span<const std::uint8_t> selectable_mask);
/// Restriction of a full mask to selectable arcs, in arc-id order.
ArcMask restrict_selectable(const Network& net, std::span<const std::uint8_t> mask);

}  // namespace mlcg
