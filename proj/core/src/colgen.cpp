#include "mlcg/colgen.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <stdexcept>
#include <string>

#include "mlcg/rng.hpp"

namespace mlcg {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::baseline: return "baseline";
    case Strategy::ml_s: return "ml_s";
    case Strategy::random_s: return "random_s";
    case Strategy::cost_s: return "cost_s";
    case Strategy::redcost_s: return "redcost_s";
    case Strategy::ml_redcost_s: return "ml_redcost_s";
  }
  return "?";
}

Strategy parse_strategy(std::string_view name) {
  for (auto s : {Strategy::baseline, Strategy::ml_s, Strategy::random_s, Strategy::cost_s,
                 Strategy::redcost_s, Strategy::ml_redcost_s}) {
    if (to_string(s) == name) return s;
  }
  throw std::invalid_argument("unknown strategy '" + std::string(name) + "'");
}

std::string_view to_string(NetworkTag tag) {
  return tag == NetworkTag::full ? "G" : "Gr";
}

void CgConfig::validate() const {
  if (eta_min > eta_max) throw std::invalid_argument("eta_min must not exceed eta_max");
  if (eta_max < 1) throw std::invalid_argument("eta_max must be at least 1");
  if (max_columns_per_iter < 1) throw std::invalid_argument("max_columns_per_iter must be at least 1");
  if (redcost_levels.empty() || redcost_levels.back() != kUnlimited) {
    throw std::invalid_argument("redcost levels must end with the unlimited level");
  }
  for (std::size_t k = 0; k < redcost_levels.size(); ++k) {
    if (redcost_levels[k] < 1) throw std::invalid_argument("redcost levels must be positive");
    if (k > 0 && redcost_levels[k] <= redcost_levels[k - 1]) {
      throw std::invalid_argument("redcost levels must be strictly increasing");
    }
  }
}

double CollectResult::positive_fraction() const {
  if (arc_labels.empty()) return 0.0;
  const auto ones = std::count_if(arc_labels.begin(), arc_labels.end(), [](auto v) { return v != 0; });
  return static_cast<double>(ones) / static_cast<double>(arc_labels.size());
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct PricingOutcome {
  std::vector<Column> columns;
  std::size_t labels = 0;
  double seconds = 0.0;
  int level = kUnlimited;
  int calls = 0;
};

class Driver {
 public:
  Driver(const Network& net, const CgConfig& cfg, const CgHooks& hooks)
      : net_(net), cfg_(cfg), hooks_(hooks), start_(Clock::now()), rmp_(init_rmp(net)) {
    cfg_.validate();
    limits_.max_columns = cfg.max_columns_per_iter;
    limits_.neg_eps = cfg.neg_eps;
    const auto t0 = Clock::now();
    lp_ = rmp_.solve();
    stats_.rmp_seconds += seconds_since(t0);
    if (hooks_.on_lp_solved) hooks_.on_lp_solved(rmp_, lp_);
  }

  /// Prices `active` trying each level in turn until one yields columns.
  PricingOutcome price(const Network& active, std::span<const int> levels) {
    PricingOutcome out;
    const auto t0 = Clock::now();
    const auto priced = price_arcs(active, lp_.duals);
    for (int level : levels) {
      PricingResult res;
      if (level == kUnlimited) {
        res = solve_pricing(active, priced, limits_);
      } else {
        const Network sub = reduce_network(active, redcost_mask(active, priced, level));
        res = solve_pricing(sub, price_arcs(sub, lp_.duals), limits_);
      }
      ++out.calls;
      out.labels += res.labels_created;
      out.level = level;
      out.columns = std::move(res.columns);
      if (!out.columns.empty()) break;
    }
    out.seconds = seconds_since(t0);
    return out;
  }

  void record(NetworkTag tag, PricingOutcome out) {
    if (static_cast<int>(stats_.per_iteration.size()) >= cfg_.max_iterations) {
      throw std::runtime_error("column generation exceeded " +
                               std::to_string(cfg_.max_iterations) + " iterations");
    }
    IterationRecord rec;
    rec.index = static_cast<int>(stats_.per_iteration.size());
    rec.network = tag;
    rec.level = out.level;
    rec.pricing_calls = out.calls;
    rec.columns = static_cast<int>(out.columns.size());
    rec.labels_created = out.labels;
    rec.pricing_seconds = out.seconds;
    rec.objective = lp_.objective;
    stats_.pp_seconds += out.seconds;
    if (!out.columns.empty()) {
      if (hooks_.on_columns_generated) hooks_.on_columns_generated(out.columns);
      const auto t0 = Clock::now();
      rmp_.add_columns(std::move(out.columns));
      lp_ = rmp_.solve();
      rec.rmp_seconds = seconds_since(t0);
      stats_.rmp_seconds += rec.rmp_seconds;
      if (hooks_.on_lp_solved) hooks_.on_lp_solved(rmp_, lp_);
    }
    if (tag == NetworkTag::full && rec.level == kUnlimited) ++stats_.full_network_iterations;
    stats_.per_iteration.push_back(rec);
  }

  CgResult finish() {
    stats_.iterations = static_cast<int>(stats_.per_iteration.size());
    stats_.total_seconds = seconds_since(start_);
    CgResult r;
    r.solution = lp_;
    r.stats = std::move(stats_);
    r.pool.assign(rmp_.columns().begin(), rmp_.columns().end());
    return r;
  }

 private:
  const Network& net_;
  CgConfig cfg_;
  const CgHooks& hooks_;
  Clock::time_point start_;
  PricingLimits limits_;
  RmpState rmp_;
  LpSolution lp_;
  RunStats stats_;
};

constexpr int kFullOnly[] = {kUnlimited};

}  // namespace

CgResult run_baseline(const Network& net, const CgConfig& cfg, const CgHooks& hooks) {
  Driver d(net, cfg, hooks);
  while (true) {
    auto out = d.price(net, kFullOnly);
    const bool done = out.columns.empty();
    d.record(NetworkTag::full, std::move(out));
    if (done) break;
  }
  return d.finish();
}

CollectResult run_collect(const Network& net, const CgConfig& cfg, const CgHooks& hooks) {
  CollectResult result;
  result.arc_labels.assign(static_cast<std::size_t>(net.arc_count()), 0);
  CgHooks wrapped = hooks;
  wrapped.on_columns_generated = [&](const std::vector<Column>& cols) {
    for (const auto& c : cols) {
      for (int a : c.arcs) result.arc_labels[static_cast<std::size_t>(a)] = 1;
    }
    if (hooks.on_columns_generated) hooks.on_columns_generated(cols);
  };
  result.run = run_baseline(net, cfg, wrapped);
  return result;
}

CgResult run_ml(const Network& net, const CgConfig& cfg, std::span<const std::uint8_t> keep,
                const CgHooks& hooks) {
  if (net.is_reduced()) throw std::invalid_argument("run_ml expects the full network");
  const Network reduced = reduce_network(net, keep);
  const bool filtered = cfg.strategy == Strategy::ml_redcost_s;
  const std::span<const int> levels =
      filtered ? std::span<const int>(cfg.redcost_levels) : std::span<const int>(kFullOnly);

  Driver d(net, cfg, hooks);
  bool use_reduced = true;
  bool reduced_disabled = false;
  while (true) {
    const NetworkTag tag = use_reduced ? NetworkTag::reduced : NetworkTag::full;
    auto out = d.price(use_reduced ? reduced : net, levels);
    const int found = static_cast<int>(out.columns.size());
    bool done = false;
    if (found < cfg.eta_min && use_reduced) {
      use_reduced = false;
      if (cfg.disable_reduced_after_first_failure) reduced_disabled = true;
    } else if (found >= cfg.eta_max && !use_reduced && !reduced_disabled) {
      use_reduced = true;
    } else if (found == 0 && !use_reduced) {
      done = true;
    }
    d.record(tag, std::move(out));
    if (done) break;
  }
  return d.finish();
}

CgResult run_redcost(const Network& net, const CgConfig& cfg, const CgHooks& hooks) {
  Driver d(net, cfg, hooks);
  while (true) {
    auto out = d.price(net, cfg.redcost_levels);
    const bool done = out.columns.empty();
    d.record(NetworkTag::full, std::move(out));
    if (done) break;
  }
  return d.finish();
}

ArcMask select_random(int keep_count, int arc_count, std::uint64_t seed) {
  if (keep_count < 0 || keep_count > arc_count) {
    throw std::invalid_argument("keep_count must lie in [0, arc_count]");
  }
  std::vector<int> order(static_cast<std::size_t>(arc_count));
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(seed, "random_s"));
  std::shuffle(order.begin(), order.end(), rng);
  ArcMask mask(static_cast<std::size_t>(arc_count), 0);
  for (int k = 0; k < keep_count; ++k) mask[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = 1;
  return mask;
}

namespace {

// Keeps the `quota` best arcs of `ids` under `key`, ties by arc id.
template <typename Key>
void keep_best(std::vector<int> ids, int quota, Key key, ArcMask& mask) {
  const auto q = std::min<std::size_t>(ids.size(), static_cast<std::size_t>(quota));
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(q), ids.end(),
                    [&](int a, int b) {
                      const double ka = key(a), kb = key(b);
                      return ka != kb ? ka < kb : a < b;
                    });
  for (std::size_t k = 0; k < q; ++k) mask[static_cast<std::size_t>(ids[k])] = 1;
}

template <typename Key>
ArcMask per_node_mask(const Network& net, int quota, Key key) {
  ArcMask mask(static_cast<std::size_t>(net.arc_count()), 0);
  for (int v = 1; v <= net.customer_count(); ++v) {
    std::vector<int> out, in;
    for (int a : net.out_arcs(v)) {
      if (net.is_selectable(a)) out.push_back(a);
    }
    for (int a : net.in_arcs(v)) {
      if (net.is_selectable(a)) in.push_back(a);
    }
    keep_best(std::move(out), quota, key, mask);
    keep_best(std::move(in), quota, key, mask);
  }
  return mask;
}

}  // namespace

ArcMask cost_mask(const Network& net, int quota) {
  return per_node_mask(net, quota, [&](int a) { return net.arc(a).cost; });
}

ArcMask select_cost(const Network& net, int target_count) {
  if (target_count > net.selectable_count()) {
    throw std::invalid_argument("target count exceeds the number of selectable arcs");
  }
  int max_degree = 0;
  for (int v = 1; v <= net.customer_count(); ++v) {
    max_degree = std::max({max_degree, static_cast<int>(net.out_arcs(v).size()),
                           static_cast<int>(net.in_arcs(v).size())});
  }
  for (int q = 0; q <= max_degree; ++q) {
    ArcMask mask = cost_mask(net, q);
    if (std::count(mask.begin(), mask.end(), 1) >= target_count) return mask;
  }
  return cost_mask(net, max_degree);
}

ArcMask redcost_mask(const Network& net, std::span<const PricedArc> priced, int level) {
  if (priced.size() != static_cast<std::size_t>(net.arc_count())) {
    throw std::invalid_argument("priced arcs not aligned with the network");
  }
  return per_node_mask(net, level, [&](int a) { return priced[static_cast<std::size_t>(a)].modified_cost; });
}

ArcMask expand_selectable(const Network& net, std::span<const std::uint8_t> selectable_mask) {
  if (selectable_mask.size() != static_cast<std::size_t>(net.selectable_count())) {
    throw std::invalid_argument("mask must have one entry per selectable arc");
  }
  ArcMask mask(static_cast<std::size_t>(net.arc_count()), 0);
  std::size_t k = 0;
  for (const auto& a : net.arcs()) {
    if (net.is_selectable(a.id)) mask[static_cast<std::size_t>(a.id)] = selectable_mask[k++];
  }
  return mask;
}

ArcMask restrict_selectable(const Network& net, std::span<const std::uint8_t> mask) {
  if (mask.size() != static_cast<std::size_t>(net.arc_count())) {
    throw std::invalid_argument("mask must have one entry per arc");
  }
  ArcMask out;
  for (const auto& a : net.arcs()) {
    if (net.is_selectable(a.id)) out.push_back(mask[static_cast<std::size_t>(a.id)]);
  }
  return out;
}

}  // namespace mlcg
