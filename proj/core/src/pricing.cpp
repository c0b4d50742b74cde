#include "mlcg/pricing.hpp"

#include <algorithm>
#include <chrono>
#include <climits>
#include <functional>
#include <map>
#include <queue>
#include <stdexcept>

namespace mlcg {

std::vector<PricedArc> price_arcs(const Network& net, std::span<const double> duals) {
  if (duals.size() != static_cast<std::size_t>(net.row_count())) {
    throw std::invalid_argument("need one dual value per master row");
  }
  std::vector<PricedArc> priced;
  priced.reserve(static_cast<std::size_t>(net.arc_count()));
  for (const auto& a : net.arcs()) {
    double c = a.cost;
    if (a.covered_row) c -= duals[static_cast<std::size_t>(*a.covered_row)];
    priced.push_back(PricedArc{a.id, c});
  }
  return priced;
}

std::optional<Label> extend(const Label& label, const ArcData& arc,
                            const PricedArc& priced, const NodeData& head) {
  if (label.node != arc.tail) {
    throw std::logic_error("label at node " + std::to_string(label.node) +
                           " cannot extend along arc leaving node " +
                           std::to_string(arc.tail));
  }
  Label next;
  next.node = arc.head;
  next.rcost = label.rcost + priced.modified_cost;
  for (std::size_t r = 0; r < kResourceCount; ++r) {
    next.res[r] = std::max(head.window_lo[r], label.res[r] + arc.consumption[r]);
    if (next.res[r] > head.window_hi[r]) return std::nullopt;
  }
  next.pred_node = arc.tail;
  next.arc = arc.id;
  return next;
}

bool dominates(const Label& a, const Label& b) {
  if (a.node != b.node || a.rcost > b.rcost) return false;
  for (std::size_t r = 0; r < kResourceCount; ++r) {
    if (a.res[r] > b.res[r]) return false;
  }
  return true;
}

namespace {

Column make_column(const Network& net, const std::vector<Label>& pool, int sink_label) {
  Column col;
  std::vector<int> local_arcs;
  for (int k = sink_label; pool[static_cast<std::size_t>(k)].pred_label >= 0;
       k = pool[static_cast<std::size_t>(k)].pred_label) {
    local_arcs.push_back(pool[static_cast<std::size_t>(k)].arc);
  }
  std::reverse(local_arcs.begin(), local_arcs.end());
  std::map<int, double> rows;
  col.route.push_back(net.source());
  for (int a : local_arcs) {
    const auto& arc = net.arc(a);
    col.route.push_back(arc.head);
    col.arcs.push_back(net.parent_arc_id(a));
    col.cost += arc.cost;
    if (arc.covered_row) rows[*arc.covered_row] += 1.0;
  }
  col.coeffs.assign(rows.begin(), rows.end());
  col.rcost_at_birth = pool[static_cast<std::size_t>(sink_label)].rcost;
  return col;
}

}  // namespace

PricingResult solve_pricing(const Network& net, std::span<const PricedArc> priced,
                            const PricingLimits& limits) {
  const auto start = std::chrono::steady_clock::now();
  if (priced.size() != static_cast<std::size_t>(net.arc_count())) {
    throw std::invalid_argument("priced arcs not aligned with the network");
  }
  if (limits.max_columns < 1) throw std::invalid_argument("max_columns must be at least 1");

  PricingResult result;
  std::vector<Label> pool;
  std::vector<std::uint8_t> alive;
  std::vector<std::vector<int>> bucket(static_cast<std::size_t>(net.node_count()));
  std::vector<int> at_sink;
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;

  // Keep-two rule: L is redundant if a dominating label shares its
  // predecessor node, or two dominating labels have distinct predecessors.
  auto redundant = [&](const Label& l, int self) {
    int other_pred = INT_MIN;
    for (int m : bucket[static_cast<std::size_t>(l.node)]) {
      if (m == self) continue;
      const Label& d = pool[static_cast<std::size_t>(m)];
      if (!dominates(d, l)) continue;
      if (d.pred_node == l.pred_node) return true;
      if (other_pred == INT_MIN) {
        other_pred = d.pred_node;
      } else if (d.pred_node != other_pred) {
        return true;
      }
    }
    return false;
  };

  Label root;
  root.node = net.source();
  root.res = net.node(net.source()).window_lo;
  pool.push_back(root);
  alive.push_back(1);
  open.emplace(root.res[kTime], 0);

  const int sink = net.sink();
  while (!open.empty()) {
    const int idx = open.top().second;
    open.pop();
    if (!alive[static_cast<std::size_t>(idx)]) continue;
    const Label cur = pool[static_cast<std::size_t>(idx)];
    if (limits.use_dominance && idx != 0 && redundant(cur, idx)) {
      alive[static_cast<std::size_t>(idx)] = 0;
      auto& b = bucket[static_cast<std::size_t>(cur.node)];
      b.erase(std::find(b.begin(), b.end(), idx));
      ++result.labels_dominated;
      continue;
    }
    for (int a : net.out_arcs(cur.node)) {
      const ArcData& arc = net.arc(a);
      if (arc.head == cur.pred_node) continue;  // no i -> j -> i
      auto next = extend(cur, arc, priced[static_cast<std::size_t>(a)], net.node(arc.head));
      if (!next) continue;
      next->pred_label = idx;
      ++result.labels_created;
      if (arc.head == sink) {
        if (next->rcost < -limits.neg_eps) {
          at_sink.push_back(static_cast<int>(pool.size()));
          pool.push_back(*next);
          alive.push_back(0);
        }
        continue;
      }
      if (limits.use_dominance && redundant(*next, -1)) {
        ++result.labels_dominated;
        continue;
      }
      const int id = static_cast<int>(pool.size());
      pool.push_back(*next);
      alive.push_back(1);
      bucket[static_cast<std::size_t>(arc.head)].push_back(id);
      open.emplace(next->res[kTime], id);
    }
  }

  const auto limit = static_cast<std::size_t>(limits.max_columns);
  if (at_sink.size() > limit) {
    std::vector<double> costs;
    costs.reserve(at_sink.size());
    for (int k : at_sink) costs.push_back(pool[static_cast<std::size_t>(k)].rcost);
    std::nth_element(costs.begin(), costs.begin() + static_cast<std::ptrdiff_t>(limit - 1), costs.end());
    const double cutoff = costs[limit - 1];
    std::erase_if(at_sink, [&](int k) { return pool[static_cast<std::size_t>(k)].rcost > cutoff; });
  }
  result.columns.reserve(at_sink.size());
  for (int k : at_sink) result.columns.push_back(make_column(net, pool, k));
  std::sort(result.columns.begin(), result.columns.end(), [](const Column& a, const Column& b) {
    if (a.rcost_at_birth != b.rcost_at_birth) return a.rcost_at_birth < b.rcost_at_birth;
    return a.route < b.route;
  });
  if (result.columns.size() > limit) result.columns.resize(limit);

  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace mlcg
