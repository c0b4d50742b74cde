#include "mlcg/network.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mlcg {
namespace {

void build_csr(int n, const std::vector<ArcData>& arcs, bool by_tail,
               std::vector<int>& offsets, std::vector<int>& ids) {
  offsets.assign(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& a : arcs) ++offsets[static_cast<std::size_t>(by_tail ? a.tail : a.head) + 1];
  for (int i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  ids.assign(arcs.size(), 0);
  std::vector<int> fill(offsets.begin(), offsets.end() - 1);
  for (const auto& a : arcs) {
    ids[static_cast<std::size_t>(fill[static_cast<std::size_t>(by_tail ? a.tail : a.head)]++)] = a.id;
  }
}

}  // namespace

double distance(const NodeData& a, const NodeData& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

Network::Network(std::vector<NodeData> nodes, std::vector<ArcData> arcs,
                 std::vector<int> parent_arc_ids, bool is_reduced)
    : nodes_(std::move(nodes)),
      arcs_(std::move(arcs)),
      parent_arc_ids_(std::move(parent_arc_ids)),
      is_reduced_(is_reduced),
      parent_arc_count_(static_cast<int>(arcs_.size())) {
  const int n = static_cast<int>(nodes_.size());
  if (n < 3) throw std::invalid_argument("network needs a source, a sink and a customer");
  if (nodes_.front().kind != NodeKind::source || nodes_.back().kind != NodeKind::sink) {
    throw std::invalid_argument("node 0 must be the source and the last node the sink");
  }
  for (int i = 0; i < n; ++i) {
    const auto& nd = nodes_[static_cast<std::size_t>(i)];
    if (nd.id != i) throw std::invalid_argument("node ids must be dense");
    for (std::size_t r = 0; r < kResourceCount; ++r) {
      if (nd.window_lo[r] > nd.window_hi[r]) {
        throw std::invalid_argument("empty resource window at node " + std::to_string(i));
      }
    }
  }
  for (std::size_t k = 0; k < arcs_.size(); ++k) {
    const auto& a = arcs_[k];
    if (a.id != static_cast<int>(k)) throw std::invalid_argument("arc ids must be dense");
    if (a.tail < 0 || a.tail >= n || a.head < 0 || a.head >= n) {
      throw std::invalid_argument("arc endpoint out of range");
    }
    if (a.head == 0 || a.tail == n - 1 || a.tail == a.head) {
      throw std::invalid_argument("arc " + std::to_string(k) +
                                  " enters the source, leaves the sink or is a loop");
    }
  }
  if (is_reduced_ && parent_arc_ids_.size() != arcs_.size()) {
    throw std::invalid_argument("reduced network needs one parent id per arc");
  }
  build_csr(n, arcs_, true, out_offsets_, out_ids_);
  build_csr(n, arcs_, false, in_offsets_, in_ids_);
}

std::span<const int> Network::out_arcs(int node) const {
  const auto b = static_cast<std::size_t>(out_offsets_[static_cast<std::size_t>(node)]);
  const auto e = static_cast<std::size_t>(out_offsets_[static_cast<std::size_t>(node) + 1]);
  return std::span<const int>(out_ids_).subspan(b, e - b);
}

std::span<const int> Network::in_arcs(int node) const {
  const auto b = static_cast<std::size_t>(in_offsets_[static_cast<std::size_t>(node)]);
  const auto e = static_cast<std::size_t>(in_offsets_[static_cast<std::size_t>(node) + 1]);
  return std::span<const int>(in_ids_).subspan(b, e - b);
}

int Network::selectable_count() const {
  int count = 0;
  for (const auto& a : arcs_) count += (a.tail != source() && a.head != sink()) ? 1 : 0;
  return count;
}

Network build_network(const VrptwInstance& inst) {
  const int n = static_cast<int>(inst.customers.size());
  if (n < 1) throw std::invalid_argument("instance has no customers");
  if (!(inst.capacity > 0.0)) throw std::invalid_argument("vehicle capacity must be positive");
  if (inst.depot.ready > inst.depot.due) throw std::invalid_argument("invalid depot window");

  const double q = inst.capacity;
  std::vector<NodeData> nodes;
  nodes.reserve(static_cast<std::size_t>(n) + 2);
  auto depot_node = [&](int id, NodeKind kind) {
    NodeData d;
    d.id = id;
    d.kind = kind;
    d.window_lo = {inst.depot.ready, 0.0};
    d.window_hi = {inst.depot.due, q};
    d.x = inst.depot.x;
    d.y = inst.depot.y;
    return d;
  };
  nodes.push_back(depot_node(0, NodeKind::source));
  for (int i = 0; i < n; ++i) {
    const auto& c = inst.customers[static_cast<std::size_t>(i)];
    if (c.demand > q) {
      throw std::invalid_argument("customer " + std::to_string(c.id) +
                                  " demand exceeds vehicle capacity");
    }
    NodeData d;
    d.id = i + 1;
    d.kind = NodeKind::customer;
    d.window_lo = {c.ready, 0.0};
    d.window_hi = {c.due, q};
    d.demand = c.demand;
    d.service_time = c.service;
    d.x = c.x;
    d.y = c.y;
    nodes.push_back(d);
  }
  nodes.push_back(depot_node(n + 1, NodeKind::sink));

  const int sink = n + 1;
  auto make_arc = [&](int i, int j) {
    const auto& a = nodes[static_cast<std::size_t>(i)];
    const auto& b = nodes[static_cast<std::size_t>(j)];
    ArcData arc;
    arc.tail = i;
    arc.head = j;
    arc.cost = distance(a, b);
    arc.consumption = {a.service_time + arc.cost, b.demand};
    if (j != sink) arc.covered_row = j - 1;
    return arc;
  };
  auto feasible = [&](const ArcData& arc) {
    const auto& a = nodes[static_cast<std::size_t>(arc.tail)];
    const auto& b = nodes[static_cast<std::size_t>(arc.head)];
    return a.window_lo[kTime] + arc.consumption[kTime] <= b.window_hi[kTime] &&
           a.demand + b.demand <= q;
  };

  // Singleton routes must be feasible under the extension recurrence.
  for (int i = 1; i <= n; ++i) {
    const auto out = make_arc(0, i);
    const auto back = make_arc(i, sink);
    const auto& c = nodes[static_cast<std::size_t>(i)];
    const double t_i = std::max(c.window_lo[kTime], nodes[0].window_lo[kTime] + out.consumption[kTime]);
    const double t_back = std::max(nodes.back().window_lo[kTime], t_i + back.consumption[kTime]);
    if (t_i > c.window_hi[kTime] || t_back > nodes.back().window_hi[kTime]) {
      throw std::invalid_argument("customer " + std::to_string(inst.customers[static_cast<std::size_t>(i - 1)].id) +
                                  " cannot be served by a singleton route depot -> customer -> depot");
    }
  }

  std::vector<ArcData> arcs;
  for (int i = 0; i <= n; ++i) {
    for (int j = 1; j <= sink; ++j) {
      if (i == j || (i == 0 && j == sink)) continue;
      ArcData arc = make_arc(i, j);
      if (!feasible(arc)) continue;
      if (i != 0 && j != sink && !(arc.consumption[kTime] > 0.0)) {
        throw std::invalid_argument("arc " + std::to_string(i) + "->" + std::to_string(j) +
                                    " has no positive time consumption");
      }
      arc.id = static_cast<int>(arcs.size());
      arcs.push_back(arc);
    }
  }
  return Network(std::move(nodes), std::move(arcs));
}

Network reduce_network(const Network& full, std::span<const std::uint8_t> keep) {
  if (keep.size() != static_cast<std::size_t>(full.arc_count())) {
    throw std::invalid_argument("keep mask must have one entry per arc");
  }
  std::vector<ArcData> arcs;
  std::vector<int> parents;
  for (const auto& a : full.arcs()) {
    if (keep[static_cast<std::size_t>(a.id)] == 0 && full.is_selectable(a.id)) continue;
    ArcData copy = a;
    copy.id = static_cast<int>(arcs.size());
    arcs.push_back(copy);
    parents.push_back(full.parent_arc_id(a.id));
  }
  std::vector<NodeData> nodes(full.nodes().begin(), full.nodes().end());
  Network reduced(std::move(nodes), std::move(arcs), std::move(parents), true);
  reduced.parent_arc_count_ = full.is_reduced() ? full.parent_arc_count_ : full.arc_count();
  return reduced;
}

}  // namespace mlcg
