#pragma once

// The VRPTW pricing network: source/sink depot copies, customers, arcs with
// costs and per-resource consumptions. Immutable once built.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mlcg/instance.hpp"

namespace mlcg {

inline constexpr std::size_t kTime = 0;
inline constexpr std::size_t kLoad = 1;
inline constexpr std::size_t kResourceCount = 2;

using Resources = std::array<double, kResourceCount>;

/// One entry per arc; nonzero means "keep". std::vector<bool> is avoided so
/// masks can be viewed as spans.
using ArcMask = std::vector<std::uint8_t>;

enum class NodeKind { source, customer, sink };

struct NodeData {
  int id = 0;
  NodeKind kind = NodeKind::customer;
  Resources window_lo{};
  Resources window_hi{};
  double demand = 0.0;
  double service_time = 0.0;
  double x = 0.0;
  double y = 0.0;
};

struct ArcData {
  int id = 0;
  int tail = 0;
  int head = 0;
  double cost = 0.0;
  Resources consumption{};
  // Master row covered when traversing the arc (the head customer's row).
  std::optional<int> covered_row;
};

class Network {
 public:
  /// Validates the structural invariants (no arcs into the source, out of
  /// the sink, no loops, consistent ids) and builds adjacency.
  Network(std::vector<NodeData> nodes, std::vector<ArcData> arcs,
          std::vector<int> parent_arc_ids = {}, bool is_reduced = false);

  std::span<const NodeData> nodes() const { return nodes_; }
  std::span<const ArcData> arcs() const { return arcs_; }
  const NodeData& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
  const ArcData& arc(int id) const { return arcs_[static_cast<std::size_t>(id)]; }
  std::span<const int> out_arcs(int node) const;
  std::span<const int> in_arcs(int node) const;

  int node_count() const { return static_cast<int>(nodes_.size()); }
  int arc_count() const { return static_cast<int>(arcs_.size()); }
  int customer_count() const { return node_count() - 2; }
  /// Number of master rows (one per customer).
  int row_count() const { return customer_count(); }
  int source() const { return 0; }
  int sink() const { return node_count() - 1; }
  double capacity() const { return nodes_.front().window_hi[kLoad]; }

  bool is_reduced() const { return is_reduced_; }
  /// Arc id in the full network this one was derived from (identity for a
  /// full network).
  int parent_arc_id(int arc_id) const {
    return is_reduced_ ? parent_arc_ids_[static_cast<std::size_t>(arc_id)] : arc_id;
  }
  std::span<const int> parent_arc_ids() const { return parent_arc_ids_; }
  /// Size of the arc set of the network this one was cut from.
  int parent_arc_count() const { return parent_arc_count_; }

  /// Customer-to-customer arcs; these are the only arcs subject to selection.
  bool is_selectable(int arc_id) const {
    const auto& a = arc(arc_id);
    return a.tail != source() && a.head != sink();
  }
  int selectable_count() const;

 private:
  friend Network reduce_network(const Network&, std::span<const std::uint8_t>);

  std::vector<NodeData> nodes_;
  std::vector<ArcData> arcs_;
  std::vector<int> out_offsets_, out_ids_;
  std::vector<int> in_offsets_, in_ids_;
  std::vector<int> parent_arc_ids_;
  bool is_reduced_ = false;
  int parent_arc_count_ = 0;
};

/// Full network: source -> customers, customer -> customer, customer -> sink.
/// Arcs failing the static time or load test are dropped. Throws
/// std::invalid_argument naming the customer when a singleton route is
/// infeasible.
Network build_network(const VrptwInstance& instance);

/// Sub-network keeping arcs with keep[a] != 0 plus every depot-incident arc.
/// `keep` is indexed by `full`'s arcs. Reducing an already reduced network
/// composes parent ids back to the original full network.
Network reduce_network(const Network& full, std::span<const std::uint8_t> keep);

/// Euclidean distance between two nodes.
double distance(const NodeData& a, const NodeData& b);

}  // namespace mlcg
