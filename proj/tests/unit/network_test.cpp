#include <gtest/gtest.h>

#include <set>
#include <utility>

#include "mlcg/instance.hpp"
#include "mlcg/network.hpp"
#include "oracles.hpp"

using namespace mlcg;

namespace {

VrptwInstance two_customers() {
  VrptwInstance inst;
  inst.name = "two";
  inst.capacity = 10;
  inst.depot = Depot{0, 0, 0, 100};
  inst.customers = {Customer{1, 3, 4, 4, 0, 50, 1}, Customer{2, 6, 8, 5, 0, 50, 1}};
  return inst;
}

}  // namespace

TEST(BuildNetwork, TwoCustomerStructure) {
  const auto net = build_network(two_customers());
  EXPECT_EQ(net.node_count(), 4);
  EXPECT_EQ(net.source(), 0);
  EXPECT_EQ(net.sink(), 3);
  // s->1, s->2, 1->2, 1->t, 2->1, 2->t ; no s->t
  EXPECT_EQ(net.arc_count(), 6);
  for (const auto& a : net.arcs()) {
    EXPECT_FALSE(a.tail == net.source() && a.head == net.sink());
    EXPECT_NE(a.head, net.source());
    EXPECT_NE(a.tail, net.sink());
  }
  EXPECT_EQ(net.selectable_count(), 2);
  EXPECT_EQ(net.capacity(), 10.0);
}

TEST(BuildNetwork, ArcCostAndConsumption) {
  const auto net = build_network(two_customers());
  for (const auto& a : net.arcs()) {
    if (a.tail == 1 && a.head == 2) {
      EXPECT_DOUBLE_EQ(a.cost, 5.0);
      EXPECT_DOUBLE_EQ(a.consumption[kTime], 1.0 + 5.0);  // service(tail) + travel
      EXPECT_DOUBLE_EQ(a.consumption[kLoad], 5.0);        // demand(head)
      EXPECT_EQ(a.covered_row, 1);
    }
    if (a.head == net.sink()) {
      EXPECT_FALSE(a.covered_row.has_value());
    }
  }
}

TEST(BuildNetwork, PrunesByLoad) {
  auto inst = two_customers();
  inst.customers[1].demand = 7;  // 4 + 7 > 10
  const auto net = build_network(inst);
  EXPECT_EQ(net.selectable_count(), 0);
}

TEST(BuildNetwork, PrunesByTime) {
  auto inst = two_customers();
  inst.customers[0].ready = 40;  // 40 + 1 + 5 > due of customer 2 (=45)?
  inst.customers[1].due = 45;
  const auto net = build_network(inst);
  bool has12 = false, has21 = false;
  for (const auto& a : net.arcs()) {
    has12 |= a.tail == 1 && a.head == 2;
    has21 |= a.tail == 2 && a.head == 1;
  }
  EXPECT_FALSE(has12);
  EXPECT_TRUE(has21);
}

TEST(BuildNetwork, InfeasibleSingletonNamesTheCustomer) {
  auto inst = two_customers();
  inst.customers[1].due = 2;  // unreachable before distance 10
  try {
    build_network(inst);
    FAIL() << "expected rejection";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("customer 2"), std::string::npos) << e.what();
  }
}

TEST(BuildNetwork, RejectsZeroTimeCustomerArcs) {
  auto inst = two_customers();
  inst.customers[1].x = 3;
  inst.customers[1].y = 4;
  inst.customers[0].service = 0;
  inst.customers[1].service = 0;
  EXPECT_THROW(build_network(inst), std::invalid_argument);
}

TEST(BuildNetwork, ArcSetMatchesBruteForceScan) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    GeneratorParams p;
    p.layout = static_cast<Layout>(seed % 3);
    p.capacity = 40;
    const auto inst = generate_random(12, seed, p);
    const auto net = build_network(inst);
    std::set<std::pair<int, int>> built;
    for (const auto& a : net.arcs()) built.emplace(a.tail, a.head);
    std::set<std::pair<int, int>> expected;
    const int n = static_cast<int>(inst.customers.size());
    for (int i = 0; i <= n + 1; ++i) {
      for (int j = 0; j <= n + 1; ++j) {
        if (oracle::arc_should_exist(inst, i, j)) expected.emplace(i, j);
      }
    }
    EXPECT_EQ(built, expected) << "seed " << seed;
  }
}

TEST(BuildNetwork, AdjacencyIsConsistent) {
  const auto net = build_network(generate_random(15, 4));
  std::size_t out_total = 0, in_total = 0;
  for (int v = 0; v < net.node_count(); ++v) {
    for (int a : net.out_arcs(v)) EXPECT_EQ(net.arc(a).tail, v);
    for (int a : net.in_arcs(v)) EXPECT_EQ(net.arc(a).head, v);
    out_total += net.out_arcs(v).size();
    in_total += net.in_arcs(v).size();
  }
  EXPECT_EQ(out_total, static_cast<std::size_t>(net.arc_count()));
  EXPECT_EQ(in_total, static_cast<std::size_t>(net.arc_count()));
  EXPECT_TRUE(net.in_arcs(net.source()).empty());
  EXPECT_TRUE(net.out_arcs(net.sink()).empty());
}

TEST(ReduceNetwork, KeepsDepotArcsAndSelectedArcs) {
  const auto full = build_network(generate_random(10, 2));
  ArcMask keep(static_cast<std::size_t>(full.arc_count()), 0);
  int selected = 0;
  for (const auto& a : full.arcs()) {
    if (full.is_selectable(a.id) && a.id % 3 == 0) {
      keep[static_cast<std::size_t>(a.id)] = 1;
      ++selected;
    }
  }
  const auto red = reduce_network(full, keep);
  EXPECT_TRUE(red.is_reduced());
  EXPECT_EQ(red.parent_arc_count(), full.arc_count());
  EXPECT_EQ(red.selectable_count(), selected);
  EXPECT_EQ(red.arc_count() - red.selectable_count(), full.arc_count() - full.selectable_count());
  for (const auto& a : red.arcs()) {
    const auto& p = full.arc(red.parent_arc_id(a.id));
    EXPECT_EQ(p.tail, a.tail);
    EXPECT_EQ(p.head, a.head);
    EXPECT_EQ(p.cost, a.cost);
  }
}

TEST(ReduceNetwork, EmptyMaskLeavesOnlyDepotArcs) {
  const auto full = build_network(generate_random(8, 6));
  const auto red = reduce_network(full, ArcMask(static_cast<std::size_t>(full.arc_count()), 0));
  EXPECT_EQ(red.selectable_count(), 0);
  EXPECT_EQ(red.arc_count(), 2 * full.customer_count());
}

TEST(ReduceNetwork, ComposesParentIds) {
  const auto full = build_network(generate_random(10, 12));
  const auto once = reduce_network(full, ArcMask(static_cast<std::size_t>(full.arc_count()), 1));
  ArcMask half(static_cast<std::size_t>(once.arc_count()), 0);
  for (int a = 0; a < once.arc_count(); a += 2) half[static_cast<std::size_t>(a)] = 1;
  const auto twice = reduce_network(once, half);
  EXPECT_EQ(twice.parent_arc_count(), full.arc_count());
  for (const auto& a : twice.arcs()) {
    const auto& p = full.arc(twice.parent_arc_id(a.id));
    EXPECT_EQ(p.tail, a.tail);
    EXPECT_EQ(p.head, a.head);
  }
}

TEST(ReduceNetwork, RejectsWrongMaskLength) {
  const auto full = build_network(generate_random(5, 1));
  EXPECT_THROW(reduce_network(full, ArcMask(3, 1)), std::invalid_argument);
}
