#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "mlcg/pricing.hpp"
#include "oracles.hpp"

using namespace mlcg;

namespace {

NodeData node_with_windows(int id, double t_lo, double t_hi, double q) {
  NodeData n;
  n.id = id;
  n.window_lo = {t_lo, 0.0};
  n.window_hi = {t_hi, q};
  return n;
}

}  // namespace

TEST(Extend, ClampsTimeToWindowStart) {
  Label l;
  l.node = 1;
  l.res = {10.0, 0.0};
  ArcData a;
  a.tail = 1;
  a.head = 2;
  a.consumption = {5.0, 1.0};
  const auto out = extend(l, a, PricedArc{0, -3.5}, node_with_windows(2, 20, 40, 10));
  ASSERT_TRUE(out);
  EXPECT_EQ(out->res[kTime], 20.0);
  EXPECT_EQ(out->res[kLoad], 1.0);
  EXPECT_EQ(out->node, 2);
  EXPECT_EQ(out->pred_node, 1);
  EXPECT_EQ(out->rcost, -3.5);
  EXPECT_EQ(out->pred_label, -1);
}

TEST(Extend, LoadOverCapacityIsInfeasible) {
  Label l;
  l.node = 1;
  l.res = {0.0, 8.0};
  ArcData a;
  a.tail = 1;
  a.head = 2;
  a.consumption = {1.0, 3.0};
  EXPECT_FALSE(extend(l, a, PricedArc{}, node_with_windows(2, 0, 100, 10)));
}

TEST(Extend, LateArrivalIsInfeasible) {
  Label l;
  l.node = 1;
  l.res = {38.0, 0.0};
  ArcData a;
  a.tail = 1;
  a.head = 2;
  a.consumption = {3.0, 0.0};
  EXPECT_FALSE(extend(l, a, PricedArc{}, node_with_windows(2, 20, 40, 10)));
}

TEST(Extend, NodeMismatchIsAProgrammingError) {
  Label l;
  l.node = 3;
  ArcData a;
  a.tail = 1;
  a.head = 2;
  EXPECT_THROW(extend(l, a, PricedArc{}, node_with_windows(2, 0, 1, 1)), std::logic_error);
}

TEST(Dominates, ComponentwiseDefinition) {
  Label a, b;
  a.node = b.node = 4;
  a.rcost = -2;
  a.res = {5, 3};
  b.rcost = -1;
  b.res = {6, 3};
  EXPECT_TRUE(dominates(a, b));
  EXPECT_FALSE(dominates(b, a));
  b.res[kLoad] = 2;
  EXPECT_FALSE(dominates(a, b));
}

TEST(Dominates, IsAPreorderOnRandomLabels) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> v(0, 3);
  std::vector<Label> labels(60);
  for (auto& l : labels) {
    l.node = 1;
    l.rcost = v(rng);
    l.res = {static_cast<double>(v(rng)), static_cast<double>(v(rng))};
  }
  for (const auto& a : labels) {
    EXPECT_TRUE(dominates(a, a));
    for (const auto& b : labels) {
      const bool expected = a.rcost <= b.rcost && a.res[0] <= b.res[0] && a.res[1] <= b.res[1];
      EXPECT_EQ(dominates(a, b), expected);
      for (const auto& c : labels) {
        if (dominates(a, b) && dominates(b, c)) EXPECT_TRUE(dominates(a, c));
      }
    }
  }
}

TEST(PriceArcs, SubtractsTheHeadRowDual) {
  const auto net = build_network(fixtures::compact_instance(4, 3));
  std::vector<double> duals{1, 2, 3, 4};
  const auto priced = price_arcs(net, duals);
  ASSERT_EQ(priced.size(), static_cast<std::size_t>(net.arc_count()));
  for (const auto& p : priced) {
    const auto& a = net.arc(p.arc_id);
    const double expect = a.head == net.sink() ? a.cost : a.cost - duals[static_cast<std::size_t>(a.head - 1)];
    EXPECT_EQ(p.modified_cost, expect);
  }
  EXPECT_THROW(price_arcs(net, std::vector<double>{1.0}), std::invalid_argument);
}

TEST(SolvePricing, MatchesExhaustiveEnumeration) {
  int with_columns = 0;
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto net = build_network(fixtures::compact_instance(3 + static_cast<int>(seed % 6), seed));
    const auto routes = oracle::enumerate_routes(net);
    const auto duals = fixtures::random_duals(net, seed * 7);
    const double best = oracle::best_reduced_cost(net, routes, duals);
    const auto res = solve_pricing(net, price_arcs(net, duals));
    if (best < -1e-6) {
      ASSERT_FALSE(res.columns.empty()) << "seed " << seed;
      EXPECT_EQ(res.columns.front().rcost_at_birth, best) << "seed " << seed;
      ++with_columns;
    } else {
      EXPECT_TRUE(res.columns.empty()) << "seed " << seed;
    }
  }
  EXPECT_GT(with_columns, 30);
}

TEST(SolvePricing, DominanceDoesNotChangeTheOptimum) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto net = build_network(fixtures::compact_instance(8, seed));
    const auto priced = price_arcs(net, fixtures::random_duals(net, seed));
    PricingLimits off;
    off.use_dominance = false;
    const auto with = solve_pricing(net, priced);
    const auto without = solve_pricing(net, priced, off);
    ASSERT_EQ(with.columns.empty(), without.columns.empty());
    if (!with.columns.empty()) {
      EXPECT_EQ(with.columns.front().rcost_at_birth, without.columns.front().rcost_at_birth);
    }
    EXPECT_LE(with.labels_created, without.labels_created);
  }
}

TEST(SolvePricing, ColumnsAreConsistentWithTheirArcs) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto net = build_network(fixtures::compact_instance(8, seed));
    const auto duals = fixtures::random_duals(net, seed + 100);
    const auto priced = price_arcs(net, duals);
    const auto res = solve_pricing(net, priced);
    double prev = -1e300;
    for (const auto& c : res.columns) {
      double rc = 0.0, cost = 0.0;
      ASSERT_EQ(c.arcs.size() + 1, c.route.size());
      for (std::size_t k = 0; k < c.arcs.size(); ++k) {
        const auto& a = net.arc(c.arcs[k]);
        EXPECT_EQ(a.tail, c.route[k]);
        EXPECT_EQ(a.head, c.route[k + 1]);
        rc += priced[static_cast<std::size_t>(a.id)].modified_cost;
        cost += a.cost;
        if (k >= 1) EXPECT_NE(c.route[k - 1], c.route[k + 1]) << "2-cycle in route";
      }
      EXPECT_NEAR(rc, c.rcost_at_birth, 1e-9);
      EXPECT_NEAR(cost, c.cost, 1e-9);
      EXPECT_LT(c.rcost_at_birth, -1e-6);
      EXPECT_GE(c.rcost_at_birth, prev);
      prev = c.rcost_at_birth;
      EXPECT_EQ(c.route.front(), net.source());
      EXPECT_EQ(c.route.back(), net.sink());
    }
  }
}

TEST(SolvePricing, TruncatesToTheBestColumns) {
  const auto net = build_network(fixtures::compact_instance(8, 4));
  const auto priced = price_arcs(net, fixtures::random_duals(net, 9));
  PricingLimits all;
  all.max_columns = 100000;
  PricingLimits few;
  few.max_columns = 3;
  const auto a = solve_pricing(net, priced, all);
  const auto b = solve_pricing(net, priced, few);
  ASSERT_GT(a.columns.size(), 3u);
  ASSERT_EQ(b.columns.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(a.columns[k].route, b.columns[k].route);
  }
}

TEST(SolvePricing, ZeroDualsGiveNoColumns) {
  const auto net = build_network(fixtures::compact_instance(6, 2));
  const std::vector<double> zero(static_cast<std::size_t>(net.row_count()), 0.0);
  EXPECT_TRUE(solve_pricing(net, price_arcs(net, zero)).columns.empty());
}

TEST(SolvePricing, ReducedNetworkReportsFullArcIds) {
  const auto full = build_network(fixtures::compact_instance(7, 5));
  ArcMask keep(static_cast<std::size_t>(full.arc_count()), 0);
  for (int a = 0; a < full.arc_count(); a += 2) keep[static_cast<std::size_t>(a)] = 1;
  const auto red = reduce_network(full, keep);
  const auto duals = fixtures::random_duals(full, 3);
  const auto res = solve_pricing(red, price_arcs(red, duals));
  for (const auto& c : res.columns) {
    for (std::size_t k = 0; k < c.arcs.size(); ++k) {
      const auto& a = full.arc(c.arcs[k]);
      EXPECT_EQ(a.tail, c.route[k]);
      EXPECT_EQ(a.head, c.route[k + 1]);
      EXPECT_TRUE(!full.is_selectable(a.id) || keep[static_cast<std::size_t>(a.id)]);
    }
  }
}
