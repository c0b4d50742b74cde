#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "mlcg/rmp.hpp"

using namespace mlcg;

TEST(Rmp, SingletonSeedsFormTheInitialSolution) {
  const auto net = build_network(fixtures::compact_instance(6, 1));
  auto rmp = init_rmp(net);
  EXPECT_EQ(rmp.row_count(), 6);
  ASSERT_EQ(rmp.columns().size(), 6u);
  const auto sol = solve_lp(rmp);
  double expected = 0.0;
  for (int i = 1; i <= 6; ++i) expected += 2.0 * distance(net.node(0), net.node(i));
  EXPECT_NEAR(sol.objective, expected, 1e-9);
  ASSERT_EQ(sol.duals.size(), 6u);
  for (int i = 1; i <= 6; ++i) {
    EXPECT_NEAR(sol.duals[static_cast<std::size_t>(i - 1)], 2.0 * distance(net.node(0), net.node(i)), 1e-9);
  }
  for (double x : sol.primal) EXPECT_NEAR(x, 1.0, 1e-12);
}

TEST(Rmp, DuplicateRoutesAreNotPooledTwice) {
  const auto net = build_network(fixtures::compact_instance(4, 2));
  auto rmp = init_rmp(net);
  std::vector<int> route{0, 1, 5};
  std::vector<Column> cols{column_from_route(net, route), column_from_route(net, route)};
  EXPECT_EQ(add_columns(rmp, cols), 0u);  // already a seed
  EXPECT_EQ(rmp.columns().size(), 4u);
}

TEST(Rmp, ColumnFromRouteBuildsCoefficients) {
  VrptwInstance inst;
  inst.capacity = 100;
  inst.depot = Depot{0, 0, 0, 1000};
  inst.customers = {Customer{1, 0, 3, 1, 0, 1000, 1}, Customer{2, 4, 3, 1, 0, 1000, 1},
                    Customer{3, 4, 0, 1, 0, 1000, 1}};
  const auto net = build_network(inst);
  const std::vector<int> route{0, 1, 2, 3, 1, 4};
  const auto c = column_from_route(net, route);
  EXPECT_DOUBLE_EQ(c.cost, 3 + 4 + 3 + 5 + 3);
  const std::vector<std::pair<int, double>> coeffs{{0, 2.0}, {1, 1.0}, {2, 1.0}};
  EXPECT_EQ(c.coeffs, coeffs);
  EXPECT_EQ(c.arcs.size(), 5u);
  EXPECT_THROW(column_from_route(net, std::vector<int>{0, 4}), std::invalid_argument);
  EXPECT_THROW(column_from_route(net, std::vector<int>{1, 2, 4}), std::invalid_argument);
}

TEST(Rmp, AddingABetterColumnLowersTheObjective) {
  VrptwInstance inst;
  inst.capacity = 100;
  inst.depot = Depot{0, 0, 0, 1000};
  inst.customers = {Customer{1, 0, 10, 1, 0, 1000, 1}, Customer{2, 1, 10, 1, 0, 1000, 1}};
  const auto net = build_network(inst);
  auto rmp = init_rmp(net);
  const double before = solve_lp(rmp).objective;
  EXPECT_EQ(add_columns(rmp, {column_from_route(net, std::vector<int>{0, 1, 2, 3})}), 1u);
  const auto sol = solve_lp(rmp);
  EXPECT_LT(sol.objective, before);
  EXPECT_NEAR(sol.objective, 10 + 1 + std::hypot(1.0, 10.0), 1e-9);
}

TEST(Rmp, WritesAnLpFile) {
  const auto net = build_network(fixtures::compact_instance(3, 3));
  auto rmp = init_rmp(net);
  std::ostringstream out;
  rmp.write_lp(out);
  const auto text = out.str();
  EXPECT_NE(text.find("Minimize"), std::string::npos);
  EXPECT_NE(text.find("Subject To"), std::string::npos);
  EXPECT_NE(text.find("= 1"), std::string::npos);
  EXPECT_NE(text.find("End"), std::string::npos);
}
