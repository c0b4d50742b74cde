#include "mlcg/rmp.hpp"

#include <ostream>
#include <stdexcept>
#include <string>

namespace mlcg {

RmpState::RmpState(int rows, SimplexOptions options)
    : rows_(rows), lp_(std::vector<double>(static_cast<std::size_t>(rows), 1.0), options) {}

std::size_t RmpState::add_columns(std::vector<Column> cols) {
  std::size_t added = 0;
  for (auto& col : cols) {
    for (const auto& [row, value] : col.coeffs) {
      if (row < 0 || row >= rows_) throw std::out_of_range("column covers unknown master row");
      (void)value;
    }
    if (by_route_.contains(col.route)) continue;
    col.id = lp_.add_column(col.cost, col.coeffs);
    by_route_.emplace(col.route, col.id);
    columns_.push_back(std::move(col));
    ++added;
  }
  return added;
}

LpSolution RmpState::solve() {
  if (!basis_set_) throw std::logic_error("master has no initial basis; use init_rmp");
  lp_.solve();
  LpSolution sol;
  sol.objective = lp_.objective();
  sol.primal = lp_.primal();
  sol.duals.assign(lp_.duals().begin(), lp_.duals().end());
  sol.iterations = lp_.last_solve_pivots();
  return sol;
}

void RmpState::write_lp(std::ostream& out) const {
  auto var = [](int j) { return "x" + std::to_string(j); };
  out.precision(17);
  out << "\\ restricted master, " << columns_.size() << " columns\nMinimize\n obj:";
  for (const auto& c : columns_) out << " + " << c.cost << ' ' << var(c.id);
  out << "\nSubject To\n";
  std::vector<std::vector<std::pair<int, double>>> rows(static_cast<std::size_t>(rows_));
  for (const auto& c : columns_) {
    for (const auto& [row, value] : c.coeffs) rows[static_cast<std::size_t>(row)].emplace_back(c.id, value);
  }
  for (int i = 0; i < rows_; ++i) {
    out << " cover_" << i << ':';
    for (const auto& [j, value] : rows[static_cast<std::size_t>(i)]) out << " + " << value << ' ' << var(j);
    out << " = 1\n";
  }
  out << "Bounds\n";
  for (const auto& c : columns_) out << ' ' << var(c.id) << " >= 0\n";
  out << "End\n";
}

Column column_from_route(const Network& net, std::span<const int> route) {
  if (route.size() < 2 || route.front() != net.source() || route.back() != net.sink()) {
    throw std::invalid_argument("route must run from source to sink");
  }
  Column col;
  col.route.assign(route.begin(), route.end());
  std::map<int, double> rows;
  for (std::size_t k = 0; k + 1 < route.size(); ++k) {
    int found = -1;
    for (int a : net.out_arcs(route[k])) {
      if (net.arc(a).head == route[k + 1]) {
        found = a;
        break;
      }
    }
    if (found < 0) {
      throw std::invalid_argument("no arc " + std::to_string(route[k]) + "->" +
                                  std::to_string(route[k + 1]) + " in network");
    }
    const auto& arc = net.arc(found);
    col.arcs.push_back(net.parent_arc_id(found));
    col.cost += arc.cost;
    if (arc.covered_row) rows[*arc.covered_row] += 1.0;
  }
  col.coeffs.assign(rows.begin(), rows.end());
  return col;
}

RmpState init_rmp(const Network& net, SimplexOptions options) {
  RmpState state(net.row_count(), options);
  std::vector<Column> seeds;
  for (int i = 1; i <= net.customer_count(); ++i) {
    const int route[] = {net.source(), i, net.sink()};
    seeds.push_back(column_from_route(net, route));
  }
  state.add_columns(std::move(seeds));
  std::vector<int> basis(static_cast<std::size_t>(net.row_count()));
  for (int i = 0; i < net.row_count(); ++i) basis[static_cast<std::size_t>(i)] = i;
  state.lp_.set_basis(std::move(basis));
  state.basis_set_ = true;
  return state;
}

std::size_t add_columns(RmpState& state, std::vector<Column> cols) {
  return state.add_columns(std::move(cols));
}

LpSolution solve_lp(RmpState& state) { return state.solve(); }

}  // namespace mlcg
