#pragma once

// Restricted master problem: the set-partitioning LP relaxation
//   min sum_p c_p x_p  s.t.  sum_p a_p x_p = 1,  x >= 0
// over the routes generated so far.

#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "mlcg/column.hpp"
#include "mlcg/network.hpp"
#include "mlcg/simplex.hpp"

namespace mlcg {

struct LpSolution {
  double objective = 0.0;
  std::vector<double> primal;  // indexed by column id
  std::vector<double> duals;   // indexed by master row
  long iterations = 0;         // simplex pivots of this solve
};

class RmpState {
 public:
  explicit RmpState(int rows, SimplexOptions options = {});

  int row_count() const { return rows_; }
  std::span<const Column> columns() const { return columns_; }
  const RevisedSimplex& lp() const { return lp_; }

  /// Appends routes not already pooled (exact node-sequence match) and
  /// returns how many were added. Ids are assigned here.
  std::size_t add_columns(std::vector<Column> cols);

  LpSolution solve();

  /// CPLEX-LP text of the current master, for cross-checking elsewhere.
  void write_lp(std::ostream& out) const;

 private:
  friend RmpState init_rmp(const Network&, SimplexOptions);

  int rows_;
  std::vector<Column> columns_;
  std::map<std::vector<int>, int> by_route_;
  RevisedSimplex lp_;
  bool basis_set_ = false;
};

/// Seeds one singleton route s -> i -> t per customer; those columns form
/// the initial (identity) basis.
RmpState init_rmp(const Network& net, SimplexOptions options = {});

std::size_t add_columns(RmpState& state, std::vector<Column> cols);
LpSolution solve_lp(RmpState& state);

/// Builds the column for an explicit node sequence through `net`, which
/// must contain every consecutive arc. Throws std::invalid_argument
/// otherwise.
Column column_from_route(const Network& net, std::span<const int> route);

}  // namespace mlcg
