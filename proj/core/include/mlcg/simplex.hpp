#pragma once

// Dense revised primal simplex for   min c'x  s.t.  A x = b,  x >= 0.
//
// Columns are sparse and can be appended between solves; the basis and its
// explicit inverse are kept, so a re-solve after adding columns starts from
// the previous optimal (hence primal feasible) basis. The caller supplies
// an initial primal feasible basis. Dantzig pricing is used until a run of
// degenerate pivots exceeds a threshold, after which Bland's rule is used
// until the objective moves again.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mlcg {

struct SimplexOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
  int refactor_every = 64;
  int bland_after_degenerate = 50;
  long max_pivots = 0;  // 0: 200 * (rows + columns) + 10000
};

class SimplexStall : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RevisedSimplex {
 public:
  using SparseColumn = std::vector<std::pair<int, double>>;

  RevisedSimplex(std::vector<double> rhs, SimplexOptions options = {});

  int add_column(double cost, SparseColumn coeffs);
  /// Initial basis: one column per row, primal feasible. Checked.
  void set_basis(std::vector<int> basic_columns);

  /// Runs primal simplex to optimality. Throws SimplexStall when the pivot
  /// budget is exhausted or the basis becomes singular.
  void solve();

  int rows() const { return m_; }
  int columns() const { return static_cast<int>(costs_.size()); }
  double objective() const { return objective_; }
  std::vector<double> primal() const;
  std::span<const double> duals() const { return duals_; }
  std::span<const int> basis() const { return basis_; }
  long pivots() const { return pivots_; }
  long last_solve_pivots() const { return last_pivots_; }

  double reduced_cost(int column) const;
  double cost(int column) const { return costs_[static_cast<std::size_t>(column)]; }
  const SparseColumn& column(int j) const { return cols_[static_cast<std::size_t>(j)]; }

 private:
  void refactor();
  void compute_duals();
  double& binv(int i, int j) { return binv_[static_cast<std::size_t>(i * m_ + j)]; }
  double binv(int i, int j) const { return binv_[static_cast<std::size_t>(i * m_ + j)]; }

  int m_;
  std::vector<double> rhs_;
  SimplexOptions opt_;
  std::vector<double> costs_;
  std::vector<SparseColumn> cols_;
  std::vector<int> basis_;
  std::vector<int> position_;  // column -> basis row, -1 if nonbasic
  std::vector<double> binv_;
  std::vector<double> xb_;
  std::vector<double> duals_;
  double objective_ = 0.0;
  long pivots_ = 0;
  long last_pivots_ = 0;
};

}  // namespace mlcg
