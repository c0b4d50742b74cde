#include "mlcg/simplex.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace mlcg {

RevisedSimplex::RevisedSimplex(std::vector<double> rhs, SimplexOptions options)
    : m_(static_cast<int>(rhs.size())), rhs_(std::move(rhs)), opt_(options) {
  if (m_ < 1) throw std::invalid_argument("LP needs at least one row");
}

int RevisedSimplex::add_column(double cost, SparseColumn coeffs) {
  for (const auto& [row, value] : coeffs) {
    if (row < 0 || row >= m_) throw std::out_of_range("column row out of range");
    (void)value;
  }
  costs_.push_back(cost);
  cols_.push_back(std::move(coeffs));
  position_.push_back(-1);
  return static_cast<int>(costs_.size()) - 1;
}

void RevisedSimplex::set_basis(std::vector<int> basic_columns) {
  if (basic_columns.size() != static_cast<std::size_t>(m_)) {
    throw std::invalid_argument("basis needs one column per row");
  }
  for (int& p : position_) p = -1;
  for (std::size_t i = 0; i < basic_columns.size(); ++i) {
    const int j = basic_columns[i];
    if (j < 0 || j >= columns() || position_[static_cast<std::size_t>(j)] >= 0) {
      throw std::invalid_argument("invalid or repeated basic column");
    }
    position_[static_cast<std::size_t>(j)] = static_cast<int>(i);
  }
  basis_ = std::move(basic_columns);
  refactor();
  for (double x : xb_) {
    if (x < -opt_.feasibility_tol) throw std::invalid_argument("initial basis is not primal feasible");
  }
  compute_duals();
}

void RevisedSimplex::refactor() {
  const auto m = static_cast<std::size_t>(m_);
  // Gauss-Jordan on [B | I] with partial pivoting.
  std::vector<double> b(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto& [row, value] : cols_[static_cast<std::size_t>(basis_[i])]) {
      b[static_cast<std::size_t>(row) * m + i] += value;
    }
  }
  binv_.assign(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) binv_[i * m + i] = 1.0;
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < m; ++r) {
      if (std::abs(b[r * m + c]) > std::abs(b[piv * m + c])) piv = r;
    }
    if (std::abs(b[piv * m + c]) < 1e-12) throw SimplexStall("singular basis matrix");
    if (piv != c) {
      for (std::size_t k = 0; k < m; ++k) {
        std::swap(b[piv * m + k], b[c * m + k]);
        std::swap(binv_[piv * m + k], binv_[c * m + k]);
      }
    }
    const double inv = 1.0 / b[c * m + c];
    for (std::size_t k = 0; k < m; ++k) {
      b[c * m + k] *= inv;
      binv_[c * m + k] *= inv;
    }
    for (std::size_t r = 0; r < m; ++r) {
      if (r == c) continue;
      const double f = b[r * m + c];
      if (f == 0.0) continue;
      for (std::size_t k = 0; k < m; ++k) {
        b[r * m + k] -= f * b[c * m + k];
        binv_[r * m + k] -= f * binv_[c * m + k];
      }
    }
  }
  xb_.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < m; ++k) s += binv_[i * m + k] * rhs_[k];
    xb_[i] = s;
  }
}

void RevisedSimplex::compute_duals() {
  duals_.assign(static_cast<std::size_t>(m_), 0.0);
  objective_ = 0.0;
  for (int i = 0; i < m_; ++i) {
    const double cb = costs_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])];
    objective_ += cb * xb_[static_cast<std::size_t>(i)];
    if (cb == 0.0) continue;
    for (int j = 0; j < m_; ++j) duals_[static_cast<std::size_t>(j)] += cb * binv(i, j);
  }
}

double RevisedSimplex::reduced_cost(int column) const {
  double d = costs_[static_cast<std::size_t>(column)];
  for (const auto& [row, value] : cols_[static_cast<std::size_t>(column)]) {
    d -= duals_[static_cast<std::size_t>(row)] * value;
  }
  return d;
}

std::vector<double> RevisedSimplex::primal() const {
  std::vector<double> x(costs_.size(), 0.0);
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    x[static_cast<std::size_t>(basis_[i])] = std::max(0.0, xb_[i]);
  }
  return x;
}

void RevisedSimplex::solve() {
  if (basis_.empty()) throw std::logic_error("simplex needs an initial basis");
  const long budget = opt_.max_pivots > 0 ? opt_.max_pivots
                                          : 200L * (m_ + columns()) + 10000L;
  const auto m = static_cast<std::size_t>(m_);
  std::vector<double> u(m);
  long pivots = 0;
  int since_refactor = 0;
  int degenerate_run = 0;
  refactor();

  while (true) {
    compute_duals();
    const bool bland = degenerate_run >= opt_.bland_after_degenerate;
    int enter = -1;
    double best = -opt_.optimality_tol;
    for (int j = 0; j < columns(); ++j) {
      if (position_[static_cast<std::size_t>(j)] >= 0) continue;
      const double d = reduced_cost(j);
      if (d >= -opt_.optimality_tol) continue;
      if (bland) {
        enter = j;
        break;
      }
      if (d < best) {
        best = d;
        enter = j;
      }
    }
    if (enter < 0) {
      if (since_refactor > 0) {  // confirm optimality on a fresh inverse
        refactor();
        since_refactor = 0;
        continue;
      }
      break;
    }

    std::fill(u.begin(), u.end(), 0.0);
    for (const auto& [row, value] : cols_[static_cast<std::size_t>(enter)]) {
      for (std::size_t i = 0; i < m; ++i) u[i] += binv_[i * m + static_cast<std::size_t>(row)] * value;
    }
    int leave = -1;
    double theta = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      if (u[i] <= opt_.pivot_tol) continue;
      const double ratio = std::max(0.0, xb_[i]) / u[i];
      bool take = false;
      if (leave < 0 || ratio < theta - 1e-12) {
        take = true;
      } else if (ratio <= theta + 1e-12) {
        take = bland ? basis_[i] < basis_[static_cast<std::size_t>(leave)]
                     : u[i] > u[static_cast<std::size_t>(leave)];
      }
      if (take) {
        leave = static_cast<int>(i);
        theta = std::min(theta, ratio);
      }
    }
    if (leave < 0) throw SimplexStall("LP is unbounded along column " + std::to_string(enter));

    const auto r = static_cast<std::size_t>(leave);
    for (std::size_t i = 0; i < m; ++i) {
      if (i != r) xb_[i] -= theta * u[i];
    }
    xb_[r] = theta;
    const double piv = u[r];
    for (std::size_t k = 0; k < m; ++k) binv_[r * m + k] /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || u[i] == 0.0) continue;
      const double f = u[i];
      for (std::size_t k = 0; k < m; ++k) binv_[i * m + k] -= f * binv_[r * m + k];
    }
    position_[static_cast<std::size_t>(basis_[r])] = -1;
    basis_[r] = enter;
    position_[static_cast<std::size_t>(enter)] = leave;

    degenerate_run = theta <= 1e-12 ? degenerate_run + 1 : 0;
    ++pivots;
    ++pivots_;
    if (++since_refactor >= opt_.refactor_every) {
      refactor();
      since_refactor = 0;
    }
    if (pivots > budget) {
      last_pivots_ = pivots;
      throw SimplexStall("simplex exceeded " + std::to_string(budget) +
                         " pivots with anti-cycling engaged");
    }
  }
  last_pivots_ = pivots;
  compute_duals();
}

}  // namespace mlcg
