#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mlcg::oracle {

namespace {

struct Dfs {
  const Network& net;
  std::size_t limit;
  std::vector<Route> out;
  std::vector<int> nodes;
  std::vector<int> arcs;

  void visit(int node, double time, double load) {
    if (node == net.sink()) {
      if (out.size() >= limit) throw std::runtime_error("route enumeration limit exceeded");
      out.push_back(Route{nodes, arcs});
      return;
    }
    for (const auto& a : net.arcs()) {
      if (a.tail != node) continue;
      if (nodes.size() >= 2 && a.head == nodes[nodes.size() - 2]) continue;
      const auto& h = net.node(a.head);
      const double t = std::max(h.window_lo[kTime], time + a.consumption[kTime]);
      const double l = std::max(h.window_lo[kLoad], load + a.consumption[kLoad]);
      if (t > h.window_hi[kTime] || l > h.window_hi[kLoad]) continue;
      nodes.push_back(a.head);
      arcs.push_back(a.id);
      visit(a.head, t, l);
      nodes.pop_back();
      arcs.pop_back();
    }
  }
};

}  // namespace

std::vector<Route> enumerate_routes(const Network& net, std::size_t limit) {
  Dfs dfs{net, limit, {}, {net.source()}, {}};
  const auto& s = net.node(net.source());
  dfs.visit(net.source(), s.window_lo[kTime], s.window_lo[kLoad]);
  return std::move(dfs.out);
}

double best_reduced_cost(const Network& net, std::span<const Route> routes,
                         std::span<const double> duals) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : routes) {
    double rc = 0.0;
    for (int id : r.arcs) {
      const auto& a = net.arc(id);
      rc += a.head == net.sink() ? a.cost : a.cost - duals[static_cast<std::size_t>(a.head - 1)];
    }
    best = std::min(best, rc);
  }
  return best;
}

double route_cost(const Network& net, const Route& r) {
  double c = 0.0;
  for (std::size_t k = 0; k + 1 < r.nodes.size(); ++k) {
    const auto& a = net.node(r.nodes[k]);
    const auto& b = net.node(r.nodes[k + 1]);
    c += std::hypot(a.x - b.x, a.y - b.y);
  }
  return c;
}

std::vector<double> route_coverage(const Network& net, const Route& r) {
  std::vector<double> cov(static_cast<std::size_t>(net.customer_count()), 0.0);
  for (int v : r.nodes) {
    if (v != net.source() && v != net.sink()) cov[static_cast<std::size_t>(v - 1)] += 1.0;
  }
  return cov;
}

LpResult tableau_lp(const std::vector<std::vector<double>>& columns, std::span<const double> b,
                    std::span<const double> c) {
  const std::size_t m = b.size();
  const std::size_t n = columns.size();
  const std::size_t width = n + m + 1;  // structural, artificial, rhs
  std::vector<std::vector<double>> t(m, std::vector<double>(width, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t[i][j] = columns[j][i];
    t[i][n + i] = 1.0;
    t[i][width - 1] = b[i];
  }
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;
  constexpr double eps = 1e-10;

  auto pivot = [&](std::size_t r, std::size_t col) {
    const double p = t[r][col];
    for (double& v : t[r]) v /= p;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || t[i][col] == 0.0) continue;
      const double f = t[i][col];
      for (std::size_t j = 0; j < width; ++j) t[i][j] -= f * t[r][j];
    }
    basis[r] = col;
  };
  // Bland's rule on costs `cost` over columns [0, allowed).
  auto optimize = [&](const std::vector<double>& cost, std::size_t allowed) {
    while (true) {
      std::size_t enter = width;
      for (std::size_t j = 0; j < allowed; ++j) {
        double rc = cost[j];
        for (std::size_t i = 0; i < m; ++i) rc -= cost[basis[i]] * t[i][j];
        if (rc < -eps) {
          enter = j;
          break;
        }
      }
      if (enter == width) return;
      std::size_t leave = m;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m; ++i) {
        if (t[i][enter] > eps) {
          const double ratio = t[i][width - 1] / t[i][enter];
          if (ratio < best - eps || (leave < m && std::abs(ratio - best) <= eps && basis[i] < basis[leave])) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave == m) throw std::runtime_error("oracle LP unbounded");
      pivot(leave, enter);
    }
  };

  std::vector<double> phase1(n + m, 0.0);
  for (std::size_t i = 0; i < m; ++i) phase1[n + i] = 1.0;
  optimize(phase1, n + m);
  double infeas = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] >= n) infeas += t[i][width - 1];
  }
  LpResult res;
  if (infeas > 1e-8) return res;
  // Drive remaining (zero-level) artificials out where possible.
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(t[i][j]) > eps) {
        pivot(i, j);
        break;
      }
    }
  }
  std::vector<double> phase2(n + m, 0.0);
  for (std::size_t j = 0; j < n; ++j) phase2[j] = c[j];
  optimize(phase2, n);

  res.feasible = true;
  res.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) res.x[basis[i]] = t[i][width - 1];
  }
  for (std::size_t j = 0; j < n; ++j) res.objective += c[j] * res.x[j];
  // pi' = c_B' B^-1; B^-1 sits in the artificial block of the tableau.
  res.duals.assign(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t i = 0; i < m; ++i) res.duals[k] += phase2[basis[i]] * t[i][n + k];
  }
  return res;
}

double all_routes_lp_objective(const Network& net) {
  const auto routes = enumerate_routes(net);
  std::vector<std::vector<double>> cols;
  std::vector<double> costs;
  for (const auto& r : routes) {
    cols.push_back(route_coverage(net, r));
    costs.push_back(route_cost(net, r));
  }
  const std::vector<double> b(static_cast<std::size_t>(net.row_count()), 1.0);
  const auto res = tableau_lp(cols, b, costs);
  if (!res.feasible) throw std::runtime_error("oracle master LP infeasible");
  return res.objective;
}

bool arc_should_exist(const VrptwInstance& inst, int i, int j) {
  const int n = static_cast<int>(inst.customers.size());
  if (i == j || i == n + 1 || j == 0 || (i == 0 && j == n + 1)) return false;
  struct P { double x, y, demand, ready, due, service; };
  auto at = [&](int v) {
    if (v == 0 || v == n + 1) return P{inst.depot.x, inst.depot.y, 0.0, inst.depot.ready, inst.depot.due, 0.0};
    const auto& c = inst.customers[static_cast<std::size_t>(v - 1)];
    return P{c.x, c.y, c.demand, c.ready, c.due, c.service};
  };
  const P a = at(i), b = at(j);
  const double travel = std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y));
  return a.ready + a.service + travel <= b.due && a.demand + b.demand <= inst.capacity;
}

}  // namespace mlcg::oracle
