#pragma once

#include <utility>
#include <vector>

namespace mlcg {

/// A route s -> customers... -> t usable as a master variable.
struct Column {
  int id = -1;                 // assigned when pooled in the master
  std::vector<int> route;      // node ids, source first, sink last
  std::vector<int> arcs;       // arc ids in the full network
  double cost = 0.0;
  std::vector<std::pair<int, double>> coeffs;  // (master row, visit count), rows ascending
  double rcost_at_birth = 0.0;
};

}  // namespace mlcg
