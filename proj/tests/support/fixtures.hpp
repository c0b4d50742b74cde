#pragma once

// Small seeded instances whose route sets stay enumerable.

#include <cstdint>
#include <random>
#include <vector>

#include "mlcg/instance.hpp"
#include "mlcg/network.hpp"

namespace mlcg::fixtures {

inline GeneratorParams compact_params(std::uint64_t seed) {
  GeneratorParams p;
  p.layout = static_cast<Layout>(seed % 3);
  p.capacity = 60;
  p.horizon = 260;
  p.min_width = 20;
  p.max_width = 90;
  return p;
}

inline VrptwInstance compact_instance(int customers, std::uint64_t seed) {
  return generate_random(customers, seed, compact_params(seed));
}

/// Duals around the singleton route costs, so that improving routes usually
/// exist but are not everywhere.
inline std::vector<double> random_duals(const Network& net, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> scale(0.2, 1.3);
  std::vector<double> duals(static_cast<std::size_t>(net.row_count()));
  for (int i = 1; i <= net.customer_count(); ++i) {
    duals[static_cast<std::size_t>(i - 1)] = 2.0 * distance(net.node(0), net.node(i)) * scale(rng);
  }
  return duals;
}

}  // namespace mlcg::fixtures
