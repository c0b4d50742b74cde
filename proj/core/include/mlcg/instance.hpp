#pragma once

// VRPTW benchmark instances: Solomon / Gehring-Homberger text format,
// time-window tightening and seeded synthetic generation.

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mlcg {

struct Customer {
  int id = 0;
  double x = 0.0;
  double y = 0.0;
  double demand = 0.0;
  double ready = 0.0;  // window lower bound
  double due = 0.0;    // window upper bound
  double service = 0.0;

  friend bool operator==(const Customer&, const Customer&) = default;
};

struct Depot {
  double x = 0.0;
  double y = 0.0;
  double ready = 0.0;
  double due = 0.0;

  friend bool operator==(const Depot&, const Depot&) = default;
};

struct VrptwInstance {
  std::string name;
  int vehicle_number = 0;  // parsed and written back, never used by the solver
  double capacity = 0.0;
  Depot depot;
  std::vector<Customer> customers;

  friend bool operator==(const VrptwInstance&, const VrptwInstance&) = default;
};

/// Raised for malformed instance text. `line()` is 1-based, 0 when the
/// error is not tied to a particular line (e.g. empty input).
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

VrptwInstance parse_instance(std::string_view text);
VrptwInstance read_instance_file(const std::string& path);

/// Writes the Solomon layout. Numbers use the shortest decimal form that
/// round-trips, so parse(write(x)) == x.
void write_instance(std::ostream& out, const VrptwInstance& instance);
std::string format_instance(const VrptwInstance& instance);

/// Shrinks every customer window [a, b] around its center by `factor`,
/// which must lie in (0, 1]. The depot window is left alone.
VrptwInstance tighten_windows(const VrptwInstance& instance, double factor);

enum class Layout { random, clustered, mixed };

struct GeneratorParams {
  Layout layout = Layout::random;
  double capacity = 100.0;
  double grid = 100.0;        // coordinates are drawn in [0, grid]^2
  double horizon = 1000.0;    // depot window is [0, horizon]
  double service_time = 10.0;
  double min_demand = 1.0;    // demands are integers in [min_demand, max_demand]
  double max_demand = 0.0;    // 0 means capacity / 3
  double min_width = 30.0;    // time-window width range
  double max_width = 120.0;
  int clusters = 4;
};

/// Seeded synthetic instance. Every customer's singleton route is feasible
/// by construction.
VrptwInstance generate_random(int n_customers, std::uint64_t seed,
                              const GeneratorParams& params = {});

std::string_view to_string(Layout layout);

}  // namespace mlcg
