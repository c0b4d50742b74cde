#include "mlcg/instance.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mlcg/rng.hpp"

namespace mlcg {

ParseError::ParseError(int line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what
                                  : what),
      line_(line) {}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

double to_number(std::string_view token, int line) {
  double value = 0.0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ParseError(line, "non-numeric field '" + std::string(token) + "'");
  }
  return value;
}

bool starts_with_word(const std::vector<std::string_view>& tokens,
                      std::string_view word) {
  if (tokens.empty()) return false;
  std::string upper(tokens.front());
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return upper.rfind(word, 0) == 0;
}

std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

VrptwInstance parse_instance(std::string_view text) {
  enum class Stage { name, vehicle, vehicle_header, vehicle_values, customer,
                     customer_header, rows };
  Stage stage = Stage::name;
  VrptwInstance inst;
  bool have_depot = false;
  int line_no = 0;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    const auto tokens = split_ws(line);
    if (tokens.empty()) {
      if (nl == text.size()) break;
      continue;
    }
    switch (stage) {
      case Stage::name:
        inst.name = std::string(tokens.front());
        stage = Stage::vehicle;
        break;
      case Stage::vehicle:
        if (!starts_with_word(tokens, "VEHICLE")) {
          throw ParseError(line_no, "expected VEHICLE section");
        }
        stage = Stage::vehicle_header;
        break;
      case Stage::vehicle_header:
        if (!starts_with_word(tokens, "NUMBER")) {
          throw ParseError(line_no, "expected NUMBER / CAPACITY header");
        }
        stage = Stage::vehicle_values;
        break;
      case Stage::vehicle_values:
        if (tokens.size() != 2) {
          throw ParseError(line_no, "expected vehicle number and capacity");
        }
        inst.vehicle_number = static_cast<int>(to_number(tokens[0], line_no));
        inst.capacity = to_number(tokens[1], line_no);
        if (!(inst.capacity > 0.0)) {
          throw ParseError(line_no, "vehicle capacity must be positive");
        }
        stage = Stage::customer;
        break;
      case Stage::customer:
        if (!starts_with_word(tokens, "CUSTOMER")) {
          throw ParseError(line_no, "expected CUSTOMER section");
        }
        stage = Stage::customer_header;
        break;
      case Stage::customer_header:
        if (!starts_with_word(tokens, "CUST")) {
          throw ParseError(line_no, "expected customer table header");
        }
        stage = Stage::rows;
        break;
      case Stage::rows: {
        if (tokens.size() != 7) {
          throw ParseError(line_no, "customer row needs 7 fields, got " +
                                        std::to_string(tokens.size()));
        }
        double v[7];
        for (int k = 0; k < 7; ++k) v[k] = to_number(tokens[k], line_no);
        if (v[5] < v[4]) throw ParseError(line_no, "due date before ready time");
        if (v[3] < 0.0 || v[6] < 0.0) {
          throw ParseError(line_no, "negative demand or service time");
        }
        if (!have_depot) {
          if (v[0] != 0.0) throw ParseError(line_no, "missing depot row (id 0)");
          inst.depot = Depot{v[1], v[2], v[4], v[5]};
          have_depot = true;
        } else {
          inst.customers.push_back(Customer{static_cast<int>(v[0]), v[1], v[2],
                                            v[3], v[4], v[5], v[6]});
        }
        break;
      }
    }
  }
  if (stage == Stage::name) throw ParseError(0, "empty instance text");
  if (stage != Stage::rows) {
    throw ParseError(line_no, "truncated instance header");
  }
  if (!have_depot) throw ParseError(line_no, "missing depot row");
  return inst;
}

VrptwInstance read_instance_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open instance file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_instance(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.what());
  }
}

void write_instance(std::ostream& out, const VrptwInstance& inst) {
  out << inst.name << "\n\nVEHICLE\nNUMBER     CAPACITY\n  " << inst.vehicle_number
      << "         " << shortest(inst.capacity) << "\n\nCUSTOMER\n"
      << "CUST NO.  XCOORD.   YCOORD.    DEMAND   READY TIME  DUE DATE   SERVICE   TIME\n\n";
  auto row = [&out](int id, double x, double y, double q, double a, double b,
                    double s) {
    out << "  " << id << ' ' << shortest(x) << ' ' << shortest(y) << ' '
        << shortest(q) << ' ' << shortest(a) << ' ' << shortest(b) << ' '
        << shortest(s) << '\n';
  };
  row(0, inst.depot.x, inst.depot.y, 0.0, inst.depot.ready, inst.depot.due, 0.0);
  for (const auto& c : inst.customers) {
    row(c.id, c.x, c.y, c.demand, c.ready, c.due, c.service);
  }
}

std::string format_instance(const VrptwInstance& instance) {
  std::ostringstream out;
  write_instance(out, instance);
  return out.str();
}

VrptwInstance tighten_windows(const VrptwInstance& instance, double factor) {
  if (!(factor > 0.0 && factor <= 1.0)) {
    throw std::invalid_argument("tightening factor must lie in (0, 1]");
  }
  VrptwInstance out = instance;
  if (factor == 1.0) return out;
  for (auto& c : out.customers) {
    const double center = 0.5 * (c.ready + c.due);
    const double half = 0.5 * factor * (c.due - c.ready);
    c.ready = center - half;
    c.due = center + half;
  }
  return out;
}

std::string_view to_string(Layout layout) {
  switch (layout) {
    case Layout::random: return "R";
    case Layout::clustered: return "C";
    case Layout::mixed: return "RC";
  }
  return "?";
}

VrptwInstance generate_random(int n_customers, std::uint64_t seed,
                              const GeneratorParams& p) {
  if (n_customers < 1) throw std::invalid_argument("need at least one customer");
  Rng rng(derive_seed(seed, "instance", static_cast<std::uint64_t>(n_customers)));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  VrptwInstance inst;
  inst.name = std::string(to_string(p.layout)) + "_" + std::to_string(n_customers) +
              "_s" + std::to_string(seed);
  inst.vehicle_number = n_customers;
  inst.capacity = p.capacity;
  inst.depot = Depot{std::round(p.grid / 2), std::round(p.grid / 2), 0.0, p.horizon};

  std::vector<std::pair<double, double>> centers;
  for (int k = 0; k < std::max(1, p.clusters); ++k) {
    centers.emplace_back(p.grid * (0.15 + 0.7 * unit(rng)),
                         p.grid * (0.15 + 0.7 * unit(rng)));
  }
  std::normal_distribution<double> spread(0.0, 0.06 * p.grid);
  const double max_demand = p.max_demand > 0.0 ? p.max_demand : std::floor(p.capacity / 3);
  std::uniform_int_distribution<int> demand(static_cast<int>(p.min_demand),
                                            std::max(static_cast<int>(p.min_demand),
                                                     static_cast<int>(max_demand)));

  for (int i = 1; i <= n_customers; ++i) {
    bool clustered = p.layout == Layout::clustered ||
                     (p.layout == Layout::mixed && i % 2 == 0);
    double x, y;
    if (clustered) {
      const auto& c = centers[static_cast<std::size_t>(i) % centers.size()];
      x = std::clamp(std::round(c.first + spread(rng)), 0.0, p.grid);
      y = std::clamp(std::round(c.second + spread(rng)), 0.0, p.grid);
    } else {
      x = std::round(p.grid * unit(rng));
      y = std::round(p.grid * unit(rng));
    }
    const double d = std::hypot(x - inst.depot.x, y - inst.depot.y);
    const double earliest = d;
    const double latest = p.horizon - p.service_time - d;
    if (latest - earliest < 1.0) {
      throw std::invalid_argument("horizon too short for generated customer " +
                                  std::to_string(i));
    }
    const double lo = std::ceil(earliest + (latest - 1.0 - earliest) * unit(rng));
    const double width = p.min_width + (p.max_width - p.min_width) * unit(rng);
    const double hi = std::floor(std::min(lo + width, latest));
    inst.customers.push_back(Customer{i, x, y, static_cast<double>(demand(rng)), lo,
                                      hi, p.service_time});
  }
  return inst;
}

}  // namespace mlcg
