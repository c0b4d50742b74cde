#include "mlcg/features.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mlcg {

const std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "cost",          "time",          "load",          "out_degree_tail", "in_degree_head",
    "tail_out_time_min", "tail_out_time_max", "tail_out_time_avg",
    "tail_out_load_min", "tail_out_load_max", "tail_out_load_avg",
    "head_in_time_min",  "head_in_time_max",  "head_in_time_avg",
    "head_in_load_min",  "head_in_load_max",  "head_in_load_avg",
    "head_tw_lo",    "head_tw_hi",    "tail_tw_lo",    "tail_tw_hi",
};

namespace {

// min, max, avg of one resource over a set of arcs.
void aggregate(const Network& net, std::span<const int> ids, std::size_t resource,
               FeatureVector& f, std::size_t slot) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double sum = 0.0;
  for (int a : ids) {
    const double v = net.arc(a).consumption[resource];
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    sum += v;
  }
  f[slot] = lo;
  f[slot + 1] = hi;
  f[slot + 2] = sum / static_cast<double>(ids.size());
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

FeatureVector extract_features(const Network& net, int arc_id) {
  if (net.is_reduced()) throw std::invalid_argument("features are defined on the full network");
  if (arc_id < 0 || arc_id >= net.arc_count()) throw std::out_of_range("arc id out of range");
  if (!net.is_selectable(arc_id)) {
    throw std::invalid_argument("arc " + std::to_string(arc_id) + " is depot-incident");
  }
  const ArcData& a = net.arc(arc_id);
  const auto out = net.out_arcs(a.tail);
  const auto in = net.in_arcs(a.head);
  FeatureVector f{};
  f[0] = a.cost;
  f[1] = a.consumption[kTime];
  f[2] = a.consumption[kLoad];
  f[3] = static_cast<double>(out.size());
  f[4] = static_cast<double>(in.size());
  aggregate(net, out, kTime, f, 5);
  aggregate(net, out, kLoad, f, 8);
  aggregate(net, in, kTime, f, 11);
  aggregate(net, in, kLoad, f, 14);
  f[17] = net.node(a.head).window_lo[kTime];
  f[18] = net.node(a.head).window_hi[kTime];
  f[19] = net.node(a.tail).window_lo[kTime];
  f[20] = net.node(a.tail).window_hi[kTime];
  return f;
}

std::vector<FeatureVector> extract_all(const Network& net) {
  std::vector<FeatureVector> rows;
  for (const auto& a : net.arcs()) {
    if (net.is_selectable(a.id)) rows.push_back(extract_features(net, a.id));
  }
  return rows;
}

FeatureVector NormStats::apply(const FeatureVector& raw) const {
  FeatureVector out{};
  for (std::size_t k = 0; k < kFeatureCount; ++k) {
    const double range = hi[k] - lo[k];
    out[k] = range > 0.0 ? (raw[k] - lo[k]) / range : 0.0;
  }
  return out;
}

NormStats NormStats::identity() {
  NormStats s;
  s.lo.fill(0.0);
  s.hi.fill(1.0);
  return s;
}

NormStats NormStats::fit(std::span<const FeatureVector> rows) {
  if (rows.empty()) throw std::invalid_argument("cannot fit scaling on an empty sample set");
  NormStats s;
  s.lo = rows.front();
  s.hi = rows.front();
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < kFeatureCount; ++k) {
      s.lo[k] = std::min(s.lo[k], r[k]);
      s.hi[k] = std::max(s.hi[k], r[k]);
    }
  }
  return s;
}

NormalizedSamples normalize_instance(std::vector<ArcSample> samples) {
  if (samples.empty()) throw std::invalid_argument("cannot normalize an empty sample set");
  for (const auto& s : samples) {
    if (s.instance_id != samples.front().instance_id) {
      throw std::invalid_argument("normalize_instance expects samples of one instance");
    }
  }
  std::vector<FeatureVector> rows;
  rows.reserve(samples.size());
  for (const auto& s : samples) rows.push_back(s.features);
  NormalizedSamples out;
  out.stats = NormStats::fit(rows);
  for (auto& s : samples) s.features = out.stats.apply(s.features);
  out.samples = std::move(samples);
  return out;
}

std::vector<ArcSample> build_dataset(std::span<const CollectedRun> runs) {
  std::vector<ArcSample> data;
  for (const auto& run : runs) {
    const Network& net = *run.network;
    if (run.arc_labels.size() != static_cast<std::size_t>(net.arc_count())) {
      throw std::invalid_argument("labels of run " + run.instance_id + " not aligned with its arcs");
    }
    std::vector<ArcSample> batch;
    for (const auto& a : net.arcs()) {
      if (!net.is_selectable(a.id)) continue;
      batch.push_back(ArcSample{run.instance_id, a.id, extract_features(net, a.id),
                                run.arc_labels[static_cast<std::size_t>(a.id)] != 0 ? 1 : 0});
    }
    if (batch.empty()) continue;
    auto normalized = normalize_instance(std::move(batch));
    data.insert(data.end(), std::make_move_iterator(normalized.samples.begin()),
                std::make_move_iterator(normalized.samples.end()));
  }
  return data;
}

void write_dataset(std::ostream& out, std::span<const ArcSample> samples) {
  out << "instance_id,arc_id";
  for (auto name : kFeatureNames) out << ',' << name;
  out << ",label\n";
  for (const auto& s : samples) {
    if (s.instance_id.find_first_of(",\n\"") != std::string::npos) {
      throw std::invalid_argument("instance id may not contain ',', '\"' or newlines");
    }
    out << s.instance_id << ',' << s.arc_id;
    for (double v : s.features) out << ',' << fmt17(v);
    out << ',' << s.label << '\n';
  }
}

std::vector<ArcSample> read_dataset(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("dataset is empty (no header)");
  {
    std::ostringstream expected;
    expected << "instance_id,arc_id";
    for (auto name : kFeatureNames) expected << ',' << name;
    expected << ",label";
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != expected.str()) throw std::runtime_error("dataset header does not match feature layout");
  }
  std::vector<ArcSample> samples;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != kFeatureCount + 3) {
      throw std::runtime_error("dataset line " + std::to_string(line_no) + ": wrong field count");
    }
    auto number = [&](std::string_view t) {
      double v = 0.0;
      auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
      if (ec != std::errc() || p != t.data() + t.size()) {
        throw std::runtime_error("dataset line " + std::to_string(line_no) + ": bad number '" +
                                 std::string(t) + "'");
      }
      return v;
    };
    ArcSample s;
    s.instance_id = std::string(fields[0]);
    s.arc_id = static_cast<int>(number(fields[1]));
    for (std::size_t k = 0; k < kFeatureCount; ++k) s.features[k] = number(fields[k + 2]);
    const double label = number(fields.back());
    if (label != 0.0 && label != 1.0) {
      throw std::runtime_error("dataset line " + std::to_string(line_no) + ": label must be 0 or 1");
    }
    s.label = static_cast<int>(label);
    samples.push_back(std::move(s));
  }
  return samples;
}

}  // namespace mlcg
