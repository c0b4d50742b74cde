#pragma once

// Static per-arc features, labeled datasets and per-instance scaling.

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mlcg/network.hpp"

namespace mlcg {

inline constexpr std::size_t kFeatureCount = 21;
inline constexpr int kFeatureLayoutVersion = 1;

using FeatureVector = std::array<double, kFeatureCount>;

/// Slot layout (version 1):
///   0 cost, 1 time, 2 load,
///   3 out-degree(tail), 4 in-degree(head),
///   5..10  tail outgoing arcs: min/max/avg time, min/max/avg load,
///   11..16 head incoming arcs: min/max/avg time, min/max/avg load,
///   17..18 head time window lo/hi, 19..20 tail time window lo/hi.
extern const std::array<std::string_view, kFeatureCount> kFeatureNames;

/// Raw features of a customer-to-customer arc of a full network. Throws
/// std::invalid_argument for depot arcs or reduced networks.
FeatureVector extract_features(const Network& net, int arc_id);

struct ArcSample {
  std::string instance_id;
  int arc_id = 0;
  FeatureVector features{};
  int label = 0;
};

/// Per-feature min-max ranges. apply() maps v to (v - lo) / (hi - lo), and
/// constant features (hi == lo) to 0.
struct NormStats {
  FeatureVector lo{};
  FeatureVector hi{};

  FeatureVector apply(const FeatureVector& raw) const;
  static NormStats identity();
  static NormStats fit(std::span<const FeatureVector> rows);
};

struct NormalizedSamples {
  std::vector<ArcSample> samples;
  NormStats stats;
};

/// Scales one instance's samples using that instance's own ranges.
NormalizedSamples normalize_instance(std::vector<ArcSample> samples);

struct CollectedRun {
  std::string instance_id;
  const Network* network = nullptr;
  ArcMask arc_labels;  // y_a indexed by network arcs
};

/// One normalized sample per selectable arc per run.
std::vector<ArcSample> build_dataset(std::span<const CollectedRun> runs);

/// Raw features of every selectable arc, in arc-id order.
std::vector<FeatureVector> extract_all(const Network& net);

/// Delimited text: header "instance_id,arc_id,<21 names>,label", numbers at
/// 17 significant digits.
void write_dataset(std::ostream& out, std::span<const ArcSample> samples);
std::vector<ArcSample> read_dataset(std::istream& in);

}  // namespace mlcg
