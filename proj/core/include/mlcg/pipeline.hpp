#pragma once

// End-to-end commands behind the mlcg tool: data collection, training,
// solving with any strategy and benchmark reports.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlcg/colgen.hpp"
#include "mlcg/features.hpp"
#include "mlcg/instance.hpp"
#include "mlcg/learn.hpp"
#include "mlcg/report.hpp"

namespace mlcg {

struct PipelineConfig {
  std::uint64_t seed = 1;  // root of every derived seed
  CgConfig cg;             // cg.rng_seed is derived per instance from `seed`
  double tighten = 1.0;    // window factor applied when instances are loaded
  int threads = 1;         // bench cells / forest trees run in parallel
  /// Keep fraction of selectable arcs for random_s / cost_s when no model
  /// is given; with a model they keep as many arcs as the model would.
  double keep_fraction = 0.2;
  double test_fraction = 0.2;  // instance-level held-out share in train
  LogisticHyper logistic;
  ForestHyper forest;
};

struct NamedInstance {
  std::string id;  // file stem
  VrptwInstance instance;
};

/// Reads and (when cfg.tighten < 1) tightens an instance file.
NamedInstance load_instance(const std::string& path, const PipelineConfig& cfg);

struct CollectEntry {
  std::string instance;
  bool ok = true;
  std::string error;
  std::size_t rows = 0;
  double positive_fraction = 0.0;  // over selectable arcs
};

struct CollectSummary {
  std::vector<CollectEntry> entries;
  std::vector<ArcSample> dataset;
  bool all_ok() const;
};

/// Runs the baseline on each instance, labels arcs used by generated
/// columns and builds the instance-normalized dataset. Failing instances
/// are skipped and reported.
CollectSummary cmd_collect(std::span<const std::string> paths, const PipelineConfig& cfg);
CollectSummary collect_instances(std::span<const NamedInstance> instances, const PipelineConfig& cfg);

struct DatasetSplit {
  std::vector<std::string> train_instances;
  std::vector<std::string> test_instances;
};

/// Seeded split by instance id: every sample of an instance lands on one side.
DatasetSplit split_by_instance(std::span<const ArcSample> data, double test_fraction,
                               std::uint64_t seed);

struct TrainOutcome {
  TrainedModel model;
  DatasetSplit split;
  std::optional<Metrics> held_out;  // absent when the test side is empty
};

TrainOutcome cmd_train(std::span<const ArcSample> data, ModelKind kind, const PipelineConfig& cfg);

struct SolveOutcome {
  ReportRow row;
  CgResult result;
};

/// `model` is required for ml_s and ml_redcost_s and optional for
/// random_s / cost_s (sets their keep count).
SolveOutcome cmd_solve(const NamedInstance& instance, Strategy strategy,
                       const TrainedModel* model, const PipelineConfig& cfg,
                       const CgHooks& hooks = {});

struct BenchOutcome {
  std::vector<ReportRow> report;  // assembled, with gains and averages
  std::vector<std::vector<IterationRecord>> traces;  // per data cell, in input cell order
  std::vector<std::string> cell_names;               // "<instance>.<strategy>"
  bool all_ok() const;
};

/// Cross product of instances and strategies (baseline always included).
/// Cells run on cfg.threads workers; failures are recorded per row.
BenchOutcome cmd_bench(std::span<const NamedInstance> instances, std::span<const Strategy> strategies,
                       const TrainedModel* model, const PipelineConfig& cfg);

/// JSON manifest describing generated or transformed instance files.
struct ManifestEntry {
  std::string file;
  std::string source;     // input path, or "generated"
  std::string layout;     // generated only
  int customers = 0;
  std::uint64_t seed = 0;  // generated only
  double tighten = 1.0;
};
void write_manifest(std::ostream& out, std::span<const ManifestEntry> entries);

}  // namespace mlcg
