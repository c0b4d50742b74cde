#pragma once

// Binary arc classifiers: class-weighted logistic regression and a CART
// random forest, plus metrics and model files.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "mlcg/features.hpp"
#include "mlcg/network.hpp"

namespace mlcg {

enum class ModelKind { logistic, forest };
enum class ClassWeighting { balanced, uniform };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);

inline constexpr int kModelFormatVersion = 1;

struct LogisticHyper {
  double c = 1.0;  // inverse L2 strength
  ClassWeighting weights = ClassWeighting::balanced;
  int max_iterations = 20000;
  double tolerance = 1e-6;  // max-norm of the gradient
};

struct ForestHyper {
  int n_trees = 500;
  int max_depth = 5;
  int max_features = 5;
  int min_samples_leaf = 50;
  int min_samples_split = 100;
  bool bootstrap = true;
  ClassWeighting weights = ClassWeighting::balanced;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct TreeNode {
  int feature = -1;  // -1 for leaves
  double threshold = 0.0;  // go left when x[feature] <= threshold
  int left = -1;
  int right = -1;
  double probability = 0.0;  // class-weighted positive fraction at the node
  double samples = 0.0;      // training samples reaching the node (with bootstrap multiplicity)
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double predict(const FeatureVector& x) const;
  int depth() const;
};

struct TrainedModel {
  ModelKind kind = ModelKind::logistic;
  int layout_version = kFeatureLayoutVersion;
  NormStats norm_stats = NormStats::identity();
  std::vector<double> weights;  // logistic
  double bias = 0.0;            // logistic
  std::vector<DecisionTree> trees;  // forest
  double threshold = 0.5;
  /// Training convergence report (logistic); not serialized.
  int iterations = 0;
  double gradient_norm = 0.0;

  /// Positive-class probability of an already scaled feature vector.
  double probability(const FeatureVector& scaled) const;
};

/// Throws std::invalid_argument for empty or single-class data.
TrainedModel train_logistic(std::span<const ArcSample> data, const LogisticHyper& hyper = {});
TrainedModel train_forest(std::span<const ArcSample> data, const ForestHyper& hyper = {});

struct Prediction {
  double probability = 0.0;
  bool keep = false;
};

/// Applies model.norm_stats then the model; keep iff probability >= threshold.
Prediction predict(const TrainedModel& model, const FeatureVector& features,
                   int layout_version = kFeatureLayoutVersion);

/// Predictions for every arc of a full network: features are extracted and
/// scaled with the instance's own ranges first, as during training. Depot
/// arcs get 0 (they are always part of a reduced network).
ArcMask predict_arcs(const TrainedModel& model, const Network& net);

struct Confusion {
  long tp = 0, fp = 0, tn = 0, fn = 0;
};

struct Metrics {
  double recall = 0.0;
  double tnr = 0.0;
  double balanced_accuracy = 0.0;
  Confusion confusion;

  static Metrics from_confusion(const Confusion& c);
};

Metrics evaluate(const TrainedModel& model, std::span<const ArcSample> data);

void save_model(std::ostream& out, const TrainedModel& model);
/// Rejects unknown formats, newer format versions and layout mismatches.
TrainedModel load_model(std::istream& in);

}  // namespace mlcg
