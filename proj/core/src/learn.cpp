#include "mlcg/learn.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>

#include "json.hpp"

#include "mlcg/rng.hpp"

namespace mlcg {

std::string_view to_string(ModelKind kind) {
  return kind == ModelKind::logistic ? "logistic" : "forest";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "logistic") return ModelKind::logistic;
  if (name == "forest") return ModelKind::forest;
  throw std::invalid_argument("unknown model kind '" + std::string(name) + "'");
}

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

struct ClassBalance {
  std::size_t positives = 0;
  std::size_t negatives = 0;
  double w_pos = 1.0;
  double w_neg = 1.0;
};

ClassBalance class_balance(std::span<const ArcSample> data, ClassWeighting weighting) {
  if (data.empty()) throw std::invalid_argument("training data is empty");
  ClassBalance b;
  for (const auto& s : data) (s.label != 0 ? b.positives : b.negatives)++;
  if (b.positives == 0 || b.negatives == 0) {
    throw std::invalid_argument("training data contains a single class; collect more instances");
  }
  if (weighting == ClassWeighting::balanced) {
    const double n = static_cast<double>(data.size());
    b.w_pos = n / (2.0 * static_cast<double>(b.positives));
    b.w_neg = n / (2.0 * static_cast<double>(b.negatives));
  }
  return b;
}

std::vector<FeatureVector> scaled_rows(std::span<const ArcSample> data, const NormStats& stats) {
  std::vector<FeatureVector> rows;
  rows.reserve(data.size());
  for (const auto& s : data) rows.push_back(stats.apply(s.features));
  return rows;
}

}  // namespace

double DecisionTree::predict(const FeatureVector& x) const {
  int k = 0;
  while (nodes[static_cast<std::size_t>(k)].feature >= 0) {
    const auto& n = nodes[static_cast<std::size_t>(k)];
    k = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
  }
  return nodes[static_cast<std::size_t>(k)].probability;
}

int DecisionTree::depth() const {
  std::vector<int> d(nodes.size(), 0);
  int deepest = 0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    deepest = std::max(deepest, d[k]);
    if (nodes[k].feature >= 0) {
      d[static_cast<std::size_t>(nodes[k].left)] = d[k] + 1;
      d[static_cast<std::size_t>(nodes[k].right)] = d[k] + 1;
    }
  }
  return deepest;
}

double TrainedModel::probability(const FeatureVector& scaled) const {
  if (kind == ModelKind::logistic) {
    double z = bias;
    for (std::size_t k = 0; k < kFeatureCount; ++k) z += weights[k] * scaled[k];
    return sigmoid(z);
  }
  double sum = 0.0;
  for (const auto& t : trees) sum += t.predict(scaled);
  return sum / static_cast<double>(trees.size());
}

// ---------------------------------------------------------------------------
// Logistic regression: minimizes
//   (1/n) [ sum_i s_i * BCE(y_i, sigmoid(w.x_i + b)) + |w|^2 / (2C) ]
// with accelerated full-batch gradient descent at fixed step 1/L and
// gradient-based restarts.

TrainedModel train_logistic(std::span<const ArcSample> data, const LogisticHyper& hyper) {
  const ClassBalance balance = class_balance(data, hyper.weights);
  if (!(hyper.c > 0.0)) throw std::invalid_argument("C must be positive");
  TrainedModel model;
  model.kind = ModelKind::logistic;
  std::vector<FeatureVector> rows;
  rows.reserve(data.size());
  for (const auto& s : data) rows.push_back(s.features);
  model.norm_stats = NormStats::fit(rows);
  rows = scaled_rows(data, model.norm_stats);

  const std::size_t n = rows.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  const double l2 = inv_n / hyper.c;
  std::vector<double> sw(n), y(n);
  double lipschitz = l2;
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = data[i].label != 0 ? 1.0 : 0.0;
    sw[i] = data[i].label != 0 ? balance.w_pos : balance.w_neg;
    double norm2 = 1.0;
    for (double v : rows[i]) norm2 += v * v;
    lipschitz += 0.25 * inv_n * sw[i] * norm2;
  }
  const double step = 1.0 / lipschitz;

  constexpr std::size_t d = kFeatureCount + 1;  // last slot is the bias
  using Params = std::array<double, d>;
  auto gradient = [&](const Params& p) {
    Params g{};
    for (std::size_t i = 0; i < n; ++i) {
      double z = p[kFeatureCount];
      for (std::size_t k = 0; k < kFeatureCount; ++k) z += p[k] * rows[i][k];
      const double r = sw[i] * (sigmoid(z) - y[i]) * inv_n;
      for (std::size_t k = 0; k < kFeatureCount; ++k) g[k] += r * rows[i][k];
      g[kFeatureCount] += r;
    }
    for (std::size_t k = 0; k < kFeatureCount; ++k) g[k] += l2 * p[k];
    return g;
  };
  auto max_norm = [](const Params& g) {
    double m = 0.0;
    for (double v : g) m = std::max(m, std::abs(v));
    return m;
  };

  Params theta{}, prev{}, look{};
  double t = 1.0;
  int it = 0;
  double gnorm = 0.0;
  for (; it < hyper.max_iterations; ++it) {
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double beta = (t - 1.0) / t_next;
    for (std::size_t k = 0; k < d; ++k) look[k] = theta[k] + beta * (theta[k] - prev[k]);
    const Params g = gradient(look);
    gnorm = max_norm(g);
    if (gnorm < hyper.tolerance) {
      theta = look;
      break;
    }
    prev = theta;
    double progress = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      theta[k] = look[k] - step * g[k];
      progress += g[k] * (theta[k] - prev[k]);
    }
    t = progress > 0.0 ? 1.0 : t_next;  // restart momentum when it points uphill
  }
  if (it == hyper.max_iterations) gnorm = max_norm(gradient(theta));

  model.weights.assign(theta.begin(), theta.begin() + kFeatureCount);
  model.bias = theta[kFeatureCount];
  model.iterations = it;
  model.gradient_norm = gnorm;
  return model;
}

// ---------------------------------------------------------------------------
// Random forest

namespace {

struct TreeBuilder {
  const std::vector<FeatureVector>& x;
  const std::vector<double>& wclass;  // class weight of each sample
  const std::vector<std::uint8_t>& positive;
  const ForestHyper& hyper;
  Rng rng;
  DecisionTree tree;

  struct Split {
    int feature = -1;
    double threshold = 0.0;
    double score = 0.0;  // weighted Gini impurity of the children
  };

  int build(std::vector<std::pair<int, double>> members, int depth) {
    double n = 0.0, w1 = 0.0, w0 = 0.0;
    for (const auto& [i, count] : members) {
      n += count;
      (positive[static_cast<std::size_t>(i)] ? w1 : w0) += count * wclass[static_cast<std::size_t>(i)];
    }
    const int id = static_cast<int>(tree.nodes.size());
    TreeNode node;
    node.samples = n;
    node.probability = w1 > 0.0 ? w1 / (w1 + w0) : 0.0;
    tree.nodes.push_back(node);

    if (depth >= hyper.max_depth || n < hyper.min_samples_split || w1 == 0.0 || w0 == 0.0) {
      return id;
    }
    const double parent = (w1 + w0) - (w1 * w1 + w0 * w0) / (w1 + w0);
    const Split best = find_split(members);
    if (best.feature < 0 || !(best.score < parent - 1e-12 * (w1 + w0))) return id;

    std::vector<std::pair<int, double>> left, right;
    for (const auto& m : members) {
      (x[static_cast<std::size_t>(m.first)][static_cast<std::size_t>(best.feature)] <= best.threshold
           ? left : right).push_back(m);
    }
    members.clear();
    members.shrink_to_fit();
    const int l = build(std::move(left), depth + 1);
    const int r = build(std::move(right), depth + 1);
    auto& self = tree.nodes[static_cast<std::size_t>(id)];
    self.feature = best.feature;
    self.threshold = best.threshold;
    self.left = l;
    self.right = r;
    return id;
  }

  Split find_split(std::vector<std::pair<int, double>>& members) {
    std::array<int, kFeatureCount> order{};
    std::iota(order.begin(), order.end(), 0);
    const auto draw = std::min<std::size_t>(kFeatureCount, static_cast<std::size_t>(std::max(1, hyper.max_features)));
    for (std::size_t k = 0; k < draw; ++k) {
      std::uniform_int_distribution<std::size_t> pick(k, kFeatureCount - 1);
      std::swap(order[k], order[pick(rng)]);
    }
    double tot_n = 0.0, tot1 = 0.0, tot0 = 0.0;
    for (const auto& [i, count] : members) {
      tot_n += count;
      (positive[static_cast<std::size_t>(i)] ? tot1 : tot0) += count * wclass[static_cast<std::size_t>(i)];
    }
    Split best;
    for (std::size_t k = 0; k < draw; ++k) {
      const auto f = static_cast<std::size_t>(order[k]);
      std::sort(members.begin(), members.end(), [&](const auto& a, const auto& b) {
        const double va = x[static_cast<std::size_t>(a.first)][f];
        const double vb = x[static_cast<std::size_t>(b.first)][f];
        return va != vb ? va < vb : a.first < b.first;
      });
      double ln = 0.0, l1 = 0.0, l0 = 0.0;
      for (std::size_t p = 0; p + 1 < members.size(); ++p) {
        const auto [i, count] = members[p];
        ln += count;
        (positive[static_cast<std::size_t>(i)] ? l1 : l0) += count * wclass[static_cast<std::size_t>(i)];
        const double v = x[static_cast<std::size_t>(i)][f];
        const double v_next = x[static_cast<std::size_t>(members[p + 1].first)][f];
        if (v == v_next) continue;
        if (ln < hyper.min_samples_leaf || tot_n - ln < hyper.min_samples_leaf) continue;
        const double r1 = tot1 - l1, r0 = tot0 - l0;
        const double wl = l1 + l0, wr = r1 + r0;
        if (wl <= 0.0 || wr <= 0.0) continue;
        const double score = (wl - (l1 * l1 + l0 * l0) / wl) + (wr - (r1 * r1 + r0 * r0) / wr);
        if (best.feature < 0 || score < best.score) {
          double mid = 0.5 * (v + v_next);
          if (!(mid < v_next)) mid = v;
          best = Split{static_cast<int>(f), mid, score};
        }
      }
    }
    return best;
  }
};

}  // namespace

TrainedModel train_forest(std::span<const ArcSample> data, const ForestHyper& hyper) {
  const ClassBalance balance = class_balance(data, hyper.weights);
  if (hyper.n_trees < 1) throw std::invalid_argument("forest needs at least one tree");
  if (hyper.max_depth < 0) throw std::invalid_argument("max_depth must be non-negative");

  // Canonical sample order makes the result independent of input order.
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& sa = data[a];
    const auto& sb = data[b];
    if (sa.instance_id != sb.instance_id) return sa.instance_id < sb.instance_id;
    if (sa.arc_id != sb.arc_id) return sa.arc_id < sb.arc_id;
    if (sa.features != sb.features) return sa.features < sb.features;
    return sa.label < sb.label;
  });

  TrainedModel model;
  model.kind = ModelKind::forest;
  std::vector<FeatureVector> raw;
  raw.reserve(data.size());
  for (std::size_t i : order) raw.push_back(data[i].features);
  model.norm_stats = NormStats::fit(raw);
  std::vector<FeatureVector> x;
  std::vector<double> wclass;
  std::vector<std::uint8_t> positive;
  x.reserve(data.size());
  for (std::size_t i : order) {
    x.push_back(model.norm_stats.apply(data[i].features));
    positive.push_back(data[i].label != 0 ? 1 : 0);
    wclass.push_back(data[i].label != 0 ? balance.w_pos : balance.w_neg);
  }

  model.trees.resize(static_cast<std::size_t>(hyper.n_trees));
  auto grow = [&](int t) {
    TreeBuilder b{x, wclass, positive, hyper, Rng(derive_seed(hyper.seed, "tree", static_cast<std::uint64_t>(t))), {}};
    std::vector<double> counts(x.size(), hyper.bootstrap ? 0.0 : 1.0);
    if (hyper.bootstrap) {
      std::uniform_int_distribution<std::size_t> pick(0, x.size() - 1);
      for (std::size_t k = 0; k < x.size(); ++k) counts[pick(b.rng)] += 1.0;
    }
    std::vector<std::pair<int, double>> members;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (counts[i] > 0.0) members.emplace_back(static_cast<int>(i), counts[i]);
    }
    b.build(std::move(members), 0);
    model.trees[static_cast<std::size_t>(t)] = std::move(b.tree);
  };
  const int threads = std::clamp(hyper.threads, 1, hyper.n_trees);
  if (threads == 1) {
    for (int t = 0; t < hyper.n_trees; ++t) grow(t);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (int t = w; t < hyper.n_trees; t += threads) grow(t);
      });
    }
    for (auto& th : pool) th.join();
  }
  return model;
}

// ---------------------------------------------------------------------------

Prediction predict(const TrainedModel& model, const FeatureVector& features, int layout_version) {
  if (layout_version != model.layout_version) {
    throw std::invalid_argument("feature layout version " + std::to_string(layout_version) +
                                " does not match model layout " +
                                std::to_string(model.layout_version));
  }
  Prediction p;
  p.probability = model.probability(model.norm_stats.apply(features));
  p.keep = p.probability >= model.threshold;
  return p;
}

ArcMask predict_arcs(const TrainedModel& model, const Network& net) {
  ArcMask mask(static_cast<std::size_t>(net.arc_count()), 0);
  const auto rows = extract_all(net);
  if (rows.empty()) return mask;
  const NormStats instance = NormStats::fit(rows);
  std::size_t k = 0;
  for (const auto& a : net.arcs()) {
    if (!net.is_selectable(a.id)) continue;
    mask[static_cast<std::size_t>(a.id)] = predict(model, instance.apply(rows[k++])).keep ? 1 : 0;
  }
  return mask;
}

Metrics Metrics::from_confusion(const Confusion& c) {
  Metrics m;
  m.confusion = c;
  m.recall = c.tp + c.fn > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
  m.tnr = c.tn + c.fp > 0 ? static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp) : 0.0;
  m.balanced_accuracy = (m.recall + m.tnr) / 2.0;
  return m;
}

Metrics evaluate(const TrainedModel& model, std::span<const ArcSample> data) {
  if (data.empty()) throw std::invalid_argument("cannot evaluate on an empty dataset");
  Confusion c;
  for (const auto& s : data) {
    const bool keep = predict(model, s.features).keep;
    if (s.label != 0) {
      (keep ? c.tp : c.fn)++;
    } else {
      (keep ? c.fp : c.tn)++;
    }
  }
  return Metrics::from_confusion(c);
}

// ---------------------------------------------------------------------------
// Model files (JSON).

void save_model(std::ostream& out, const TrainedModel& model) {
  using nlohmann::json;
  json j;
  j["format"] = "mlcg-model";
  j["version"] = kModelFormatVersion;
  j["kind"] = std::string(to_string(model.kind));
  j["layout_version"] = model.layout_version;
  j["threshold"] = model.threshold;
  j["norm_stats"] = {{"lo", model.norm_stats.lo}, {"hi", model.norm_stats.hi}};
  if (model.kind == ModelKind::logistic) {
    j["logistic"] = {{"weights", model.weights}, {"bias", model.bias}};
  } else {
    json trees = json::array();
    for (const auto& t : model.trees) {
      json cols = {{"feature", json::array()}, {"threshold", json::array()},
                   {"left", json::array()},    {"right", json::array()},
                   {"probability", json::array()}, {"samples", json::array()}};
      for (const auto& n : t.nodes) {
        cols["feature"].push_back(n.feature);
        cols["threshold"].push_back(n.threshold);
        cols["left"].push_back(n.left);
        cols["right"].push_back(n.right);
        cols["probability"].push_back(n.probability);
        cols["samples"].push_back(n.samples);
      }
      trees.push_back(std::move(cols));
    }
    j["forest"] = std::move(trees);
  }
  out << j.dump(1) << '\n';
}

TrainedModel load_model(std::istream& in) {
  using nlohmann::json;
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != "mlcg-model") {
      throw std::runtime_error("not a model file");
    }
    const int version = j.at("version").get<int>();
    if (version > kModelFormatVersion || version < 1) {
      throw std::runtime_error("unsupported model format version " + std::to_string(version));
    }
    TrainedModel m;
    m.kind = parse_model_kind(j.at("kind").get<std::string>());
    m.layout_version = j.at("layout_version").get<int>();
    if (m.layout_version != kFeatureLayoutVersion) {
      throw std::runtime_error("model expects feature layout " + std::to_string(m.layout_version));
    }
    m.threshold = j.at("threshold").get<double>();
    m.norm_stats.lo = j.at("norm_stats").at("lo").get<FeatureVector>();
    m.norm_stats.hi = j.at("norm_stats").at("hi").get<FeatureVector>();
    if (m.kind == ModelKind::logistic) {
      m.weights = j.at("logistic").at("weights").get<std::vector<double>>();
      m.bias = j.at("logistic").at("bias").get<double>();
      if (m.weights.size() != kFeatureCount) throw std::runtime_error("logistic weight count mismatch");
    } else {
      for (const auto& t : j.at("forest")) {
        const auto feature = t.at("feature").get<std::vector<int>>();
        const auto threshold = t.at("threshold").get<std::vector<double>>();
        const auto left = t.at("left").get<std::vector<int>>();
        const auto right = t.at("right").get<std::vector<int>>();
        const auto prob = t.at("probability").get<std::vector<double>>();
        const auto samples = t.at("samples").get<std::vector<double>>();
        const std::size_t n = feature.size();
        if (n == 0 || threshold.size() != n || left.size() != n || right.size() != n ||
            prob.size() != n || samples.size() != n) {
          throw std::runtime_error("malformed tree");
        }
        DecisionTree tree;
        for (std::size_t k = 0; k < n; ++k) {
          if (feature[k] >= static_cast<int>(kFeatureCount) ||
              (feature[k] >= 0 && (left[k] <= static_cast<int>(k) || right[k] <= static_cast<int>(k) ||
                                   left[k] >= static_cast<int>(n) || right[k] >= static_cast<int>(n)))) {
            throw std::runtime_error("malformed tree node");
          }
          tree.nodes.push_back(TreeNode{feature[k], threshold[k], left[k], right[k], prob[k], samples[k]});
        }
        m.trees.push_back(std::move(tree));
      }
      if (m.trees.empty()) throw std::runtime_error("forest has no trees");
    }
    return m;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed model file: ") + e.what());
  }
}

}  // namespace mlcg
