#include "mlcg/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <ostream>
#include <set>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "mlcg/network.hpp"
#include "mlcg/rng.hpp"

namespace mlcg {

namespace {

CgConfig instance_config(const PipelineConfig& cfg, const std::string& id, Strategy strategy) {
  CgConfig c = cfg.cg;
  c.strategy = strategy;
  c.rng_seed = derive_seed(cfg.seed, "instance:" + id);
  return c;
}

}  // namespace

NamedInstance load_instance(const std::string& path, const PipelineConfig& cfg) {
  NamedInstance n;
  n.id = std::filesystem::path(path).stem().string();
  n.instance = read_instance_file(path);
  if (cfg.tighten != 1.0) n.instance = tighten_windows(n.instance, cfg.tighten);
  return n;
}

bool CollectSummary::all_ok() const {
  return std::all_of(entries.begin(), entries.end(), [](const CollectEntry& e) { return e.ok; });
}

CollectSummary collect_instances(std::span<const NamedInstance> instances, const PipelineConfig& cfg) {
  CollectSummary summary;
  for (const auto& inst : instances) {
    CollectEntry e;
    e.instance = inst.id;
    try {
      const Network net = build_network(inst.instance);
      const auto collected = run_collect(net, instance_config(cfg, inst.id, Strategy::baseline));
      const CollectedRun run{inst.id, &net, collected.arc_labels};
      auto rows = build_dataset(std::span<const CollectedRun>(&run, 1));
      e.rows = rows.size();
      std::size_t ones = 0;
      for (const auto& s : rows) ones += s.label != 0 ? 1 : 0;
      e.positive_fraction = rows.empty() ? 0.0 : static_cast<double>(ones) / static_cast<double>(rows.size());
      summary.dataset.insert(summary.dataset.end(), std::make_move_iterator(rows.begin()),
                             std::make_move_iterator(rows.end()));
    } catch (const std::exception& ex) {
      e.ok = false;
      e.error = ex.what();
    }
    summary.entries.push_back(std::move(e));
  }
  return summary;
}

CollectSummary cmd_collect(std::span<const std::string> paths, const PipelineConfig& cfg) {
  std::vector<NamedInstance> loaded;
  CollectSummary failed;
  for (const auto& p : paths) {
    try {
      loaded.push_back(load_instance(p, cfg));
    } catch (const std::exception& ex) {
      failed.entries.push_back(CollectEntry{p, false, ex.what(), 0, 0.0});
    }
  }
  CollectSummary summary = collect_instances(loaded, cfg);
  summary.entries.insert(summary.entries.end(), failed.entries.begin(), failed.entries.end());
  return summary;
}

DatasetSplit split_by_instance(std::span<const ArcSample> data, double test_fraction,
                               std::uint64_t seed) {
  if (test_fraction < 0.0 || test_fraction >= 1.0) {
    throw std::invalid_argument("test fraction must lie in [0, 1)");
  }
  std::set<std::string> unique;
  for (const auto& s : data) unique.insert(s.instance_id);
  std::vector<std::string> ids(unique.begin(), unique.end());
  Rng rng(derive_seed(seed, "split"));
  std::shuffle(ids.begin(), ids.end(), rng);
  const auto k = static_cast<long>(ids.size());
  long n_test = std::lround(test_fraction * static_cast<double>(k));
  if (test_fraction > 0.0 && k >= 2) n_test = std::clamp(n_test, 1L, k - 1);
  DatasetSplit split;
  split.test_instances.assign(ids.begin(), ids.begin() + n_test);
  split.train_instances.assign(ids.begin() + n_test, ids.end());
  std::sort(split.test_instances.begin(), split.test_instances.end());
  std::sort(split.train_instances.begin(), split.train_instances.end());
  return split;
}

TrainOutcome cmd_train(std::span<const ArcSample> data, ModelKind kind, const PipelineConfig& cfg) {
  TrainOutcome out;
  out.split = split_by_instance(data, cfg.test_fraction, cfg.seed);
  const std::set<std::string> test(out.split.test_instances.begin(), out.split.test_instances.end());
  std::vector<ArcSample> train_side, test_side;
  for (const auto& s : data) (test.count(s.instance_id) ? test_side : train_side).push_back(s);
  if (kind == ModelKind::logistic) {
    out.model = train_logistic(train_side, cfg.logistic);
  } else {
    ForestHyper h = cfg.forest;
    h.seed = derive_seed(cfg.seed, "forest");
    h.threads = std::max(1, cfg.threads);
    out.model = train_forest(train_side, h);
  }
  if (!test_side.empty()) out.held_out = evaluate(out.model, test_side);
  return out;
}

SolveOutcome cmd_solve(const NamedInstance& instance, Strategy strategy,
                       const TrainedModel* model, const PipelineConfig& cfg,
                       const CgHooks& hooks) {
  if ((strategy == Strategy::ml_s || strategy == Strategy::ml_redcost_s) && model == nullptr) {
    throw std::invalid_argument(std::string(to_string(strategy)) + " requires a model");
  }
  const CgConfig cg = instance_config(cfg, instance.id, strategy);
  const Network net = build_network(instance.instance);
  const int customers = static_cast<int>(instance.instance.customers.size());

  using Clock = std::chrono::steady_clock;
  double inference = 0.0;
  ArcMask keep;
  if (model != nullptr && strategy != Strategy::baseline && strategy != Strategy::redcost_s) {
    const auto t0 = Clock::now();
    keep = predict_arcs(*model, net);
    inference = std::chrono::duration<double>(Clock::now() - t0).count();
  }
  auto keep_count = [&] {
    if (!keep.empty()) {
      return static_cast<int>(std::count(keep.begin(), keep.end(), std::uint8_t{1}));
    }
    return static_cast<int>(std::lround(cfg.keep_fraction * net.selectable_count()));
  };

  SolveOutcome out;
  switch (strategy) {
    case Strategy::baseline:
      out.result = run_baseline(net, cg, hooks);
      break;
    case Strategy::redcost_s:
      out.result = run_redcost(net, cg, hooks);
      break;
    case Strategy::ml_s:
    case Strategy::ml_redcost_s:
      out.result = run_ml(net, cg, keep, hooks);
      break;
    case Strategy::random_s: {
      const auto mask = select_random(keep_count(), net.selectable_count(),
                                      derive_seed(cfg.seed, "random_s:" + instance.id));
      out.result = run_ml(net, cg, expand_selectable(net, mask), hooks);
      break;
    }
    case Strategy::cost_s:
      out.result = run_ml(net, cg, select_cost(net, keep_count()), hooks);
      break;
  }
  out.row = make_row(instance.id, customers, strategy, out.result.stats,
                     out.result.solution.objective, inference);
  return out;
}

bool BenchOutcome::all_ok() const {
  return std::all_of(report.begin(), report.end(), [](const ReportRow& r) { return r.ok; });
}

BenchOutcome cmd_bench(std::span<const NamedInstance> instances, std::span<const Strategy> strategies,
                       const TrainedModel* model, const PipelineConfig& cfg) {
  std::vector<Strategy> roster{Strategy::baseline};
  for (Strategy s : strategies) {
    if (std::find(roster.begin(), roster.end(), s) == roster.end()) roster.push_back(s);
  }
  struct Cell {
    const NamedInstance* instance;
    Strategy strategy;
    ReportRow row;
    std::vector<IterationRecord> trace;
  };
  std::vector<Cell> cells;
  for (const auto& inst : instances) {
    for (Strategy s : roster) cells.push_back(Cell{&inst, s, {}, {}});
  }

  auto run_cell = [&](Cell& c) {
    try {
      auto solved = cmd_solve(*c.instance, c.strategy, model, cfg);
      c.row = std::move(solved.row);
      c.trace = std::move(solved.result.stats.per_iteration);
    } catch (const std::exception& ex) {
      c.row = ReportRow{};
      c.row.instance = c.instance->id;
      c.row.customers = static_cast<int>(c.instance->instance.customers.size());
      c.row.strategy = std::string(to_string(c.strategy));
      c.row.ok = false;
      c.row.error = ex.what();
    }
  };
  const int workers = std::clamp(cfg.threads, 1, std::max(1, static_cast<int>(cells.size())));
  if (workers == 1) {
    for (auto& c : cells) run_cell(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < cells.size(); k = next++) run_cell(cells[k]);
      });
    }
    for (auto& t : pool) t.join();
  }

  BenchOutcome out;
  std::vector<ReportRow> rows;
  for (auto& c : cells) {
    rows.push_back(c.row);
    out.traces.push_back(std::move(c.trace));
    out.cell_names.push_back(c.instance->id + "." + std::string(to_string(c.strategy)));
  }
  out.report = assemble_report(std::move(rows));
  return out;
}

void write_manifest(std::ostream& out, std::span<const ManifestEntry> entries) {
  nlohmann::json files = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json j = {{"file", e.file}, {"source", e.source}, {"customers", e.customers}};
    nlohmann::json transforms = nlohmann::json::array();
    if (e.source == "generated") {
      j["generator"] = {{"layout", e.layout}, {"seed", e.seed}};
    }
    if (e.tighten != 1.0) transforms.push_back({{"tighten_windows", {{"factor", e.tighten}}}});
    j["transforms"] = std::move(transforms);
    files.push_back(std::move(j));
  }
  out << nlohmann::json{{"format", "mlcg-instance-manifest"}, {"version", 1}, {"files", files}}.dump(2)
      << '\n';
}

}  // namespace mlcg
