// mlcg: collect training data, train arc classifiers, solve VRPTW column
// generation with any pricing strategy and produce comparison reports.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mlcg/pipeline.hpp"
#include "mlcg/rng.hpp"

namespace fs = std::filesystem;
using namespace mlcg;

namespace {

struct Common {
  std::uint64_t seed = 1;
  int eta_min = 30;
  int eta_max = 100;
  std::vector<std::string> redcost_levels{"10", "20", "inf"};
  double tighten = 1.0;
  int max_columns = 200;
  int threads = 1;
  double keep_fraction = 0.2;
  bool keep_reduced = false;
  bool no_timing = false;
};

PipelineConfig to_config(const Common& c) {
  PipelineConfig cfg;
  cfg.seed = c.seed;
  cfg.cg.eta_min = c.eta_min;
  cfg.cg.eta_max = c.eta_max;
  cfg.cg.max_columns_per_iter = c.max_columns;
  cfg.cg.disable_reduced_after_first_failure = !c.keep_reduced;
  cfg.cg.redcost_levels.clear();
  for (const auto& l : c.redcost_levels) {
    cfg.cg.redcost_levels.push_back(l == "inf" ? kUnlimited : std::stoi(l));
  }
  cfg.cg.validate();
  cfg.tighten = c.tighten;
  cfg.threads = c.threads;
  cfg.keep_fraction = c.keep_fraction;
  return cfg;
}

std::ofstream open_out(const std::string& path) {
  if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  return in;
}

std::optional<TrainedModel> maybe_model(const std::string& path) {
  if (path.empty()) return std::nullopt;
  auto in = open_in(path);
  return load_model(in);
}

void print_metrics(const Metrics& m) {
  std::printf("recall %.4f  tnr %.4f  balanced_accuracy %.4f  (tp %ld fp %ld tn %ld fn %ld)\n",
              m.recall, m.tnr, m.balanced_accuracy, m.confusion.tp, m.confusion.fp,
              m.confusion.tn, m.confusion.fn);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ML arc selection for VRPTW column generation"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with option values");

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", common.seed, "root random seed");
    sub->add_option("--eta-min", common.eta_min, "reduced network fallback threshold");
    sub->add_option("--eta-max", common.eta_max, "threshold for returning to the reduced network");
    sub->add_option("--redcost-levels", common.redcost_levels, "reduced-cost levels, e.g. 10,20,inf")
        ->delimiter(',');
    sub->add_option("--tighten", common.tighten, "time-window factor applied on load")
        ->check(CLI::Range(1e-9, 1.0));
    sub->add_option("--max-columns", common.max_columns, "columns added per iteration");
    sub->add_option("--threads", common.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--keep-fraction", common.keep_fraction,
                    "arc share kept by random_s/cost_s without a model")
        ->check(CLI::Range(0.0, 1.0));
    sub->add_flag("--keep-reduced", common.keep_reduced,
                  "allow returning to the reduced network after its first failure");
    sub->add_flag("--no-timing", common.no_timing, "omit wall-clock columns from CSV output");
  };

  // collect
  auto* collect = app.add_subcommand("collect", "solve instances with the baseline and write a labeled dataset");
  std::vector<std::string> collect_inputs;
  std::string dataset_out;
  collect->add_option("instances", collect_inputs, "instance files");
  collect->add_option("-o,--out", dataset_out, "dataset CSV")->required();
  add_common(collect);

  // train
  auto* train = app.add_subcommand("train", "train an arc classifier on a dataset");
  std::string dataset_in, model_out, kind_name = "forest", weights_name = "balanced";
  double test_fraction = 0.2;
  LogisticHyper lhyper;
  ForestHyper fhyper;
  train->add_option("dataset", dataset_in, "dataset CSV")->required();
  train->add_option("-o,--out", model_out, "model file")->required();
  train->add_option("--kind", kind_name, "forest or logistic");
  train->add_option("--weights", weights_name, "balanced or uniform");
  train->add_option("--test-fraction", test_fraction, "instance share held out")->check(CLI::Range(0.0, 0.99));
  train->add_option("--c", lhyper.c, "logistic: inverse L2 strength");
  train->add_option("--max-iterations", lhyper.max_iterations, "logistic: iteration cap");
  train->add_option("--trees", fhyper.n_trees, "forest: number of trees");
  train->add_option("--max-depth", fhyper.max_depth, "forest: depth limit");
  train->add_option("--max-features", fhyper.max_features, "forest: features tried per split");
  train->add_option("--min-leaf", fhyper.min_samples_leaf, "forest: minimum samples per leaf");
  train->add_option("--min-split", fhyper.min_samples_split, "forest: minimum samples to split");
  add_common(train);

  // solve
  auto* solve = app.add_subcommand("solve", "solve one instance with one strategy");
  std::string solve_instance, strategy_name = "baseline", model_in, report_out, trace_out;
  solve->add_option("instance", solve_instance, "instance file")->required();
  solve->add_option("-s,--strategy", strategy_name,
                    "baseline, ml_s, random_s, cost_s, redcost_s or ml_redcost_s");
  solve->add_option("-m,--model", model_in, "model file");
  solve->add_option("--report", report_out, "report CSV");
  solve->add_option("--trace", trace_out, "per-iteration trace CSV");
  add_common(solve);

  // bench
  auto* bench = app.add_subcommand("bench", "run instances x strategies and write a comparison report");
  std::vector<std::string> bench_inputs, strategy_names{"baseline"};
  std::string bench_out, trace_dir;
  bench->add_option("instances", bench_inputs, "instance files")->required();
  bench->add_option("-s,--strategies", strategy_names, "comma-separated strategies")->delimiter(',');
  bench->add_option("-m,--model", model_in, "model file");
  bench->add_option("-o,--out", bench_out, "report CSV")->required();
  bench->add_option("--trace-dir", trace_dir, "directory for per-cell trace CSVs");
  add_common(bench);

  // report
  auto* report = app.add_subcommand("report", "merge report CSVs, recompute gains and averages, print a table");
  std::vector<std::string> report_inputs;
  std::string merged_out;
  report->add_option("reports", report_inputs, "report CSV files")->required();
  report->add_option("-o,--out", merged_out, "merged report CSV");
  add_common(report);

  // generate / tighten
  auto* generate = app.add_subcommand("generate", "write seeded synthetic instances in Solomon format");
  int gen_customers = 25, gen_count = 1;
  std::string gen_layout = "R", out_dir = ".", gen_prefix;
  GeneratorParams gparams;
  generate->add_option("-n,--customers", gen_customers, "customers per instance")->check(CLI::PositiveNumber);
  generate->add_option("--count", gen_count, "number of instances")->check(CLI::PositiveNumber);
  generate->add_option("--layout", gen_layout, "R, C or RC");
  generate->add_option("--prefix", gen_prefix, "file name prefix (default <layout>_<n>)");
  generate->add_option("--out-dir", out_dir, "output directory");
  generate->add_option("--capacity", gparams.capacity, "vehicle capacity");
  generate->add_option("--horizon", gparams.horizon, "depot window end");
  generate->add_option("--min-width", gparams.min_width, "smallest time-window width");
  generate->add_option("--max-width", gparams.max_width, "largest time-window width");
  add_common(generate);

  auto* tighten = app.add_subcommand("tighten", "write tightened copies of instance files");
  std::vector<std::string> tighten_inputs;
  tighten->add_option("instances", tighten_inputs, "instance files")->required();
  tighten->add_option("--out-dir", out_dir, "output directory")->required();
  add_common(tighten);

  CLI11_PARSE(app, argc, argv);

  try {
    const PipelineConfig base = to_config(common);
    const CsvOptions csv{!common.no_timing};

    if (*collect) {
      const auto summary = cmd_collect(collect_inputs, base);
      auto out = open_out(dataset_out);
      write_dataset(out, summary.dataset);
      for (const auto& e : summary.entries) {
        if (e.ok) {
          std::printf("%-24s rows %6zu  positive %.4f\n", e.instance.c_str(), e.rows, e.positive_fraction);
        } else {
          std::fprintf(stderr, "%-24s skipped: %s\n", e.instance.c_str(), e.error.c_str());
        }
      }
      std::printf("%zu samples written to %s\n", summary.dataset.size(), dataset_out.c_str());
      return summary.all_ok() ? 0 : 1;
    }

    if (*train) {
      auto in = open_in(dataset_in);
      const auto data = read_dataset(in);
      PipelineConfig cfg = base;
      cfg.test_fraction = test_fraction;
      const ClassWeighting w = weights_name == "uniform" ? ClassWeighting::uniform
                             : weights_name == "balanced"
                                 ? ClassWeighting::balanced
                                 : throw std::invalid_argument("unknown weighting " + weights_name);
      cfg.logistic = lhyper;
      cfg.logistic.weights = w;
      cfg.forest = fhyper;
      cfg.forest.weights = w;
      const auto outcome = cmd_train(data, parse_model_kind(kind_name), cfg);
      auto out = open_out(model_out);
      save_model(out, outcome.model);
      std::printf("trained %s on %zu instances, held out %zu\n", kind_name.c_str(),
                  outcome.split.train_instances.size(), outcome.split.test_instances.size());
      if (outcome.model.kind == ModelKind::logistic) {
        std::printf("iterations %d  gradient max-norm %.3g\n", outcome.model.iterations,
                    outcome.model.gradient_norm);
      }
      if (outcome.held_out) print_metrics(*outcome.held_out);
      return 0;
    }

    if (*solve) {
      const auto model = maybe_model(model_in);
      const auto inst = load_instance(solve_instance, base);
      const auto outcome = cmd_solve(inst, parse_strategy(strategy_name), model ? &*model : nullptr, base);
      const std::vector<ReportRow> rows{outcome.row};
      if (!report_out.empty()) {
        auto out = open_out(report_out);
        write_report(out, rows, csv);
      }
      if (!trace_out.empty()) {
        auto out = open_out(trace_out);
        write_trace(out, outcome.result.stats.per_iteration, csv);
      }
      print_report_table(std::cout, rows);
      return 0;
    }

    if (*bench) {
      const auto model = maybe_model(model_in);
      std::vector<Strategy> strategies;
      for (const auto& s : strategy_names) strategies.push_back(parse_strategy(s));
      std::vector<NamedInstance> instances;
      bool loaded_all = true;
      for (const auto& p : bench_inputs) {
        try {
          instances.push_back(load_instance(p, base));
        } catch (const std::exception& ex) {
          std::fprintf(stderr, "%s: %s\n", p.c_str(), ex.what());
          loaded_all = false;
        }
      }
      const auto outcome = cmd_bench(instances, strategies, model ? &*model : nullptr, base);
      {
        auto out = open_out(bench_out);
        write_report(out, outcome.report, csv);
      }
      if (!trace_dir.empty()) {
        fs::create_directories(trace_dir);
        for (std::size_t k = 0; k < outcome.traces.size(); ++k) {
          auto out = open_out((fs::path(trace_dir) / (outcome.cell_names[k] + ".trace.csv")).string());
          write_trace(out, outcome.traces[k], csv);
        }
      }
      print_report_table(std::cout, outcome.report);
      std::printf("max |objective - baseline| = %.3g\n", max_objective_diff(outcome.report));
      return loaded_all && outcome.all_ok() ? 0 : 1;
    }

    if (*report) {
      std::vector<ReportRow> rows;
      for (const auto& p : report_inputs) {
        auto in = open_in(p);
        auto part = read_report(in);
        rows.insert(rows.end(), part.begin(), part.end());
      }
      const auto merged = assemble_report(std::move(rows));
      if (!merged_out.empty()) {
        auto out = open_out(merged_out);
        write_report(out, merged, csv);
      }
      print_report_table(std::cout, merged);
      return 0;
    }

    if (*generate) {
      if (gen_layout == "R") {
        gparams.layout = Layout::random;
      } else if (gen_layout == "C") {
        gparams.layout = Layout::clustered;
      } else if (gen_layout == "RC") {
        gparams.layout = Layout::mixed;
      } else {
        throw std::invalid_argument("unknown layout " + gen_layout);
      }
      const std::string prefix =
          gen_prefix.empty() ? gen_layout + "_" + std::to_string(gen_customers) : gen_prefix;
      fs::create_directories(out_dir);
      std::vector<ManifestEntry> manifest;
      for (int k = 0; k < gen_count; ++k) {
        const auto seed = derive_seed(common.seed, "generate:" + prefix, static_cast<std::uint64_t>(k));
        auto inst = generate_random(gen_customers, seed, gparams);
        inst.name = prefix + "_" + std::to_string(k + 1);
        if (common.tighten != 1.0) inst = tighten_windows(inst, common.tighten);
        const std::string file = inst.name + ".txt";
        auto out = open_out((fs::path(out_dir) / file).string());
        write_instance(out, inst);
        manifest.push_back(ManifestEntry{file, "generated", gen_layout, gen_customers, seed, common.tighten});
      }
      auto out = open_out((fs::path(out_dir) / (prefix + ".manifest.json")).string());
      write_manifest(out, manifest);
      std::printf("wrote %d instances to %s\n", gen_count, out_dir.c_str());
      return 0;
    }

    if (*tighten) {
      fs::create_directories(out_dir);
      std::vector<ManifestEntry> manifest;
      for (const auto& p : tighten_inputs) {
        const auto inst = load_instance(p, base);
        const std::string file = fs::path(p).filename().string();
        auto out = open_out((fs::path(out_dir) / file).string());
        write_instance(out, inst.instance);
        manifest.push_back(ManifestEntry{file, p, "", static_cast<int>(inst.instance.customers.size()), 0,
                                         common.tighten});
      }
      auto out = open_out((fs::path(out_dir) / "manifest.json").string());
      write_manifest(out, manifest);
      return 0;
    }
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 1;
  }
  return 0;
}
