#pragma once

// Comparison reports (one row per instance x strategy, plus per-size
// average rows) and per-iteration traces, as CSV.

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlcg/colgen.hpp"

namespace mlcg {

inline constexpr int kReportSchemaVersion = 1;

struct ReportRow {
  std::string instance;
  int customers = 0;  // grouping key for average rows
  std::string strategy;
  bool average = false;
  bool ok = true;
  std::string error;  // set when !ok
  // Counts are doubles so average rows can hold means.
  double iterations = 0;
  double full_network_iterations = 0;
  double pp_seconds = 0.0;
  double rmp_seconds = 0.0;
  double inference_seconds = 0.0;  // model prediction, included in total
  double total_seconds = 0.0;
  double objective = 0.0;
  std::optional<double> objective_diff;  // |objective - baseline objective|
  std::optional<double> gain;            // percent, vs the baseline row
};

/// 100 * (1 - total / baseline_total).
double gain_percent(double total, double baseline_total);

ReportRow make_row(const std::string& instance, int customers, Strategy strategy,
                   const RunStats& stats, double objective, double inference_seconds = 0.0);

/// Drops existing average rows, fills objective_diff and gain of every data
/// row against the baseline row of the same instance, then appends one
/// average row per (customers, strategy) group. An average row's gain is
/// the mean of its instances' gains. Output order: data rows grouped by
/// customer count, then the group's averages.
std::vector<ReportRow> assemble_report(std::vector<ReportRow> rows);

/// Largest objective_diff over ok data rows (0 when none).
double max_objective_diff(std::span<const ReportRow> rows);

struct CsvOptions {
  bool timing = true;  // false drops every wall-clock column, and gain
};

void write_report(std::ostream& out, std::span<const ReportRow> rows, const CsvOptions& opt = {});
/// Accepts files written with or without timing columns.
std::vector<ReportRow> read_report(std::istream& in);

/// Fixed-width text table, one line per row.
void print_report_table(std::ostream& out, std::span<const ReportRow> rows);

void write_trace(std::ostream& out, std::span<const IterationRecord> trace,
                 const CsvOptions& opt = {});
std::vector<IterationRecord> read_trace(std::istream& in);

}  // namespace mlcg
