#include "mlcg/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mlcg {

namespace {

constexpr const char* kReportMagic = "# mlcg-report v";
constexpr const char* kTraceMagic = "# mlcg-trace v";

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_num(const std::string& t, int line_no) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size()) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": bad number '" + t + "'");
  }
  return v;
}

std::string clean(std::string s) {
  std::replace_if(s.begin(), s.end(), [](char c) { return c == ',' || c == '\n' || c == '\r'; }, ';');
  return s;
}

void check_field(const std::string& s, const char* what) {
  if (s.find_first_of(",\n\r") != std::string::npos) {
    throw std::invalid_argument(std::string(what) + " may not contain ',' or newlines: " + s);
  }
}

// Reads the version comment and the header line; returns column -> index.
std::map<std::string, std::size_t> read_header(std::istream& in, const char* magic, int version,
                                               int& line_no) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("file is empty");
  line_no = 1;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::string m(magic);
  if (line.rfind(m, 0) != 0) throw std::runtime_error("missing '" + m + "' version line");
  const int v = static_cast<int>(parse_num(line.substr(m.size()), line_no));
  if (v != version) throw std::runtime_error("unsupported schema version " + std::to_string(v));
  if (!std::getline(in, line)) throw std::runtime_error("missing header line");
  line_no = 2;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::map<std::string, std::size_t> cols;
  const auto names = split(line);
  for (std::size_t k = 0; k < names.size(); ++k) cols[names[k]] = k;
  return cols;
}

struct Row {
  const std::map<std::string, std::size_t>& cols;
  std::vector<std::string> fields;
  int line_no;

  const std::string* get(const std::string& name) const {
    auto it = cols.find(name);
    return it == cols.end() ? nullptr : &fields[it->second];
  }
  const std::string& need(const std::string& name) const {
    const auto* f = get(name);
    if (!f) throw std::runtime_error("missing column '" + name + "'");
    return *f;
  }
  double number(const std::string& name, double fallback = 0.0) const {
    const auto* f = get(name);
    return f && !f->empty() ? parse_num(*f, line_no) : fallback;
  }
  std::optional<double> optional(const std::string& name) const {
    const auto* f = get(name);
    if (!f || f->empty()) return std::nullopt;
    return parse_num(*f, line_no);
  }
};

}  // namespace

double gain_percent(double total, double baseline_total) {
  if (!(baseline_total > 0.0)) throw std::invalid_argument("baseline total time must be positive");
  return 100.0 * (1.0 - total / baseline_total);
}

ReportRow make_row(const std::string& instance, int customers, Strategy strategy,
                   const RunStats& stats, double objective, double inference_seconds) {
  ReportRow r;
  r.instance = instance;
  r.customers = customers;
  r.strategy = std::string(to_string(strategy));
  r.iterations = stats.iterations;
  r.full_network_iterations = stats.full_network_iterations;
  r.pp_seconds = stats.pp_seconds;
  r.rmp_seconds = stats.rmp_seconds;
  r.inference_seconds = inference_seconds;
  r.total_seconds = stats.total_seconds + inference_seconds;
  r.objective = objective;
  return r;
}

std::vector<ReportRow> assemble_report(std::vector<ReportRow> rows) {
  std::erase_if(rows, [](const ReportRow& r) { return r.average; });
  const std::string base(to_string(Strategy::baseline));
  std::map<std::string, const ReportRow*> baseline;
  for (const auto& r : rows) {
    if (r.strategy == base && r.ok) baseline.emplace(r.instance, &r);
  }
  std::vector<ReportRow> data = rows;
  for (auto& r : data) {
    r.objective_diff.reset();
    r.gain.reset();
    auto it = baseline.find(r.instance);
    if (!r.ok || it == baseline.end()) continue;
    r.objective_diff = std::abs(r.objective - it->second->objective);
    if (it->second->total_seconds > 0.0) r.gain = gain_percent(r.total_seconds, it->second->total_seconds);
  }
  std::stable_sort(data.begin(), data.end(),
                   [](const ReportRow& a, const ReportRow& b) { return a.customers < b.customers; });

  std::vector<ReportRow> out;
  for (std::size_t g = 0; g < data.size();) {
    std::size_t end = g;
    while (end < data.size() && data[end].customers == data[g].customers) ++end;
    std::vector<std::string> strategies;
    for (std::size_t k = g; k < end; ++k) {
      out.push_back(data[k]);
      if (std::find(strategies.begin(), strategies.end(), data[k].strategy) == strategies.end()) {
        strategies.push_back(data[k].strategy);
      }
    }
    for (const auto& s : strategies) {
      std::vector<const ReportRow*> members;
      for (std::size_t k = g; k < end; ++k) {
        if (data[k].strategy == s && data[k].ok) members.push_back(&data[k]);
      }
      if (members.size() < 2) continue;
      ReportRow avg;
      avg.instance = "average";
      avg.customers = data[g].customers;
      avg.strategy = s;
      avg.average = true;
      const double n = static_cast<double>(members.size());
      double gain_sum = 0.0;
      int gains = 0;
      for (const auto* m : members) {
        avg.iterations += m->iterations / n;
        avg.full_network_iterations += m->full_network_iterations / n;
        avg.pp_seconds += m->pp_seconds / n;
        avg.rmp_seconds += m->rmp_seconds / n;
        avg.inference_seconds += m->inference_seconds / n;
        avg.total_seconds += m->total_seconds / n;
        avg.objective += m->objective / n;
        if (m->objective_diff) avg.objective_diff = std::max(avg.objective_diff.value_or(0.0), *m->objective_diff);
        if (m->gain) {
          gain_sum += *m->gain;
          ++gains;
        }
      }
      if (gains > 0) avg.gain = gain_sum / gains;
      out.push_back(avg);
    }
    g = end;
  }
  return out;
}

double max_objective_diff(std::span<const ReportRow> rows) {
  double m = 0.0;
  for (const auto& r : rows) {
    if (!r.average && r.ok && r.objective_diff) m = std::max(m, *r.objective_diff);
  }
  return m;
}

void write_report(std::ostream& out, std::span<const ReportRow> rows, const CsvOptions& opt) {
  out << kReportMagic << kReportSchemaVersion << '\n';
  out << "instance,customers,strategy,row,status,iterations,full_network_iterations";
  if (opt.timing) out << ",pp_seconds,rmp_seconds,inference_seconds,total_seconds";
  out << ",objective,objective_diff";
  if (opt.timing) out << ",gain";
  out << ",error\n";
  for (const auto& r : rows) {
    check_field(r.instance, "instance name");
    check_field(r.strategy, "strategy name");
    out << r.instance << ',' << r.customers << ',' << r.strategy << ','
        << (r.average ? "average" : "data") << ',' << (r.ok ? "ok" : "failed") << ','
        << num(r.iterations) << ',' << num(r.full_network_iterations);
    if (opt.timing) {
      out << ',' << num(r.pp_seconds) << ',' << num(r.rmp_seconds) << ','
          << num(r.inference_seconds) << ',' << num(r.total_seconds);
    }
    out << ',' << (r.ok ? num(r.objective) : std::string()) << ',' << opt_num(r.objective_diff);
    if (opt.timing) out << ',' << opt_num(r.gain);
    out << ',' << clean(r.error) << '\n';
  }
}

std::vector<ReportRow> read_report(std::istream& in) {
  int line_no = 0;
  const auto cols = read_header(in, kReportMagic, kReportSchemaVersion, line_no);
  std::vector<ReportRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    Row f{cols, split(line), line_no};
    if (f.fields.size() != cols.size()) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": wrong field count");
    }
    ReportRow r;
    r.instance = f.need("instance");
    r.customers = static_cast<int>(f.number("customers"));
    r.strategy = f.need("strategy");
    r.average = f.need("row") == "average";
    r.ok = f.need("status") == "ok";
    r.error = f.need("error");
    r.iterations = f.number("iterations");
    r.full_network_iterations = f.number("full_network_iterations");
    r.pp_seconds = f.number("pp_seconds");
    r.rmp_seconds = f.number("rmp_seconds");
    r.inference_seconds = f.number("inference_seconds");
    r.total_seconds = f.number("total_seconds");
    r.objective = f.number("objective");
    r.objective_diff = f.optional("objective_diff");
    r.gain = f.optional("gain");
    rows.push_back(std::move(r));
  }
  return rows;
}

void print_report_table(std::ostream& out, std::span<const ReportRow> rows) {
  std::ostringstream s;
  s << std::left << std::setw(18) << "Instance" << std::setw(14) << "Strategy" << std::right
    << std::setw(8) << "#Itr" << std::setw(8) << "#ItrG" << std::setw(10) << "PP" << std::setw(10)
    << "RMP" << std::setw(10) << "Total" << std::setw(14) << "Objective" << std::setw(9) << "Gain"
    << '\n';
  for (const auto& r : rows) {
    s << std::left << std::setw(18) << (r.average ? "avg(" + std::to_string(r.customers) + ")" : r.instance)
      << std::setw(14) << r.strategy << std::right;
    if (!r.ok) {
      s << "  failed: " << r.error << '\n';
      continue;
    }
    s << std::fixed << std::setprecision(r.average ? 1 : 0) << std::setw(8) << r.iterations
      << std::setw(8) << r.full_network_iterations << std::setprecision(3) << std::setw(10)
      << r.pp_seconds << std::setw(10) << r.rmp_seconds << std::setw(10) << r.total_seconds
      << std::setprecision(4) << std::setw(14) << r.objective;
    if (r.gain) {
      s << std::setprecision(0) << std::setw(8) << *r.gain << '%';
    } else {
      s << std::setw(9) << "-";
    }
    s << '\n';
  }
  out << s.str();
}

void write_trace(std::ostream& out, std::span<const IterationRecord> trace, const CsvOptions& opt) {
  out << kTraceMagic << kReportSchemaVersion << '\n';
  out << "iteration,network,level,pricing_calls,columns,labels_created";
  if (opt.timing) out << ",pricing_seconds,rmp_seconds";
  out << ",objective\n";
  for (const auto& r : trace) {
    out << r.index << ',' << to_string(r.network) << ','
        << (r.level == kUnlimited ? std::string("inf") : std::to_string(r.level)) << ','
        << r.pricing_calls << ',' << r.columns << ',' << r.labels_created;
    if (opt.timing) out << ',' << num(r.pricing_seconds) << ',' << num(r.rmp_seconds);
    out << ',' << num(r.objective) << '\n';
  }
}

std::vector<IterationRecord> read_trace(std::istream& in) {
  int line_no = 0;
  const auto cols = read_header(in, kTraceMagic, kReportSchemaVersion, line_no);
  std::vector<IterationRecord> trace;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    Row f{cols, split(line), line_no};
    if (f.fields.size() != cols.size()) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": wrong field count");
    }
    IterationRecord r;
    r.index = static_cast<int>(f.number("iteration"));
    const auto& tag = f.need("network");
    if (tag == "G") {
      r.network = NetworkTag::full;
    } else if (tag == "Gr") {
      r.network = NetworkTag::reduced;
    } else {
      throw std::runtime_error("line " + std::to_string(line_no) + ": unknown network tag " + tag);
    }
    const auto& level = f.need("level");
    r.level = level == "inf" ? kUnlimited : static_cast<int>(parse_num(level, line_no));
    r.pricing_calls = static_cast<int>(f.number("pricing_calls"));
    r.columns = static_cast<int>(f.number("columns"));
    r.labels_created = static_cast<std::size_t>(f.number("labels_created"));
    r.pricing_seconds = f.number("pricing_seconds");
    r.rmp_seconds = f.number("rmp_seconds");
    r.objective = f.number("objective");
    trace.push_back(r);
  }
  return trace;
}

}  // namespace mlcg
