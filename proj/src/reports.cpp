#include "sobolev/reports.hpp"

#include <cmath>
#include <ostream>

#include "sobolev/io.hpp"

namespace sobolev::reports {

using nlohmann::json;

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(io::format_number(v)); }

void csv_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
  out << '\n';
}

}  // namespace

const char* to_string(Comparator c) { return c == Comparator::AtMost ? "<=" : ">="; }

bool compare(double value, Comparator c, double threshold) {
  if (std::isnan(value)) return false;
  return c == Comparator::AtMost ? value <= threshold : value >= threshold;
}

Metric metric(std::string name, double value, Comparator c, double threshold) {
  return {std::move(name), value, threshold, c, compare(value, c, threshold)};
}

bool Report::pass() const {
  if (!error.empty()) return false;
  for (const auto& m : metrics) {
    if (!m.pass) return false;
  }
  return true;
}

bool Report::override_threshold(const std::string& name, double threshold) {
  bool found = false;
  for (auto& m : metrics) {
    if (m.name != name) continue;
    m.threshold = threshold;
    m.pass = compare(m.value, m.comparator, threshold);
    found = true;
  }
  return found;
}

json to_json(const Report& r) {
  json j;
  j["entry"] = r.entry;
  j["op"] = r.op;
  j["anchor"] = {{"result", r.anchor.result}, {"quote", r.anchor.quote}};
  j["sample"] = r.sample.empty() ? json(nullptr) : json(r.sample);
  j["params"] = r.params;
  json rows = json::array();
  for (const auto& row : r.table.rows) {
    json jr = json::array();
    for (double v : row) jr.push_back(number(v));
    rows.push_back(std::move(jr));
  }
  j["table"] = {{"columns", r.table.columns}, {"rows", std::move(rows)}};
  j["fitted_slope"] = r.fitted_slope ? number(*r.fitted_slope) : json(nullptr);
  j["residual"] = r.residual ? number(*r.residual) : json(nullptr);
  j["verdict"] = r.verdict;
  json ms = json::array();
  for (const auto& m : r.metrics) {
    ms.push_back({{"name", m.name},
                  {"value", number(m.value)},
                  {"threshold", number(m.threshold)},
                  {"comparator", to_string(m.comparator)},
                  {"pass", m.pass}});
  }
  j["metrics"] = std::move(ms);
  if (!r.error.empty()) j["error"] = r.error;
  j["pass"] = r.pass();
  return j;
}

void write_table_csv(const Report& r, std::ostream& out) {
  csv_row(out, r.table.columns);
  for (const auto& row : r.table.rows) {
    std::vector<std::string> cells;
    for (double v : row) cells.push_back(io::format_number(v));
    csv_row(out, cells);
  }
}

void write_summary_csv(const std::vector<Report>& reports, std::ostream& out) {
  csv_row(out, {"entry", "metric", "value", "threshold", "pass"});
  for (const auto& r : reports) {
    if (!r.error.empty()) {
      csv_row(out, {r.entry, "error", "nan", "nan", "false"});
      continue;
    }
    for (const auto& m : r.metrics) {
      csv_row(out, {r.entry, m.name, io::format_number(m.value),
                    io::format_number(m.threshold), m.pass ? "true" : "false"});
    }
  }
}

Table convergence_table(const fit::ConvergenceReport& c, const std::string& error_column) {
  Table t{{"h", error_column}, {}};
  for (const auto& [h, e] : c.points) t.rows.push_back({h, e});
  return t;
}

Table witness_table(const counterexamples::WitnessTable& w) {
  Table t{{w.parameter, "measured", "oracle", "ratio"}, {}};
  bool aux = false;
  for (const auto& row : w.rows) aux = aux || row.aux != 0.0;
  if (aux) t.columns.push_back("t");
  for (const auto& row : w.rows) {
    t.rows.push_back({row.param, row.measured, row.oracle, row.ratio});
    if (aux) t.rows.back().push_back(row.aux);
  }
  return t;
}

}  // namespace sobolev::reports
