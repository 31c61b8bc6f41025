#pragma once

// Uniform result records for suite entries, with JSON and CSV writers.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sobolev/convergence.hpp"
#include "sobolev/counterexamples.hpp"

namespace sobolev::reports {

enum class Comparator { AtMost, AtLeast };
const char* to_string(Comparator c);

struct Metric {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  Comparator comparator = Comparator::AtMost;
  bool pass = false;
};

/// NaN never passes.
bool compare(double value, Comparator c, double threshold);
Metric metric(std::string name, double value, Comparator c, double threshold);
inline Metric at_most(std::string name, double value, double threshold) {
  return metric(std::move(name), value, Comparator::AtMost, threshold);
}
inline Metric at_least(std::string name, double value, double threshold) {
  return metric(std::move(name), value, Comparator::AtLeast, threshold);
}

/// Named result and the formula it realizes.
struct Anchor {
  std::string result;
  std::string quote;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct Report {
  std::string entry;
  std::string op;
  Anchor anchor;
  std::string sample;
  nlohmann::json params = nlohmann::json::object();
  Table table;
  std::optional<double> fitted_slope;
  std::optional<double> residual;
  std::string verdict;
  std::vector<Metric> metrics;
  std::string error;  // set when the entry threw

  bool pass() const;
  /// Replaces the threshold of a metric and recomputes its pass flag; false if absent.
  bool override_threshold(const std::string& metric, double threshold);
};

nlohmann::json to_json(const Report& r);
void write_table_csv(const Report& r, std::ostream& out);
/// Columns entry,metric,value,threshold,pass; entries that threw get an "error" row.
void write_summary_csv(const std::vector<Report>& reports, std::ostream& out);

Table convergence_table(const fit::ConvergenceReport& c, const std::string& error_column);
Table witness_table(const counterexamples::WitnessTable& w);

}  // namespace sobolev::reports
