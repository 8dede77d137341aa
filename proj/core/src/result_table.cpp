#include "phykrig/result_table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <tuple>

namespace phykrig {

std::string format_double_17g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void ResultTable::add(const std::string& experiment, const std::string& model, long long seed,
                      const std::string& metric, double value) {
  cells_.push_back({experiment, model, seed, metric, value, false, ""});
}

void ResultTable::add_failure(const std::string& experiment, const std::string& model,
                              long long seed, const std::string& metric,
                              const std::string& error) {
  cells_.push_back({experiment, model, seed, metric,
                    std::numeric_limits<double>::quiet_NaN(), true, error});
}

void ResultTable::merge(const ResultTable& other) {
  cells_.insert(cells_.end(), other.cells_.begin(), other.cells_.end());
}

bool ResultTable::any_failed() const {
  return std::any_of(cells_.begin(), cells_.end(),
                     [](const ResultCell& c) { return c.failed; });
}

std::vector<std::string> ResultTable::failures() const {
  std::vector<std::string> out;
  for (const ResultCell& c : cells_) {
    if (c.failed) {
      out.push_back(c.experiment + "/" + c.model + "/" + std::to_string(c.seed) + "/" + c.metric +
                    ": " + c.error);
    }
  }
  return out;
}

void ResultTable::append_aggregates() {
  std::map<std::tuple<std::string, std::string, std::string>, std::vector<double>> groups;
  for (const ResultCell& c : cells_) {
    if (c.failed || c.seed < 0) continue;
    groups[{c.experiment, c.model, c.metric}].push_back(c.value);
  }
  for (const auto& [key, values] : groups) {
    const auto& [experiment, model, metric] = key;
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= n;  // population variance, matching "error bars" usage
    add(experiment, model, -1, "mean_" + metric, mean);
    add(experiment, model, -1, "std_" + metric, std::sqrt(var));
  }
}

std::string ResultTable::to_csv() const {
  std::vector<ResultCell> sorted = cells_;
  std::sort(sorted.begin(), sorted.end(), [](const ResultCell& a, const ResultCell& b) {
    return std::tie(a.experiment, a.model, a.seed, a.metric) <
           std::tie(b.experiment, b.model, b.seed, b.metric);
  });
  std::string out = "experiment,model,seed,metric,value\n";
  for (const ResultCell& c : sorted) {
    out += c.experiment + "," + c.model + "," + std::to_string(c.seed) + "," + c.metric + "," +
           format_double_17g(c.value) + "\n";
  }
  return out;
}

std::string PlotTable::to_csv() const {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i > 0) out += ',';
    out += columns[i];
  }
  out += '\n';
  for (Eigen::Index r = 0; r < data.rows(); ++r) {
    for (Eigen::Index c = 0; c < data.cols(); ++c) {
      if (c > 0) out += ',';
      out += format_double_17g(data(r, c));
    }
    out += '\n';
  }
  return out;
}

}  // namespace phykrig
