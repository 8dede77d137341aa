#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace phykrig {

// One (experiment, model, seed, metric) measurement. Aggregate rows use
// seed = -1. Failed cells keep their error text for the summary and emit a
// NaN value in the CSV so the cell is never silently missing.
struct ResultCell {
  std::string experiment;
  std::string model;
  long long seed = 0;
  std::string metric;
  double value = 0.0;
  bool failed = false;
  std::string error;
};

std::string format_double_17g(double v);

class ResultTable {
public:
  void add(const std::string& experiment, const std::string& model, long long seed,
           const std::string& metric, double value);
  void add_failure(const std::string& experiment, const std::string& model, long long seed,
                   const std::string& metric, const std::string& error);
  void merge(const ResultTable& other);

  bool any_failed() const;
  std::vector<std::string> failures() const;  // "experiment/model/seed/metric: error"

  // Mean and population standard deviation per (experiment, model, metric)
  // over non-failed cells, appended as seed -1 rows with metric prefixed
  // mean_/std_.
  void append_aggregates();

  // Deterministic: rows sorted by (experiment, model, seed, metric); header
  // exactly `experiment,model,seed,metric,value`; doubles as %.17g.
  std::string to_csv() const;

  const std::vector<ResultCell>& cells() const { return cells_; }

private:
  std::vector<ResultCell> cells_;
};

// Small column-oriented table for plot-data files (x grids, learning
// curves); first line names the columns.
struct PlotTable {
  std::vector<std::string> columns;
  Eigen::MatrixXd data;

  std::string to_csv() const;
};

}  // namespace phykrig
