#pragma once

#include <optional>
#include <string>

#include "phykrig/bench_config.hpp"
#include "phykrig/result_table.hpp"

namespace phykrig {

// Files written into the output directory. Everything except metadata.txt is
// byte-deterministic given (config, seed); timestamps and host details are
// quarantined in metadata.txt.
struct RunOutputs {
  ResultTable table;                    // with aggregates
  std::optional<PlotTable> forrester_fit;
  std::optional<PlotTable> pendulum_curves;
};

// Writes results.csv, summary.txt, config_resolved.txt, metadata.txt and the
// present plot tables (forrester_fit.csv / pendulum_curves.csv). Creates the
// directory if needed; throws IoError with the path on failure.
void emit_outputs(const std::string& out_dir, const ExperimentConfig& config,
                  const RunOutputs& outputs);

}  // namespace phykrig
