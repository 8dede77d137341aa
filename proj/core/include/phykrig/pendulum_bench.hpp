#pragma once

#include "phykrig/bench_config.hpp"
#include "phykrig/dyna.hpp"
#include "phykrig/result_table.hpp"

namespace phykrig {

struct PendulumRun {
  ResultTable table;   // trials_to_threshold and final_cost per (scenario, rep)
  PlotTable curves;    // trial index, per-run cost curves, per-scenario mean/std
};

// Builds the per-run training configuration for (scenario, rep) under the
// given root seed: the derived run seed, the true system, the crude
// (mis-parameterized) physics shared by all scenarios of the same rep, and
// the reduced refit optimizer settings.
DynaConfig make_dyna_config(const ExperimentConfig& config, Scenario scenario, int rep);

// Every requested scenario x repetition, each with a derived seed; failures
// recorded per run, aggregation over completed runs.
PendulumRun run_pendulum(const ExperimentConfig& config);

}  // namespace phykrig
