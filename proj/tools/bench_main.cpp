#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "phykrig/errors.hpp"
#include "phykrig/forrester_bench.hpp"
#include "phykrig/outputs.hpp"
#include "phykrig/pendulum_bench.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "bench-out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool quick = false;
};

phykrig::ExperimentConfig load_config(const CommonArgs& args) {
  phykrig::ExperimentConfig config;
  if (!args.config_path.empty()) {
    std::ifstream in(args.config_path);
    if (!in) throw phykrig::ConfigError("cannot open config file: " + args.config_path);
    config = phykrig::ExperimentConfig::parse(in);
  }
  if (args.quick) config.apply_quick();
  if (args.seed_set) config.seed = args.seed;
  return config;
}

int finish(const phykrig::ExperimentConfig& config, const CommonArgs& args,
           const phykrig::RunOutputs& outputs) {
  phykrig::emit_outputs(args.out_dir, config, outputs);
  const auto failures = outputs.table.failures();
  for (const std::string& f : failures) std::cerr << "failed: " << f << "\n";
  std::cout << "wrote " << args.out_dir << "/results.csv ("
            << outputs.table.cells().size() << " rows, " << failures.size() << " failed)\n";
  return outputs.table.any_failed() ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"surrogate-model benchmark harness"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string models_csv, scenarios_csv;
  int reps = -1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", args.config_path, "configuration file (key = value lines)");
    cmd->add_option("--seed", args.seed, "root seed")->each([&](const std::string&) {
      args.seed_set = true;
    });
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_flag("--quick", args.quick, "reduced sizes for fast runs");
  };

  CLI::App* forrester = app.add_subcommand("forrester", "surrogate comparison on the test function");
  add_common(forrester);
  forrester->add_option("--models", models_csv, "comma-separated model list");

  CLI::App* pendulum = app.add_subcommand("pendulum", "model-based RL scenario suite");
  add_common(pendulum);
  pendulum->add_option("--scenarios", scenarios_csv, "comma-separated scenario list");
  pendulum->add_option("--reps", reps, "repetitions per scenario");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    phykrig::ExperimentConfig config = load_config(args);
    if (forrester->parsed()) {
      if (!models_csv.empty()) config.set_key("forrester.models", models_csv);
      phykrig::ForresterRun run = phykrig::run_forrester(config);
      phykrig::RunOutputs outputs;
      outputs.table = std::move(run.table);
      outputs.forrester_fit = std::move(run.fit_plot);
      return finish(config, args, outputs);
    }
    if (!scenarios_csv.empty()) config.set_key("pendulum.scenarios", scenarios_csv);
    if (reps > 0) config.pendulum.reps = reps;
    phykrig::PendulumRun run = phykrig::run_pendulum(config);
    phykrig::RunOutputs outputs;
    outputs.table = std::move(run.table);
    outputs.pendulum_curves = std::move(run.curves);
    return finish(config, args, outputs);
  } catch (const phykrig::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
