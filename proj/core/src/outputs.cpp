#include "phykrig/outputs.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "phykrig/errors.hpp"

namespace phykrig {

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << content;
  if (!out) throw IoError("write failed: " + path.string());
}

std::string build_summary(const ResultTable& table) {
  std::ostringstream out;
  out << "run summary\n===========\n";
  // Group aggregate rows for a compact mean +/- std listing.
  std::map<std::pair<std::string, std::string>, std::map<std::string, double>> agg;
  for (const ResultCell& c : table.cells()) {
    if (c.seed == -1 && !c.failed) agg[{c.experiment, c.model}][c.metric] = c.value;
  }
  std::string last_experiment;
  for (const auto& [key, metrics] : agg) {
    const auto& [experiment, model] = key;
    if (experiment != last_experiment) {
      out << "\n[" << experiment << "]\n";
      last_experiment = experiment;
    }
    out << "  " << model << ":";
    std::set<std::string> bases;
    for (const auto& [metric, value] : metrics) {
      (void)value;
      if (metric.rfind("mean_", 0) == 0) bases.insert(metric.substr(5));
    }
    for (const std::string& base : bases) {
      const auto mean_it = metrics.find("mean_" + base);
      const auto std_it = metrics.find("std_" + base);
      out << "  " << base << " = " << format_double_17g(mean_it->second);
      if (std_it != metrics.end()) out << " +/- " << format_double_17g(std_it->second);
    }
    out << "\n";
  }
  const auto failures = table.failures();
  out << "\nfailed cells: " << failures.size() << "\n";
  for (const std::string& f : failures) out << "  " << f << "\n";
  return out.str();
}

}  // namespace

void emit_outputs(const std::string& out_dir, const ExperimentConfig& config,
                  const RunOutputs& outputs) {
  std::error_code ec;
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory: " + dir.string() + ": " + ec.message());

  write_file(dir / "results.csv", outputs.table.to_csv());
  write_file(dir / "summary.txt", build_summary(outputs.table));
  write_file(dir / "config_resolved.txt", config.serialize());
  if (outputs.forrester_fit) {
    write_file(dir / "forrester_fit.csv", outputs.forrester_fit->to_csv());
  }
  if (outputs.pendulum_curves) {
    write_file(dir / "pendulum_curves.csv", outputs.pendulum_curves->to_csv());
  }

  // Timestamps live only here so every other file is reproducible.
  const auto now = std::chrono::system_clock::now();
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch());
  std::ostringstream meta;
  meta << "unix_time = " << seconds.count() << "\n";
  write_file(dir / "metadata.txt", meta.str());
}

}  // namespace phykrig
