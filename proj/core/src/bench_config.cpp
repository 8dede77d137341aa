#include "phykrig/bench_config.hpp"

#include <cstdio>
#include <cstdlib>
#include <functional>
#include <istream>
#include <map>
#include <sstream>

#include "phykrig/errors.hpp"

namespace phykrig {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0') {
    throw ConfigError("config: bad number for '" + key + "': '" + value + "'");
  }
  return v;
}

long long parse_int(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const long long v = std::strtoll(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0') {
    throw ConfigError("config: bad integer for '" + key + "': '" + value + "'");
  }
  return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0' || value.find('-') != std::string::npos) {
    throw ConfigError("config: bad unsigned integer for '" + key + "': '" + value + "'");
  }
  return v;
}

std::vector<std::string> parse_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream stream(value);
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string join_list(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ',';
    out += items[i];
  }
  return out;
}

// One table drives both set_key and serialize so they can never drift apart.
struct KeyBinding {
  std::function<void(ExperimentConfig&, const std::string& key, const std::string& value)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};
using KeyTable = std::map<std::string, KeyBinding>;

using IntRef = std::function<int&(ExperimentConfig&)>;
using DoubleRef = std::function<double&(ExperimentConfig&)>;
using ListRef = std::function<std::vector<std::string>&(ExperimentConfig&)>;

void add_int(KeyTable& t, const std::string& key, IntRef ref) {
  t[key] = {[ref](ExperimentConfig& c, const std::string& k, const std::string& v) {
              ref(c) = static_cast<int>(parse_int(k, v));
            },
            [ref](const ExperimentConfig& c) {
              return std::to_string(ref(const_cast<ExperimentConfig&>(c)));
            }};
}

void add_double(KeyTable& t, const std::string& key, DoubleRef ref) {
  t[key] = {[ref](ExperimentConfig& c, const std::string& k, const std::string& v) {
              ref(c) = parse_double(k, v);
            },
            [ref](const ExperimentConfig& c) {
              return format_double(ref(const_cast<ExperimentConfig&>(c)));
            }};
}

void add_list(KeyTable& t, const std::string& key, ListRef ref) {
  t[key] = {[ref](ExperimentConfig& c, const std::string&, const std::string& v) {
              ref(c) = parse_list(v);
            },
            [ref](const ExperimentConfig& c) {
              return join_list(ref(const_cast<ExperimentConfig&>(c)));
            }};
}

const KeyTable& key_table() {
  static const KeyTable table = [] {
    KeyTable t;
    t["seed"] = {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
                   c.seed = parse_u64(k, v);
                 },
                 [](const ExperimentConfig& c) { return std::to_string(c.seed); }};

    add_int(t, "forrester.seeds", [](ExperimentConfig& c) -> int& { return c.forrester.seeds; });
    add_int(t, "forrester.observations",
            [](ExperimentConfig& c) -> int& { return c.forrester.observations; });
    add_double(t, "forrester.obs_low",
               [](ExperimentConfig& c) -> double& { return c.forrester.obs_low; });
    add_double(t, "forrester.obs_high",
               [](ExperimentConfig& c) -> double& { return c.forrester.obs_high; });
    add_int(t, "forrester.grid_points",
            [](ExperimentConfig& c) -> int& { return c.forrester.grid_points; });
    add_double(t, "forrester.grid_low",
               [](ExperimentConfig& c) -> double& { return c.forrester.grid_low; });
    add_double(t, "forrester.grid_high",
               [](ExperimentConfig& c) -> double& { return c.forrester.grid_high; });
    add_list(t, "forrester.models",
             [](ExperimentConfig& c) -> std::vector<std::string>& { return c.forrester.models; });
    add_int(t, "forrester.ar1_low_fidelity",
            [](ExperimentConfig& c) -> int& { return c.forrester.ar1_low_fidelity; });
    add_int(t, "forrester.rra_features",
            [](ExperimentConfig& c) -> int& { return c.forrester.rra_features; });
    add_double(t, "forrester.rra_lambda",
               [](ExperimentConfig& c) -> double& { return c.forrester.rra_lambda; });
    add_double(t, "forrester.rra_lengthscale",
               [](ExperimentConfig& c) -> double& { return c.forrester.rra_lengthscale; });
    add_int(t, "forrester.opt_iterations",
            [](ExperimentConfig& c) -> int& { return c.forrester.opt_iterations; });
    add_int(t, "forrester.opt_restarts",
            [](ExperimentConfig& c) -> int& { return c.forrester.opt_restarts; });
    add_double(t, "forrester.opt_lr",
               [](ExperimentConfig& c) -> double& { return c.forrester.opt_lr; });

    add_list(t, "pendulum.scenarios", [](ExperimentConfig& c) -> std::vector<std::string>& {
      return c.pendulum.scenarios;
    });
    add_int(t, "pendulum.reps", [](ExperimentConfig& c) -> int& { return c.pendulum.reps; });
    add_int(t, "pendulum.trials", [](ExperimentConfig& c) -> int& { return c.pendulum.trials; });
    add_int(t, "pendulum.cutoff", [](ExperimentConfig& c) -> int& { return c.pendulum.cutoff; });
    add_int(t, "pendulum.model_episodes",
            [](ExperimentConfig& c) -> int& { return c.pendulum.model_episodes; });
    add_int(t, "pendulum.sac_steps_real",
            [](ExperimentConfig& c) -> int& { return c.pendulum.sac_steps_real; });
    add_int(t, "pendulum.sac_steps_model",
            [](ExperimentConfig& c) -> int& { return c.pendulum.sac_steps_model; });
    add_int(t, "pendulum.sac_hidden",
            [](ExperimentConfig& c) -> int& { return c.pendulum.sac_hidden; });
    add_int(t, "pendulum.sac_batch",
            [](ExperimentConfig& c) -> int& { return c.pendulum.sac_batch; });
    add_double(t, "pendulum.sac_lr",
               [](ExperimentConfig& c) -> double& { return c.pendulum.sac_lr; });
    add_double(t, "pendulum.sac_gamma",
               [](ExperimentConfig& c) -> double& { return c.pendulum.sac_gamma; });
    add_double(t, "pendulum.sac_tau",
               [](ExperimentConfig& c) -> double& { return c.pendulum.sac_tau; });
    add_double(t, "pendulum.sac_init_alpha",
               [](ExperimentConfig& c) -> double& { return c.pendulum.sac_init_alpha; });
    add_int(t, "pendulum.dyn_opt_iterations",
            [](ExperimentConfig& c) -> int& { return c.pendulum.dyn_opt_iterations; });
    add_int(t, "pendulum.dyn_opt_restarts",
            [](ExperimentConfig& c) -> int& { return c.pendulum.dyn_opt_restarts; });
    add_int(t, "pendulum.dyn_max_points",
            [](ExperimentConfig& c) -> int& { return c.pendulum.dyn_max_points; });
    add_int(t, "pendulum.dyn_rra_features",
            [](ExperimentConfig& c) -> int& { return c.pendulum.dyn_rra_features; });
    add_double(t, "pendulum.dyn_rra_lambda",
               [](ExperimentConfig& c) -> double& { return c.pendulum.dyn_rra_lambda; });
    add_double(t, "pendulum.threshold",
               [](ExperimentConfig& c) -> double& { return c.pendulum.threshold; });
    return t;
  }();
  return table;
}

}  // namespace

void ExperimentConfig::set_key(const std::string& key, const std::string& value) {
  const KeyTable& table = key_table();
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError("config: unknown key '" + key + "'");
  it->second.set(*this, key, value);
}

ExperimentConfig ExperimentConfig::parse(std::istream& in) {
  ExperimentConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    }
    config.set_key(key, value);
  }
  return config;
}

ExperimentConfig ExperimentConfig::parse_string(const std::string& text) {
  std::istringstream stream(text);
  return parse(stream);
}

std::string ExperimentConfig::serialize() const {
  std::string out;
  for (const auto& [key, binding] : key_table()) {  // std::map iterates sorted
    out += key;
    out += " = ";
    out += binding.get(*this);
    out += '\n';
  }
  return out;
}

void ExperimentConfig::apply_quick() {
  forrester.seeds = 10;
  pendulum.reps = 5;
  pendulum.trials = 30;
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return a.serialize() == b.serialize();
}

}  // namespace phykrig
