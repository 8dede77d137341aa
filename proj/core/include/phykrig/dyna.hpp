#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "phykrig/dynamics.hpp"
#include "phykrig/pendulum_env.hpp"
#include "phykrig/sac.hpp"

namespace phykrig {

enum class Scenario { MF = 0, DynaPhy = 1, DynaGp = 2, DynaCka = 3, DynaRra = 4 };

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& name);
// Stable index used for seed derivation; equals the enum value.
int scenario_index(Scenario s);

struct DynaConfig {
  int trials = 50;
  int model_based_cutoff = 25;        // model rollouts during trials 1..cutoff
  int model_episodes_per_trial = 20;
  int sac_steps_per_real_trial = 200;
  int sac_steps_per_model_episode = 20;

  PendulumParams real_params;         // the true system
  OdeStepConfig step;
  EpisodeSpec episode;
  SacConfig sac;

  // Crude physics used by Dyna-Phy/CKA/RRA dynamics; ignored by MF/Dyna-GP.
  std::shared_ptr<const PhysicsModel> physics;
  FitConfig dynamics_fit;             // optimizer settings for refits
  std::uint64_t seed = 0;             // run seed (already scenario/rep derived)
};

// One line of the per-trial log stream.
struct TrialRecord {
  int trial = 0;                      // 1-based
  double normalized_cost = 0.0;
  std::size_t real_buffer = 0;
  std::size_t model_buffer = 0;
  bool dynamics_fitted = false;
  std::vector<double> fit_nlml;       // per state dimension; NaN when undefined
  double wall_seconds = 0.0;
};

using RecordSink = std::function<void(const TrialRecord&)>;

struct DynaResult {
  std::vector<double> curve;          // normalized cost per trial
  std::vector<TrialRecord> records;
  int trials_to_threshold = 0;        // first trial with cost < 0.5, trials+1 if never
  int dynamics_refit_count = 0;
};

// Full training run of one scenario: per real trial, roll the true system,
// optionally refit the dynamics model on all real data and generate model
// episodes (trials 1..cutoff), and take SAC gradient steps on 1:10 mixed
// batches. The model buffer is dropped at the cutoff so later training is
// purely real.
DynaResult run_dyna_scenario(Scenario scenario, const DynaConfig& config,
                             const RecordSink& sink = nullptr);

}  // namespace phykrig
