#include "phykrig/dyna.hpp"

#include <chrono>
#include <limits>

#include "phykrig/errors.hpp"
#include "phykrig/gp_surrogate.hpp"
#include "phykrig/rollout.hpp"

namespace phykrig {

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::MF: return "mf";
    case Scenario::DynaPhy: return "dyna-phy";
    case Scenario::DynaGp: return "dyna-gp";
    case Scenario::DynaCka: return "dyna-cka";
    case Scenario::DynaRra: return "dyna-rra";
  }
  throw std::invalid_argument("to_string: unknown Scenario");
}

Scenario scenario_from_string(const std::string& name) {
  if (name == "mf") return Scenario::MF;
  if (name == "dyna-phy") return Scenario::DynaPhy;
  if (name == "dyna-gp") return Scenario::DynaGp;
  if (name == "dyna-cka") return Scenario::DynaCka;
  if (name == "dyna-rra") return Scenario::DynaRra;
  throw std::invalid_argument("scenario_from_string: unknown scenario '" + name + "'");
}

int scenario_index(Scenario s) { return static_cast<int>(s); }

namespace {

ModelKind dynamics_kind_for(Scenario s) {
  switch (s) {
    case Scenario::DynaGp: return ModelKind::ZeroMeanGp;
    case Scenario::DynaCka: return ModelKind::Cka;
    case Scenario::DynaRra: return ModelKind::Rra;
    default: throw std::invalid_argument("scenario has no learned dynamics");
  }
}

std::vector<double> fit_nlml_per_dim(const SurrogateDynamics& dyn) {
  std::vector<double> out;
  for (int j = 0; j < dyn.state_dim(); ++j) {
    const auto* gp = dynamic_cast<const AdjustmentGp*>(&dyn.dimension_model(j));
    out.push_back(gp ? gp->fit_nlml() : std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

}  // namespace

DynaResult run_dyna_scenario(Scenario scenario, const DynaConfig& config,
                             const RecordSink& sink) {
  const bool uses_model = scenario != Scenario::MF;
  const bool uses_physics = scenario == Scenario::DynaPhy || scenario == Scenario::DynaCka ||
                            scenario == Scenario::DynaRra;
  if (uses_physics && !config.physics) {
    throw ConfigError("run_dyna_scenario: scenario '" + to_string(scenario) +
                      "' needs a physics model");
  }
  if (config.trials < 1 || config.model_episodes_per_trial < 0 ||
      config.model_based_cutoff < 0) {
    throw ConfigError("run_dyna_scenario: invalid trial schedule");
  }

  PendulumEnv env(config.real_params, config.step, config.episode);
  SacConfig sac_cfg = config.sac;
  sac_cfg.seed = mix_seed(config.seed, 0xd9a, 1);
  SacAgent agent(sac_cfg);
  ReplayBuffers buffers;
  Rng env_rng(mix_seed(config.seed, 0xd9a, 2));
  Rng model_rng(mix_seed(config.seed, 0xd9a, 3));

  const Policy policy = [&agent](const Eigen::VectorXd& s) { return agent.act(s); };
  const CostFunction cost = [&env](const Eigen::VectorXd& s) { return env.cost(s); };
  const DomainBox& state_box = pendulum_state_box();

  std::vector<Transition> real_log;  // everything seen, for dynamics refits
  std::unique_ptr<DynamicsModel> dynamics;
  std::vector<Eigen::VectorXd> warm_starts;

  DynaResult result;
  result.curve.reserve(static_cast<std::size_t>(config.trials));

  for (int trial = 1; trial <= config.trials; ++trial) {
    const auto t0 = std::chrono::steady_clock::now();
    TrialRecord rec;
    rec.trial = trial;

    EpisodeResult episode = run_real_episode(env, policy, env_rng);
    for (const Transition& t : episode.transitions) {
      buffers.push_real(t);
      real_log.push_back(t);
    }
    result.curve.push_back(episode.normalized_cost);
    rec.normalized_cost = episode.normalized_cost;

    const bool model_phase = uses_model && trial <= config.model_based_cutoff;
    if (model_phase) {
      if (scenario == Scenario::DynaPhy) {
        if (!dynamics) {
          dynamics = std::make_unique<PhysicsDynamics>(config.physics, state_box);
        }
      } else {
        FitConfig fit_cfg = config.dynamics_fit;
        fit_cfg.seed = mix_seed(config.seed, 0xd9a, 4 + static_cast<std::uint64_t>(trial));
        auto fitted = fit_dynamics(real_log, uses_physics ? config.physics : nullptr,
                                   dynamics_kind_for(scenario), fit_cfg, state_box, warm_starts);
        warm_starts.clear();
        for (int j = 0; j < fitted->state_dim(); ++j) {
          const auto* gp = dynamic_cast<const AdjustmentGp*>(&fitted->dimension_model(j));
          warm_starts.push_back(gp ? gp->hyperparams() : Eigen::VectorXd());
        }
        rec.fit_nlml = fit_nlml_per_dim(*fitted);
        dynamics = std::move(fitted);
        ++result.dynamics_refit_count;
        rec.dynamics_fitted = true;
      }

      for (int e = 0; e < config.model_episodes_per_trial; ++e) {
        const std::vector<Transition> synth =
            run_model_episode(*dynamics, policy, cost, config.episode, model_rng);
        for (const Transition& t : synth) buffers.push_model(t);
        if (buffers.real_size() > 0) {
          agent.update(buffers, config.sac_steps_per_model_episode);
        }
      }
    }

    agent.update(buffers, config.sac_steps_per_real_trial);

    if (uses_model && trial == config.model_based_cutoff) buffers.clear_model();

    rec.real_buffer = buffers.real_size();
    rec.model_buffer = buffers.model_size();
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.records.push_back(rec);
    if (sink) sink(rec);
  }

  result.trials_to_threshold = config.trials + 1;  // censored when never under 0.5
  for (int t = 0; t < config.trials; ++t) {
    if (result.curve[static_cast<std::size_t>(t)] < 0.5) {
      result.trials_to_threshold = t + 1;
      break;
    }
  }
  return result;
}

}  // namespace phykrig
