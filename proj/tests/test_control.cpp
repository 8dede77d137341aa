#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "phykrig/dyna.hpp"
#include "phykrig/dynamics.hpp"
#include "phykrig/errors.hpp"
#include "phykrig/mlp.hpp"
#include "phykrig/pendulum_env.hpp"
#include "phykrig/replay.hpp"
#include "phykrig/rollout.hpp"
#include "phykrig/sac.hpp"

#include "test_util.hpp"

using namespace phykrig;

namespace {

Transition make_transition(Rng& rng, bool model_generated) {
  Transition t;
  t.state = Eigen::VectorXd::NullaryExpr(4, [&](Eigen::Index) { return rng.uniform(-1.0, 4.0); });
  t.action = (Eigen::VectorXd(1) << rng.uniform(-10.0, 10.0)).finished();
  t.cost = rng.uniform(0.0, 1.0);
  t.next_state =
      Eigen::VectorXd::NullaryExpr(4, [&](Eigen::Index) { return rng.uniform(-1.0, 4.0); });
  t.model_generated = model_generated;
  return t;
}

std::vector<Transition> random_pendulum_transitions(int episodes, std::uint64_t seed) {
  PendulumParams params;
  OdeStepConfig step;
  EpisodeSpec spec;
  PendulumEnv env(params, step, spec);
  Rng rng(seed);
  const Policy random_policy = [&rng](const Eigen::VectorXd&) {
    return (Eigen::VectorXd(1) << rng.uniform(-10.0, 10.0)).finished();
  };
  std::vector<Transition> all;
  for (int e = 0; e < episodes; ++e) {
    const EpisodeResult res = run_real_episode(env, random_policy, rng);
    all.insert(all.end(), res.transitions.begin(), res.transitions.end());
  }
  return all;
}

}  // namespace

// ---------------------------------------------------------------- replay --

TEST_CASE("batch split is all-real until the model buffer fills") {
  CHECK(batch_split(128, true) == std::make_pair<std::size_t, std::size_t>(128, 0));
  CHECK(batch_split(128, false) == std::make_pair<std::size_t, std::size_t>(11, 117));
  CHECK(batch_split(1, false) == std::make_pair<std::size_t, std::size_t>(1, 0));
  CHECK(batch_split(11, false) == std::make_pair<std::size_t, std::size_t>(1, 10));
  CHECK(batch_split(22, false) == std::make_pair<std::size_t, std::size_t>(2, 20));
}

TEST_CASE("replay buffers reject wrongly-flagged and non-finite transitions") {
  ReplayBuffers buf;
  Rng rng(1);
  Transition real_t = make_transition(rng, false);
  Transition model_t = make_transition(rng, true);
  CHECK_NOTHROW(buf.push_real(real_t));
  CHECK_NOTHROW(buf.push_model(model_t));
  CHECK_THROWS_AS(buf.push_real(model_t), ConfigError);
  CHECK_THROWS_AS(buf.push_model(real_t), ConfigError);
  Transition bad = make_transition(rng, false);
  bad.next_state(2) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(buf.push_real(bad), ConfigError);
}

TEST_CASE("replay buffers evict oldest entries at capacity") {
  ReplayBuffers buf(3, 2);
  Rng rng(2);
  for (int i = 0; i < 5; ++i) {
    Transition t = make_transition(rng, false);
    t.cost = static_cast<double>(i);
    buf.push_real(t);
  }
  CHECK(buf.real_size() == 3);
  CHECK(buf.real_data().front().cost == 2.0);
  CHECK(buf.real_data().back().cost == 4.0);
  for (int i = 0; i < 4; ++i) buf.push_model(make_transition(rng, true));
  CHECK(buf.model_size() == 2);
  buf.clear_model();
  CHECK(buf.model_size() == 0);
  CHECK(buf.real_size() == 3);
}

TEST_CASE("sampled batches honor the real-to-model mixing ratio") {
  ReplayBuffers buf;
  Rng rng(3);
  for (int i = 0; i < 30; ++i) buf.push_real(make_transition(rng, false));
  Rng sample_rng(4);
  // Model side empty: batch is all real.
  std::vector<Transition> batch = buf.sample_batch(128, sample_rng);
  CHECK(batch.size() == 128);
  for (const Transition& t : batch) CHECK(!t.model_generated);
  // Model side populated: 11 real + 117 model.
  for (int i = 0; i < 40; ++i) buf.push_model(make_transition(rng, true));
  batch = buf.sample_batch(128, sample_rng);
  std::size_t reals = 0;
  for (const Transition& t : batch) reals += t.model_generated ? 0 : 1;
  CHECK(reals == 11);
  CHECK(batch.size() == 128);
}

TEST_CASE("sampling from an empty real buffer is an error") {
  ReplayBuffers buf;
  Rng rng(5);
  CHECK_THROWS_AS(buf.sample_batch(8, rng), FitError);
  buf.push_model(make_transition(rng, true));
  CHECK_THROWS_AS(buf.sample_batch(8, rng), FitError);
}

// ------------------------------------------------------------- env / cost --

TEST_CASE("pendulum cost is zero at the goal and saturates away from it") {
  const double l = 0.6;
  const Eigen::VectorXd goal = (Eigen::VectorXd(4) << 0.0, 0.0, 0.0, 0.0).finished();
  CHECK(pendulum_cost(goal, l) == doctest::Approx(0.0).epsilon(1e-15));
  const Eigen::VectorXd hanging = (Eigen::VectorXd(4) << 0.0, kPi, 0.0, 0.0).finished();
  const double want = 1.0 - std::exp(-2.0 * (2.0 * l) * (2.0 * l));
  CHECK(pendulum_cost(hanging, l) == doctest::Approx(want).epsilon(1e-12));
  CHECK(pendulum_cost(hanging, l) == doctest::Approx(0.94387).epsilon(1e-4));
  const Eigen::VectorXd far = (Eigen::VectorXd(4) << 50.0, 0.0, 0.0, 0.0).finished();
  CHECK(pendulum_cost(far, l) > 0.999999);
  CHECK(pendulum_cost(far, l) < 1.0 + 1e-12);
  // Velocities do not enter the cost.
  const Eigen::VectorXd moving = (Eigen::VectorXd(4) << 0.0, 0.0, 3.0, -7.0).finished();
  CHECK(pendulum_cost(moving, l) == pendulum_cost(goal, l));
}

TEST_CASE("environment steps integrate the true dynamics and clip actions") {
  PendulumParams params;
  OdeStepConfig step;
  EpisodeSpec spec;
  PendulumEnv env(params, step, spec);
  const Eigen::VectorXd s = (Eigen::VectorXd(4) << 0.1, 3.0, -0.2, 0.5).finished();
  const Eigen::VectorXd a10 = (Eigen::VectorXd(1) << 10.0).finished();
  const Eigen::VectorXd a100 = (Eigen::VectorXd(1) << 100.0).finished();
  const Eigen::VectorXd next = env.step(s, a10);
  CHECK((env.step(s, a100) - next).cwiseAbs().maxCoeff() == 0.0);  // clipped to the limit
  OdeRhs rhs = [&params](const Eigen::VectorXd& st, double a) -> Eigen::VectorXd {
    return pendulum_ode(Eigen::Vector4d(st), a, params);
  };
  CHECK((next - integrate_step(rhs, s, 10.0, step)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("initial states follow the declared distribution") {
  PendulumParams params;
  OdeStepConfig step;
  EpisodeSpec spec;
  PendulumEnv env(params, step, spec);
  Rng rng(6);
  const int n = 4000;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(4);
  Eigen::VectorXd sq = Eigen::VectorXd::Zero(4);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd s = env.sample_initial_state(rng);
    mean += s;
    sq += s.cwiseProduct(s);
  }
  mean /= n;
  const Eigen::VectorXd var = sq / n - mean.cwiseProduct(mean);
  CHECK(std::abs(mean(0)) < 0.02);
  CHECK(std::abs(mean(1) - kPi) < 0.02);
  CHECK(std::abs(mean(2)) < 0.02);
  CHECK(std::abs(mean(3)) < 0.02);
  for (int j = 0; j < 4; ++j) {
    CHECK(std::sqrt(var(j)) == doctest::Approx(0.2).epsilon(0.1));
  }
}

TEST_CASE("a zero-force agent started exactly hanging stays at the hanging cost") {
  PendulumParams params;
  OdeStepConfig step;
  EpisodeSpec spec;
  spec.initial_stddev = 0.0;  // start exactly at [0, pi, 0, 0]
  PendulumEnv env(params, step, spec);
  Rng rng(7);
  const Policy zero = [](const Eigen::VectorXd&) {
    return (Eigen::VectorXd(1) << 0.0).finished();
  };
  const EpisodeResult res = run_real_episode(env, zero, rng);
  CHECK(res.transitions.size() == 25);
  const double hang_cost = pendulum_cost(spec.initial_mean, params.length);
  CHECK(res.normalized_cost == doctest::Approx(hang_cost).epsilon(1e-9));
  for (const Transition& t : res.transitions) {
    CHECK(!t.model_generated);
    CHECK(t.cost == doctest::Approx(hang_cost).epsilon(1e-9));
    CHECK(t.action.size() == 1);
  }
}

TEST_CASE("real episodes are recorded step by step with costs at reached states") {
  PendulumParams params;
  OdeStepConfig step;
  EpisodeSpec spec;
  spec.horizon = 6;
  PendulumEnv env(params, step, spec);
  Rng rng(8);
  const Policy push = [](const Eigen::VectorXd&) {
    return (Eigen::VectorXd(1) << 5.0).finished();
  };
  const EpisodeResult res = run_real_episode(env, push, rng);
  REQUIRE(res.transitions.size() == 6);
  double total = 0.0;
  for (std::size_t i = 0; i < res.transitions.size(); ++i) {
    const Transition& t = res.transitions[i];
    CHECK(t.cost == doctest::Approx(env.cost(t.next_state)).epsilon(1e-12));
    total += t.cost;
    if (i > 0) {
      CHECK((t.state - res.transitions[i - 1].next_state).cwiseAbs().maxCoeff() == 0.0);
    }
  }
  CHECK(res.normalized_cost == doctest::Approx(total / 6.0).epsilon(1e-12));
}

// ----------------------------------------------------------- model rollout --

TEST_CASE("physics dynamics are a zero-variance transition model") {
  auto physics = std::make_shared<PendulumModel>(PendulumParams{}, OdeStepConfig{});
  PhysicsDynamics dyn(physics, pendulum_state_box());
  CHECK(dyn.state_dim() == 4);
  CHECK(dyn.action_dim() == 1);
  const Eigen::VectorXd s = (Eigen::VectorXd(4) << 0.0, 3.0, 0.5, -1.0).finished();
  const Eigen::VectorXd a = (Eigen::VectorXd(1) << 2.0).finished();
  const PredictiveDistribution p = dyn.predict_next(s, a);
  CHECK(p.variance.cwiseAbs().maxCoeff() == 0.0);
  Eigen::VectorXd in(5);
  in << s, a;
  const Eigen::VectorXd want = pendulum_state_box().clip(physics->evaluate(in));
  REQUIRE(p.mean.rows() == 1);
  REQUIRE(p.mean.cols() == 4);
  CHECK((p.mean.row(0).transpose() - want).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("zero-variance model episodes equal the deterministic mean rollout") {
  auto physics = std::make_shared<PendulumModel>(PendulumParams{}, OdeStepConfig{});
  PhysicsDynamics dyn(physics, pendulum_state_box());
  EpisodeSpec spec;
  spec.horizon = 10;
  const Policy policy = [](const Eigen::VectorXd& s) {
    return (Eigen::VectorXd(1) << 3.0 * std::tanh(s(1) - kPi)).finished();
  };
  const CostFunction cost = [](const Eigen::VectorXd& s) { return pendulum_cost(s, 0.6); };

  Rng rng_a(9);
  const std::vector<Transition> episode = run_model_episode(dyn, policy, cost, spec, rng_a);
  REQUIRE(episode.size() == 10);

  // Replay the same initial state by hand through the mean only.
  Eigen::VectorXd state = episode.front().state;
  for (const Transition& t : episode) {
    CHECK(t.model_generated);
    CHECK((t.state - state).cwiseAbs().maxCoeff() == 0.0);
    const Eigen::VectorXd a = policy(state);
    const PredictiveDistribution p = dyn.predict_next(state, a);
    CHECK((t.next_state - p.mean.row(0).transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(t.cost == doctest::Approx(cost(t.next_state)).epsilon(1e-12));
    state = t.next_state;
  }
}

namespace {
// A transition model that goes non-finite after a fixed number of calls.
class BlowUpDynamics final : public DynamicsModel {
public:
  explicit BlowUpDynamics(int finite_calls) : remaining_(finite_calls) {}
  int state_dim() const override { return 4; }
  int action_dim() const override { return 1; }
  PredictiveDistribution predict_next(const Eigen::VectorXd& state,
                                      const Eigen::VectorXd&) const override {
    PredictiveDistribution p;
    p.mean = state.transpose();
    p.variance = Eigen::MatrixXd::Zero(1, 4);
    if (remaining_-- <= 0) p.mean(0, 1) = std::numeric_limits<double>::quiet_NaN();
    return p;
  }
  const DomainBox& state_box() const override { return pendulum_state_box(); }

private:
  mutable int remaining_;
};
}  // namespace

TEST_CASE("model episodes truncate silently on non-finite predictions") {
  BlowUpDynamics dyn(4);
  EpisodeSpec spec;
  spec.horizon = 10;
  const Policy zero = [](const Eigen::VectorXd&) {
    return (Eigen::VectorXd(1) << 0.0).finished();
  };
  const CostFunction cost = [](const Eigen::VectorXd& s) { return pendulum_cost(s, 0.6); };
  Rng rng(10);
  const std::vector<Transition> episode = run_model_episode(dyn, zero, cost, spec, rng);
  CHECK(episode.size() == 4);  // shorter, no exception
  for (const Transition& t : episode) {
    CHECK(t.next_state.allFinite());
    CHECK(t.state.allFinite());
  }
}

TEST_CASE("model rollouts keep sampled states inside the trusted box") {
  auto physics = std::make_shared<PendulumModel>(PendulumParams{}, OdeStepConfig{});
  // Grossly inflated variance forces the clipping path.
  class NoisyDynamics final : public DynamicsModel {
  public:
    explicit NoisyDynamics(std::shared_ptr<const PhysicsModel> p)
        : inner_(std::move(p), pendulum_state_box()) {}
    int state_dim() const override { return 4; }
    int action_dim() const override { return 1; }
    PredictiveDistribution predict_next(const Eigen::VectorXd& s,
                                        const Eigen::VectorXd& a) const override {
      PredictiveDistribution p = inner_.predict_next(s, a);
      p.variance = Eigen::MatrixXd::Constant(1, 4, 100.0);
      return p;
    }
    const DomainBox& state_box() const override { return inner_.state_box(); }

  private:
    PhysicsDynamics inner_;
  };
  NoisyDynamics dyn(physics);
  EpisodeSpec spec;
  spec.horizon = 30;
  const Policy zero = [](const Eigen::VectorXd&) {
    return (Eigen::VectorXd(1) << 0.0).finished();
  };
  const CostFunction cost = [](const Eigen::VectorXd& s) { return pendulum_cost(s, 0.6); };
  Rng rng(11);
  const std::vector<Transition> episode = run_model_episode(dyn, zero, cost, spec, rng);
  const DomainBox& box = pendulum_state_box();
  bool saw_noise = false;
  for (const Transition& t : episode) {
    CHECK(box.contains(t.next_state));
    const PredictiveDistribution p = dyn.predict_next(t.state, t.action);
    if ((t.next_state - p.mean.row(0).transpose()).cwiseAbs().maxCoeff() > 1e-6) saw_noise = true;
  }
  CHECK(saw_noise);  // the variance actually perturbed the trajectory
}

// ------------------------------------------------------------- dynamics fit --

TEST_CASE("fitted dynamics expose per-dimension surrogates over the state box") {
  const std::vector<Transition> data = random_pendulum_transitions(2, 12);
  auto physics = std::make_shared<PendulumModel>(make_perturbed_pendulum(3));
  FitConfig cfg;
  cfg.optimizer.iterations = 25;
  cfg.optimizer.restarts = 1;
  cfg.seed = 21;
  auto dyn = fit_dynamics(data, physics, ModelKind::Cka, cfg, pendulum_state_box());
  CHECK(dyn->state_dim() == 4);
  CHECK(dyn->action_dim() == 1);
  for (int j = 0; j < 4; ++j) {
    CHECK(dyn->dimension_model(j).kind() == ModelKind::Cka);
    CHECK(dyn->dimension_model(j).training_count() == static_cast<Eigen::Index>(data.size()));
  }
  const Eigen::VectorXd s = (Eigen::VectorXd(4) << 0.2, 3.0, 0.1, -0.5).finished();
  const Eigen::VectorXd a = (Eigen::VectorXd(1) << 1.5).finished();
  const PredictiveDistribution p = dyn->predict_next(s, a);
  CHECK(p.mean.allFinite());
  CHECK(p.variance.minCoeff() >= 0.0);
  CHECK(pendulum_state_box().contains(p.mean.row(0).transpose()));
}

TEST_CASE("prior-only learned dynamics reproduce the physics model") {
  auto physics = std::make_shared<PendulumModel>(make_perturbed_pendulum(4));
  FitConfig cfg;
  cfg.optimize = false;
  cfg.seed = 22;
  auto dyn = fit_dynamics({}, physics, ModelKind::Cka, cfg, pendulum_state_box());
  PhysicsDynamics direct(physics, pendulum_state_box());
  Rng rng(13);
  for (int i = 0; i < 20; ++i) {
    const Eigen::VectorXd s = (Eigen::VectorXd(4) << rng.uniform(-1.0, 1.0),
                               rng.uniform(0.0, 2.0 * kPi), rng.uniform(-2.0, 2.0),
                               rng.uniform(-3.0, 3.0))
                                  .finished();
    const Eigen::VectorXd a = (Eigen::VectorXd(1) << rng.uniform(-10.0, 10.0)).finished();
    const PredictiveDistribution learned = dyn->predict_next(s, a);
    const PredictiveDistribution truth = direct.predict_next(s, a);
    CHECK((learned.mean - truth.mean).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("dynamics fits reject unsupported configurations") {
  const std::vector<Transition> data = random_pendulum_transitions(1, 14);
  auto physics = std::make_shared<PendulumModel>(make_perturbed_pendulum(5));
  FitConfig cfg;
  cfg.optimizer.iterations = 5;
  cfg.seed = 23;
  CHECK_THROWS_AS(fit_dynamics(data, physics, ModelKind::Ar1, cfg, pendulum_state_box()),
                  ConfigError);
  // A GP backend with no data cannot fit.
  CHECK_THROWS_AS(fit_dynamics({}, physics, ModelKind::ZeroMeanGp, cfg, pendulum_state_box()),
                  FitError);
  // The physics model is mandatory even for backends that ignore it.
  CHECK_THROWS_AS(fit_dynamics(data, nullptr, ModelKind::Cka, cfg, pendulum_state_box()),
                  ConfigError);
}

TEST_CASE("fitted dynamics round-trip through serialization") {
  const std::vector<Transition> data = random_pendulum_transitions(1, 15);
  auto physics = std::make_shared<PendulumModel>(make_perturbed_pendulum(6));
  FitConfig cfg;
  cfg.optimizer.iterations = 15;
  cfg.optimizer.restarts = 1;
  cfg.seed = 24;
  auto dyn = fit_dynamics(data, physics, ModelKind::Cka, cfg, pendulum_state_box());
  std::stringstream io;
  dyn->save(io);
  auto restored = load_dynamics(io);
  CHECK(restored->state_dim() == 4);
  Rng rng(16);
  for (int i = 0; i < 10; ++i) {
    const Eigen::VectorXd s =
        (Eigen::VectorXd(4) << rng.uniform(-1.0, 1.0), rng.uniform(0.0, 6.0),
         rng.uniform(-2.0, 2.0), rng.uniform(-3.0, 3.0))
            .finished();
    const Eigen::VectorXd a = (Eigen::VectorXd(1) << rng.uniform(-10.0, 10.0)).finished();
    const PredictiveDistribution pa = dyn->predict_next(s, a);
    const PredictiveDistribution pb = restored->predict_next(s, a);
    CHECK((pa.mean - pb.mean).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((pa.variance - pb.variance).cwiseAbs().maxCoeff() < 1e-12);
  }
}

// --------------------------------------------------------------------- mlp --

TEST_CASE("mlp parameter gradients match finite differences") {
  Mlp net({3, 8, 8, 2}, 31);
  const Eigen::MatrixXd X = testutil::random_matrix(5, 3, 17);
  const Eigen::MatrixXd T = testutil::random_matrix(5, 2, 18);
  auto loss_at = [&](const Eigen::VectorXd& flat) {
    Mlp probe({3, 8, 8, 2}, 31);
    probe.set_from_flat(flat);
    const Eigen::MatrixXd Y = probe.forward(X);
    return 0.5 * (Y - T).squaredNorm() / 5.0;
  };

  Mlp::Cache cache;
  const Eigen::MatrixXd Y = net.forward_cached(X, cache);
  MlpGradients grads = net.zero_gradients();
  net.backward(cache, (Y - T) / 5.0, grads);
  const Eigen::VectorXd analytic = net.flatten_gradients(grads);
  const Eigen::VectorXd fd = testutil::fd_gradient(loss_at, net.flatten(), 1e-5);
  REQUIRE(analytic.size() == fd.size());
  for (Eigen::Index i = 0; i < fd.size(); ++i) {
    CHECK(testutil::rel_error(analytic(i), fd(i)) < 1e-5);
  }
}

TEST_CASE("mlp input gradients match finite differences") {
  Mlp net({3, 8, 2}, 32);
  const Eigen::MatrixXd X = testutil::random_matrix(4, 3, 19);
  const Eigen::MatrixXd T = testutil::random_matrix(4, 2, 20);
  Mlp::Cache cache;
  const Eigen::MatrixXd Y = net.forward_cached(X, cache);
  const Eigen::MatrixXd dX = net.input_gradient(cache, (Y - T) / 4.0);
  const double h = 1e-6;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 3; ++j) {
      Eigen::MatrixXd Xp = X, Xm = X;
      Xp(i, j) += h;
      Xm(i, j) -= h;
      const double lp = 0.5 * (net.forward(Xp) - T).squaredNorm() / 4.0;
      const double lm = 0.5 * (net.forward(Xm) - T).squaredNorm() / 4.0;
      const double fd = (lp - lm) / (2.0 * h);
      CHECK(testutil::rel_error(dX(i, j), fd) < 1e-5);
    }
  }
}

TEST_CASE("mlp flat parameter round trip and polyak averaging") {
  Mlp a({2, 4, 1}, 33);
  Mlp b({2, 4, 1}, 34);
  const Eigen::VectorXd fa = a.flatten();
  const Eigen::VectorXd fb = b.flatten();
  CHECK(fa.size() == b.param_count());
  CHECK((fa - fb).cwiseAbs().maxCoeff() > 0.0);  // different seeds differ

  Mlp c({2, 4, 1}, 35);
  c.set_from_flat(fa);
  CHECK((c.flatten() - fa).cwiseAbs().maxCoeff() == 0.0);
  const Eigen::MatrixXd X = testutil::random_matrix(3, 2, 21);
  CHECK((c.forward(X) - a.forward(X)).cwiseAbs().maxCoeff() == 0.0);

  const double tau = 0.25;
  Mlp target({2, 4, 1}, 36);
  const Eigen::VectorXd before = target.flatten();
  target.polyak_from(a, tau);
  const Eigen::VectorXd want = tau * fa + (1.0 - tau) * before;
  CHECK((target.flatten() - want).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("adam steps move parameters against the gradient") {
  Mlp net({2, 3, 1}, 37);
  const Eigen::VectorXd before = net.flatten();
  MlpGradients grads = net.zero_gradients();
  for (auto& g : grads.dW) g.setConstant(1.0);
  for (auto& g : grads.db) g.setConstant(1.0);
  net.adam_step(grads, 0.01);
  const Eigen::VectorXd after = net.flatten();
  // First Adam step with constant positive gradient is ~ -lr in every entry.
  CHECK(((after - before).array() < 0.0).all());
  CHECK((after - before).cwiseAbs().maxCoeff() < 0.011);
}

// ------------------------------------------------------------ policy head --

TEST_CASE("squashed gaussian derivatives match finite differences") {
  Rng rng(41);
  for (int i = 0; i < 30; ++i) {
    const double mu = rng.uniform(-2.0, 2.0);
    const double ls = rng.uniform(-2.0, 0.5);
    const double z = rng.normal();
    const double limit = 10.0;
    const SquashedSample s = squashed_gaussian(mu, ls, z, limit);
    CHECK(std::abs(s.action) < limit);
    CHECK(std::isfinite(s.log_prob));

    const double h = 1e-6;
    auto lp = [&](double m, double l) { return squashed_gaussian(m, l, z, limit).log_prob; };
    auto act = [&](double m, double l) { return squashed_gaussian(m, l, z, limit).action; };
    CHECK(testutil::rel_error(s.dlogp_dmu, (lp(mu + h, ls) - lp(mu - h, ls)) / (2 * h)) < 1e-4);
    CHECK(testutil::rel_error(s.dlogp_dlog_sigma, (lp(mu, ls + h) - lp(mu, ls - h)) / (2 * h)) <
          1e-4);
    CHECK(testutil::rel_error(s.da_dmu, (act(mu + h, ls) - act(mu - h, ls)) / (2 * h)) < 1e-4);
    CHECK(testutil::rel_error(s.da_dlog_sigma, (act(mu, ls + h) - act(mu, ls - h)) / (2 * h)) <
          1e-4);
  }
}

TEST_CASE("squashed gaussian log density matches the change-of-variables formula") {
  const double mu = 0.3, ls = -0.5, z = 0.8, limit = 10.0;
  const SquashedSample s = squashed_gaussian(mu, ls, z, limit);
  const double sigma = std::exp(ls);
  const double u = mu + sigma * z;
  const double log_normal = -0.5 * z * z - ls - 0.5 * std::log(2.0 * kPi);
  const double tanh_u = std::tanh(u);
  const double log_jacobian = std::log(limit * (1.0 - tanh_u * tanh_u));
  CHECK(s.log_prob == doctest::Approx(log_normal - log_jacobian).epsilon(1e-10));
  CHECK(s.action == doctest::Approx(limit * tanh_u).epsilon(1e-12));
}

TEST_CASE("squashed gaussian stays finite at extreme pre-activations") {
  for (double mu : {-50.0, 50.0}) {
    const SquashedSample s = squashed_gaussian(mu, 0.0, 0.0, 10.0);
    CHECK(std::isfinite(s.log_prob));
    CHECK(std::abs(s.action) <= 10.0);
    CHECK(std::isfinite(s.dlogp_dmu));
  }
}

TEST_CASE("soft clamp maps into its interval with a matching derivative") {
  const double lo = -5.0, hi = 2.0;
  Rng rng(42);
  for (int i = 0; i < 20; ++i) {
    // Extreme inputs saturate to the exact bounds in double precision, so the
    // interval is closed; moderate inputs stay strictly inside.
    const double raw = rng.uniform(-30.0, 30.0);
    const double v = soft_clamp(raw, lo, hi);
    CHECK(v >= lo);
    CHECK(v <= hi);
    if (std::abs(raw) < 4.0) {
      CHECK(v > lo);
      CHECK(v < hi);
    }
    const double h = 1e-6;
    const double fd = (soft_clamp(raw + h, lo, hi) - soft_clamp(raw - h, lo, hi)) / (2 * h);
    CHECK(soft_clamp_derivative(raw, lo, hi) == doctest::Approx(fd).epsilon(1e-5));
  }
  CHECK(soft_clamp(0.0, lo, hi) == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-12));
}

// --------------------------------------------------------------------- sac --

namespace {
SacConfig tiny_sac(std::uint64_t seed) {
  SacConfig cfg;
  cfg.hidden = 16;
  cfg.batch_size = 32;
  cfg.seed = seed;
  return cfg;
}
}  // namespace

TEST_CASE("sampled actions always respect the bound") {
  SacAgent agent(tiny_sac(50));
  Rng rng(51);
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const Eigen::VectorXd s = Eigen::VectorXd::NullaryExpr(
        4, [&](Eigen::Index) { return rng.uniform(-5.0, 8.0); });
    const Eigen::VectorXd a = agent.act(s);
    worst = std::max(worst, std::abs(a(0)));
  }
  CHECK(worst <= 10.0);
  // Mean actions are bounded and deterministic.
  const Eigen::VectorXd s = Eigen::VectorXd::Ones(4);
  const Eigen::VectorXd m1 = agent.act_mean(s);
  const Eigen::VectorXd m2 = agent.act_mean(s);
  CHECK(m1(0) == m2(0));
  CHECK(std::abs(m1(0)) <= 10.0);
}

TEST_CASE("critic training reduces the Bellman error on a fixed batch") {
  SacAgent agent(tiny_sac(52));
  Rng rng(53);
  std::vector<Transition> batch;
  for (int i = 0; i < 32; ++i) batch.push_back(make_transition(rng, false));
  const double before = agent.critic_loss_on(batch);
  SacStepStats stats{};
  for (int i = 0; i < 25; ++i) stats = agent.update_on_batch(batch);
  const double after = agent.critic_loss_on(batch);
  CHECK(after < before);
  CHECK(std::isfinite(stats.actor_loss));
  CHECK(stats.alpha > 0.0);
  CHECK(std::isfinite(stats.mean_log_prob));
}

TEST_CASE("agent updates draw mixed batches from the replay buffers") {
  SacAgent agent(tiny_sac(54));
  ReplayBuffers buffers;
  Rng rng(55);
  CHECK_THROWS_AS(agent.update(buffers, 1), FitError);  // no real data yet
  for (int i = 0; i < 40; ++i) buffers.push_real(make_transition(rng, false));
  const SacStepStats s1 = agent.update(buffers, 3);
  CHECK(std::isfinite(s1.critic1_loss));
  for (int i = 0; i < 200; ++i) buffers.push_model(make_transition(rng, true));
  const SacStepStats s2 = agent.update(buffers, 3);
  CHECK(std::isfinite(s2.critic2_loss));
  CHECK(s2.alpha > 0.0);
}

TEST_CASE("identically-seeded agents act identically") {
  SacAgent a(tiny_sac(56));
  SacAgent b(tiny_sac(56));
  const Eigen::VectorXd s = (Eigen::VectorXd(4) << 0.1, 3.0, -0.2, 0.4).finished();
  for (int i = 0; i < 10; ++i) {
    CHECK(a.act(s)(0) == b.act(s)(0));
  }
  SacAgent c(tiny_sac(57));
  CHECK(a.act(s)(0) != c.act(s)(0));
}

// -------------------------------------------------------------------- dyna --

TEST_CASE("model-free training runs produce one cost per trial") {
  DynaConfig cfg;
  cfg.trials = 3;
  cfg.model_based_cutoff = 0;
  cfg.model_episodes_per_trial = 0;
  cfg.sac_steps_per_real_trial = 5;
  cfg.sac_steps_per_model_episode = 0;
  cfg.episode.horizon = 5;
  cfg.sac = tiny_sac(0);
  cfg.seed = 60;
  const DynaResult res = run_dyna_scenario(Scenario::MF, cfg);
  REQUIRE(res.curve.size() == 3);
  REQUIRE(res.records.size() == 3);
  CHECK(res.dynamics_refit_count == 0);
  for (int t = 0; t < 3; ++t) {
    const TrialRecord& rec = res.records[static_cast<std::size_t>(t)];
    CHECK(rec.trial == t + 1);
    CHECK(rec.normalized_cost >= 0.0);
    CHECK(rec.normalized_cost < 1.0);
    CHECK(rec.real_buffer == static_cast<std::size_t>(5 * (t + 1)));
    CHECK(rec.model_buffer == 0);
    CHECK(!rec.dynamics_fitted);
  }
  CHECK(res.trials_to_threshold >= 1);
  CHECK(res.trials_to_threshold <= 4);
}

TEST_CASE("physics-backed training generates model experience then drops it") {
  DynaConfig cfg;
  cfg.trials = 3;
  cfg.model_based_cutoff = 2;
  cfg.model_episodes_per_trial = 2;
  cfg.sac_steps_per_real_trial = 4;
  cfg.sac_steps_per_model_episode = 2;
  cfg.episode.horizon = 5;
  cfg.sac = tiny_sac(0);
  cfg.physics = std::make_shared<PendulumModel>(make_perturbed_pendulum(7));
  cfg.seed = 61;
  std::vector<TrialRecord> streamed;
  const DynaResult res =
      run_dyna_scenario(Scenario::DynaPhy, cfg, [&](const TrialRecord& r) {
        streamed.push_back(r);
      });
  REQUIRE(res.records.size() == 3);
  CHECK(streamed.size() == 3);
  CHECK(res.dynamics_refit_count == 0);  // pure physics needs no fitting
  CHECK(res.records[0].model_buffer == 2 * 5);
  CHECK(res.records[1].model_buffer == 0);  // dropped at the cutoff trial
  CHECK(res.records[2].model_buffer == 0);
  CHECK(!res.records[0].dynamics_fitted);
}

TEST_CASE("learned-dynamics training refits every model-phase trial") {
  DynaConfig cfg;
  cfg.trials = 2;
  cfg.model_based_cutoff = 1;
  cfg.model_episodes_per_trial = 1;
  cfg.sac_steps_per_real_trial = 3;
  cfg.sac_steps_per_model_episode = 1;
  cfg.episode.horizon = 5;
  cfg.sac = tiny_sac(0);
  cfg.physics = std::make_shared<PendulumModel>(make_perturbed_pendulum(8));
  cfg.dynamics_fit.optimizer.iterations = 10;
  cfg.dynamics_fit.optimizer.restarts = 1;
  cfg.seed = 62;
  const DynaResult res = run_dyna_scenario(Scenario::DynaCka, cfg);
  CHECK(res.dynamics_refit_count == 1);
  CHECK(res.records[0].dynamics_fitted);
  CHECK(res.records[0].fit_nlml.size() == 4);
  CHECK(!res.records[1].dynamics_fitted);
  CHECK(res.records[0].model_buffer == 0);  // cutoff == 1: cleared immediately
}

TEST_CASE("scenario names round-trip and physics-needing scenarios validate") {
  for (Scenario s : {Scenario::MF, Scenario::DynaPhy, Scenario::DynaGp, Scenario::DynaCka,
                     Scenario::DynaRra}) {
    CHECK(scenario_from_string(to_string(s)) == s);
  }
  CHECK_THROWS_AS(scenario_from_string("bogus"), std::invalid_argument);
  DynaConfig cfg;
  cfg.trials = 1;
  cfg.sac = tiny_sac(0);
  cfg.seed = 63;
  cfg.physics = nullptr;
  CHECK_THROWS_AS(run_dyna_scenario(Scenario::DynaPhy, cfg), ConfigError);
}

TEST_CASE("identically-seeded training runs reproduce their curves exactly") {
  DynaConfig cfg;
  cfg.trials = 2;
  cfg.model_based_cutoff = 1;
  cfg.model_episodes_per_trial = 1;
  cfg.sac_steps_per_real_trial = 3;
  cfg.sac_steps_per_model_episode = 1;
  cfg.episode.horizon = 4;
  cfg.sac = tiny_sac(0);
  cfg.physics = std::make_shared<PendulumModel>(make_perturbed_pendulum(9));
  cfg.seed = 64;
  const DynaResult a = run_dyna_scenario(Scenario::DynaPhy, cfg);
  const DynaResult b = run_dyna_scenario(Scenario::DynaPhy, cfg);
  REQUIRE(a.curve.size() == b.curve.size());
  for (std::size_t i = 0; i < a.curve.size(); ++i) CHECK(a.curve[i] == b.curve[i]);
}
