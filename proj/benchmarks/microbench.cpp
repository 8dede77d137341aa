#include <benchmark/benchmark.h>

#include "phykrig/cholesky.hpp"
#include "phykrig/gp_surrogate.hpp"
#include "phykrig/kernels.hpp"
#include "phykrig/likelihood.hpp"
#include "phykrig/physics.hpp"
#include "phykrig/rff.hpp"
#include "phykrig/rng.hpp"
#include "phykrig/sac.hpp"

namespace {

using namespace phykrig;

Eigen::MatrixXd random_inputs(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd X(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) X(i, j) = rng.normal();
  }
  return X;
}

void bm_rbf_kernel(benchmark::State& state) {
  const auto n = state.range(0);
  const Eigen::MatrixXd X = random_inputs(n, 5, 11);
  KernelParams params = KernelParams::defaults(5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rbf_kernel(X, X, params));
  }
}
BENCHMARK(bm_rbf_kernel)->Arg(128)->Arg(512);

void bm_cholesky(benchmark::State& state) {
  const auto n = state.range(0);
  const Eigen::MatrixXd X = random_inputs(n, 5, 12);
  KernelParams params = KernelParams::defaults(5);
  Eigen::MatrixXd K = rbf_kernel(X, X, params);
  K.diagonal().array() += 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cholesky_factor(K));
  }
}
BENCHMARK(bm_cholesky)->Arg(128)->Arg(512);

void bm_nlml_gradient(benchmark::State& state) {
  const auto n = state.range(0);
  const Eigen::MatrixXd X = random_inputs(n, 5, 13);
  Rng rng(14);
  Eigen::VectorXd r(n);
  for (Eigen::Index i = 0; i < n; ++i) r(i) = rng.normal();
  AdjustmentCovariance cov;
  cov.input_dim = 5;
  cov.use_rho = true;
  cov.use_delta = true;
  cov.fp = Eigen::VectorXd::Ones(n);
  const Eigen::VectorXd theta = cov.default_params();
  for (auto _ : state) {
    benchmark::DoNotOptimize(nlml_with_gradient(cov, X, r, theta));
  }
}
BENCHMARK(bm_nlml_gradient)->Arg(64)->Arg(256);

void bm_rff_features(benchmark::State& state) {
  const RFFMap map = make_rff_map(5, 100, 1.0, 15);
  const Eigen::MatrixXd X = random_inputs(512, 5, 16);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rff_features(map, X));
  }
}
BENCHMARK(bm_rff_features);

void bm_cka_predict(benchmark::State& state) {
  const auto n = state.range(0);
  Rng rng(17);
  Dataset data;
  data.X = random_inputs(n, 1, 18);
  data.y.resize(n, 1);
  for (Eigen::Index i = 0; i < n; ++i) data.y(i, 0) = forrester_true(data.X(i, 0));
  FitConfig config;
  config.optimize = false;  // isolate prediction cost
  auto model = fit_surrogate(ModelKind::Cka, data, std::make_shared<ForresterCrudeModel>(),
                             config);
  const Eigen::MatrixXd grid = random_inputs(40, 1, 19);
  for (auto _ : state) {
    benchmark::DoNotOptimize(model->predict(grid));
  }
}
BENCHMARK(bm_cka_predict)->Arg(64)->Arg(256);

void bm_sac_step(benchmark::State& state) {
  SacConfig config;
  config.seed = 20;
  SacAgent agent(config);
  Rng rng(21);
  std::vector<Transition> batch;
  for (int i = 0; i < config.batch_size; ++i) {
    Transition t;
    t.state = Eigen::VectorXd::NullaryExpr(4, [&](Eigen::Index) { return rng.normal(); });
    t.action = Eigen::VectorXd::Constant(1, rng.uniform(-10.0, 10.0));
    t.next_state = Eigen::VectorXd::NullaryExpr(4, [&](Eigen::Index) { return rng.normal(); });
    t.cost = rng.uniform();
    batch.push_back(t);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(agent.update_on_batch(batch));
  }
}
BENCHMARK(bm_sac_step);

}  // namespace

BENCHMARK_MAIN();
