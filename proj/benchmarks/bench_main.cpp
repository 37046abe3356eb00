#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "mpg/nn.hpp"
#include "mpg/tasks.hpp"
#include "mpg/trainer.hpp"

using namespace mpg;

namespace {

nn::MlpParams make_net(int width, int in, int out) {
  const std::vector<int> sizes{in, width, width, out};
  return nn::init_params(sizes, 1);
}

void BM_ForwardBatch(benchmark::State& state) {
  const int width = static_cast<int>(state.range(0));
  const auto p = make_net(width, 6, 1);
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(6, 16);
  for (auto _ : state) benchmark::DoNotOptimize(nn::forward_batch(p, nn::ActivationSpec::critic(), x));
}
BENCHMARK(BM_ForwardBatch)->Arg(64)->Arg(400);

void BM_Backward(benchmark::State& state) {
  const int width = static_cast<int>(state.range(0));
  const auto p = make_net(width, 6, 1);
  const Eigen::VectorXd x = Eigen::VectorXd::Random(6);
  const Eigen::VectorXd g = Eigen::VectorXd::Ones(1);
  for (auto _ : state) benchmark::DoNotOptimize(nn::backward(p, nn::ActivationSpec::critic(), x, g));
}
BENCHMARK(BM_Backward)->Arg(64)->Arg(400);

void BM_TrainerUpdate(benchmark::State& state) {
  rl::TrainerConfig cfg;
  cfg.hidden = {static_cast<int>(state.range(0)), static_cast<int>(state.range(0))};
  rl::Trainer trainer(4, 2, 0.7, cfg, 3);
  rl::Batch b;
  b.states = Eigen::MatrixXd::Random(4, 16);
  b.actions = Eigen::MatrixXd::Random(2, 16) * 0.7;
  b.next_states = Eigen::MatrixXd::Random(4, 16);
  b.rewards = Eigen::VectorXd::Random(16);
  b.dones = Eigen::VectorXd::Zero(16);
  for (auto _ : state) benchmark::DoNotOptimize(trainer.update(b));
}
BENCHMARK(BM_TrainerUpdate)->Arg(64)->Arg(400);

void BM_EnvStep(benchmark::State& state) {
  const auto task = static_cast<env::Task>(state.range(0));
  env::LeaderFollowerEnv e(task, env::EnvConfig{}, 5);
  const Eigen::VectorXd a = Eigen::VectorXd::Constant(e.action_dim(), 0.01);
  for (auto _ : state) {
    auto r = e.step(a);
    if (r.terminal || r.truncated) e.reset();
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_EnvStep)
    ->Arg(static_cast<int>(env::Task::Tracking))
    ->Arg(static_cast<int>(env::Task::Unison))
    ->Arg(static_cast<int>(env::Task::Obstacle));

}  // namespace
BENCHMARK_MAIN();
