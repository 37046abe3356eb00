#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "mpg/replay_buffer.hpp"
#include "mpg/target_rule.hpp"
#include "mpg/tasks.hpp"
#include "mpg/trainer.hpp"

using namespace mpg;
using namespace mpg::rl;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Transition make_transition(double tag) {
  return {vec({tag, tag}), vec({tag}), vec({tag + 1, tag + 1}), tag, false};
}

}  // namespace

TEST(TargetRule, MomentumExampleFirstIteration) {
  TargetRule rule{TargetKind::Mpg};
  rule.reset(1);
  const auto y = compute_target(rule, vec({1.0}), vec({0.0}), vec({2.0}), vec({4.0}), 0.9);
  // max 4, gap 2, adj (0 + 2) / 2 = 1 -> 1 + 0.9 * 3
  EXPECT_DOUBLE_EQ(y(0), 1.0 + 0.9 * 3.0);
  EXPECT_DOUBLE_EQ(rule.delta_last(0), 2.0);
  EXPECT_DOUBLE_EQ(rule.delta_adj(0), 1.0);
}

TEST(TargetRule, MomentumCarriesPreviousGap) {
  TargetRule rule{TargetKind::Mpg};
  rule.reset(1);
  compute_target(rule, vec({0.0}), vec({0.0}), vec({0.0}), vec({2.0}), 1.0);
  const auto y = compute_target(rule, vec({0.0}), vec({0.0}), vec({1.0}), vec({1.0}), 1.0);
  // gap 0 now, previous 2 -> adj 1 -> 1 - 1
  EXPECT_DOUBLE_EQ(y(0), 0.0);
  EXPECT_DOUBLE_EQ(rule.delta_last(0), 0.0);
}

TEST(TargetRule, Td3AndDdpg) {
  TargetRule td3{TargetKind::Td3}, ddpg{TargetKind::Ddpg};
  td3.reset(2);
  ddpg.reset(2);
  const auto q1 = vec({3.0, -1.0}), q2 = vec({5.0, -2.0});
  const auto r = vec({0.5, 0.5}), d = vec({0.0, 0.0});
  const auto yt = compute_target(td3, r, d, q1, q2, 0.5);
  const auto yd = compute_target(ddpg, r, d, q1, q2, 0.5);
  EXPECT_DOUBLE_EQ(yt(0), 0.5 + 0.5 * 3.0);
  EXPECT_DOUBLE_EQ(yt(1), 0.5 + 0.5 * -2.0);
  EXPECT_DOUBLE_EQ(yd(0), 0.5 + 0.5 * 3.0);
  EXPECT_DOUBLE_EQ(yd(1), 0.5 + 0.5 * -1.0);
}

TEST(TargetRule, AlgebraOverRandomTuples) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> q(-100.0, 100.0), dl(0.0, 50.0), rr(-10.0, 10.0);
  const double gamma = 0.99;
  TargetRule mpg{TargetKind::Mpg}, td3{TargetKind::Td3};
  for (int i = 0; i < 100000; ++i) {
    const double a = q(rng), b = q(rng), r = rr(rng), last = dl(rng);
    mpg.reset(1);
    auto y0 = compute_target(mpg, vec({r}), vec({0.0}), vec({a}), vec({b}), gamma);
    ASSERT_NEAR(y0(0), r + gamma * 0.5 * (a + b), 1e-12);
    mpg.reset(1);
    mpg.delta_last(0) = last;
    auto y = compute_target(mpg, vec({r}), vec({0.0}), vec({a}), vec({b}), gamma);
    ASSERT_LE(y(0), r + gamma * std::max(a, b) + 1e-12);
    td3.reset(1);
    auto yt = compute_target(td3, vec({r}), vec({0.0}), vec({a}), vec({b}), gamma);
    ASSERT_EQ(yt(0), r + gamma * std::min(a, b));
    mpg.reset(1);
    mpg.delta_last(0) = last;
    auto yd = compute_target(mpg, vec({r}), vec({1.0}), vec({a}), vec({b}), gamma);
    ASSERT_EQ(yd(0), r);
  }
}

TEST(TargetRule, RejectsNonFiniteAndMismatch) {
  TargetRule rule{TargetKind::Mpg};
  rule.reset(1);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(compute_target(rule, vec({0}), vec({0}), vec({nan}), vec({1}), 0.9), std::domain_error);
  EXPECT_THROW(compute_target(rule, vec({0, 1}), vec({0}), vec({1}), vec({1}), 0.9),
               std::invalid_argument);
}

TEST(TargetRule, ParseNames) {
  EXPECT_EQ(parse_target_kind("mpg"), TargetKind::Mpg);
  EXPECT_EQ(parse_target_kind("TD3"), TargetKind::Td3);
  EXPECT_EQ(parse_target_kind("ddpg"), TargetKind::Ddpg);
  EXPECT_THROW(parse_target_kind("sac"), std::invalid_argument);
}

TEST(ReplayBuffer, RingKeepsNewestEntries) {
  ReplayBuffer buf(3);
  for (int i = 0; i < 5; ++i) buf.push(make_transition(i));
  EXPECT_EQ(buf.size(), 3u);
  std::multiset<double> tags;
  for (std::size_t i = 0; i < buf.size(); ++i) tags.insert(buf.at(i).reward);
  EXPECT_EQ(tags, (std::multiset<double>{2.0, 3.0, 4.0}));
}

TEST(ReplayBuffer, SampleShapesAndContents) {
  ReplayBuffer buf(100);
  for (int i = 0; i < 10; ++i) buf.push(make_transition(i));
  Rng rng(3);
  const Batch b = buf.sample(16, rng);
  EXPECT_EQ(b.size(), 16);
  EXPECT_EQ(b.states.rows(), 2);
  EXPECT_EQ(b.actions.rows(), 1);
  for (Eigen::Index j = 0; j < b.size(); ++j) {
    EXPECT_EQ(b.states(0, j), b.rewards(j));
    EXPECT_EQ(b.next_states(0, j), b.rewards(j) + 1);
    EXPECT_EQ(b.dones(j), 0.0);
  }
}

TEST(ReplayBuffer, UniformSampling) {
  ReplayBuffer buf(4);
  for (int i = 0; i < 4; ++i) buf.push(make_transition(i));
  Rng rng(5);
  std::vector<int> counts(4, 0);
  const int n = 40000;
  for (auto i : buf.sample_indices(n, rng)) counts[i]++;
  for (int c : counts) EXPECT_NEAR(c / static_cast<double>(n), 0.25, 0.01);
}

TEST(ReplayBuffer, Errors) {
  EXPECT_THROW(ReplayBuffer(0), std::invalid_argument);
  ReplayBuffer buf(2);
  Rng rng(1);
  EXPECT_THROW(buf.sample(1, rng), std::logic_error);
  auto t = make_transition(1);
  t.reward = std::numeric_limits<double>::infinity();
  EXPECT_THROW(buf.push(t), std::invalid_argument);
}

TEST(Noise, DecayToFloor) {
  NoiseSchedule n;
  n = decay_noise(n);
  EXPECT_DOUBLE_EQ(n.v_explore, 2.0 * 0.99);
  for (int i = 0; i < 2000; ++i) n = decay_noise(n);
  EXPECT_DOUBLE_EQ(n.v_explore, 0.01);
}

TEST(Noise, ExplorationVarianceMatchesSchedule) {
  // Zero-output actor so the action is pure (clipped) noise.
  nn::MlpParams actor = nn::init_params(std::vector<int>{2, 4, 1}, 1);
  for (auto& w : actor.weights) w.setZero();
  NoiseSchedule noise;
  noise.v_explore = 0.04;  // std 0.2, far inside the 0.7 bound
  Rng rng(9);
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double a = select_action(actor, 0.7, Eigen::VectorXd::Zero(2), noise, rng)(0);
    sum += a;
    sq += a * a;
  }
  const double mean = sum / n, var = sq / n - mean * mean;
  EXPECT_NEAR(mean, 0.0, 0.003);
  EXPECT_NEAR(var, 0.04, 0.04 * 0.02);
}

TEST(Noise, ActionsStayInBound) {
  nn::MlpParams actor = nn::init_params(std::vector<int>{2, 4, 2}, 1);
  NoiseSchedule noise;  // variance 2
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const auto a = select_action(actor, 0.7, Eigen::VectorXd::Random(2), noise, rng);
    EXPECT_LE(a.cwiseAbs().maxCoeff(), 0.7);
  }
}

TEST(TrainerConfig, DefaultsAndValidation) {
  const TrainerConfig c;
  EXPECT_EQ(c.gamma, 0.99);
  EXPECT_EQ(c.batch_size, 16);
  EXPECT_EQ(c.actor_lr, 1e-3);
  EXPECT_EQ(c.critic_lr, 1e-2);
  EXPECT_EQ(c.noise.v_train, 0.2);
  EXPECT_EQ(c.noise.v_explore, 2.0);
  EXPECT_EQ(c.noise.v_min, 0.01);
  EXPECT_EQ(c.noise.lambda, 0.99);
  EXPECT_NO_THROW(c.validate());
  TrainerConfig bad = c;
  bad.tau = 0.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = c;
  bad.inner_iters = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = c;
  bad.gamma = 1.5;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(Trainer, CriticUpdateReducesLossOnFixedTarget) {
  TrainerConfig cfg;
  cfg.hidden = {16, 16};
  Trainer tr(2, 1, 0.7, cfg, 1);
  nn::MlpParams c1 = tr.critic1(), c2 = tr.critic2();
  Batch b;
  b.states = Eigen::MatrixXd::Random(2, 16);
  b.actions = Eigen::MatrixXd::Random(1, 16);
  b.rewards = Eigen::VectorXd::Zero(16);
  b.dones = Eigen::VectorXd::Zero(16);
  const Eigen::VectorXd y = Eigen::VectorXd::Random(16);
  const double first = critic_update(c1, c2, b, y, 1e-3);
  double last = first;
  for (int i = 0; i < 200; ++i) last = critic_update(c1, c2, b, y, 1e-3);
  EXPECT_LT(last, 0.5 * first);
}

TEST(Trainer, ActorUpdateRaisesCriticValue) {
  TrainerConfig cfg;
  cfg.hidden = {16, 16};
  Trainer tr(2, 1, 0.7, cfg, 2);
  nn::MlpParams actor = tr.actor();
  Batch b;
  b.states = Eigen::MatrixXd::Random(2, 16);
  b.rewards = Eigen::VectorXd::Zero(16);
  const double first = actor_update(actor, 0.7, tr.critic1(), b, 1e-2);
  double last = first;
  for (int i = 0; i < 100; ++i) last = actor_update(actor, 0.7, tr.critic1(), b, 1e-2);
  EXPECT_LE(last, first);
}

TEST(Trainer, NoUpdatesBeforeWarmupAndZeroMetrics) {
  TrainerConfig cfg;
  cfg.hidden = {8, 8};
  env::EnvConfig ec;
  env::LeaderFollowerEnv env(env::Task::Tracking, ec, 1);
  Trainer tr(env.observation_dim(), env.action_dim(), env.action_bound(), cfg, 1);
  const nn::MlpParams before = tr.critic1();
  std::vector<StepMetrics> rows;
  tr.train_episode(env, 1, 15, [&](const StepMetrics& m) { rows.push_back(m); });
  ASSERT_EQ(rows.size(), 15u);
  EXPECT_EQ(tr.critic1().weights[0], before.weights[0]);
  for (const auto& m : rows) {
    EXPECT_EQ(m.loss_critic, 0.0);
    EXPECT_EQ(m.q1_mean, 0.0);
  }
  tr.train_episode(env, 2, 5, [&](const StepMetrics& m) { rows.push_back(m); });
  EXPECT_NE(tr.critic1().weights[0], before.weights[0]);
  EXPECT_NE(rows.back().loss_critic, 0.0);
}

TEST(Trainer, TargetsTrailCriticsAndStartEqual) {
  TrainerConfig cfg;
  cfg.hidden = {8, 8};
  Trainer tr(4, 2, 0.7, cfg, 3);
  EXPECT_EQ(tr.critic1().weights[0], tr.critic1_target().weights[0]);
  EXPECT_EQ(tr.critic2().weights[1], tr.critic2_target().weights[1]);
  EXPECT_NE(tr.critic1().weights[0], tr.critic2().weights[0]);
}

TEST(Trainer, SameSeedSameRun) {
  auto run = [](std::uint64_t seed) {
    TrainerConfig cfg;
    cfg.hidden = {8, 8};
    env::LeaderFollowerEnv env(env::Task::Tracking, env::EnvConfig{}, seed);
    Trainer tr(env.observation_dim(), env.action_dim(), env.action_bound(), cfg, seed);
    std::vector<double> trace;
    for (int ep = 0; ep < 2; ++ep) {
      tr.train_episode(env, ep, 60, [&](const StepMetrics& m) {
        trace.push_back(m.reward);
        trace.push_back(m.loss_critic);
        trace.push_back(m.delta_adj_mean);
      });
    }
    return trace;
  };
  EXPECT_EQ(run(4), run(4));
  EXPECT_NE(run(4), run(5));
}

TEST(Trainer, MomentumMetricNonNegativeAndZeroForTd3) {
  for (auto kind : {TargetKind::Mpg, TargetKind::Td3}) {
    TrainerConfig cfg;
    cfg.hidden = {8, 8};
    cfg.rule = kind;
    env::LeaderFollowerEnv env(env::Task::Tracking, env::EnvConfig{}, 1);
    Trainer tr(env.observation_dim(), env.action_dim(), env.action_bound(), cfg, 1);
    bool any_positive = false;
    tr.train_episode(env, 1, 50, [&](const StepMetrics& m) {
      EXPECT_GE(m.delta_adj_mean, 0.0);
      if (kind == TargetKind::Td3) EXPECT_EQ(m.delta_adj_mean, 0.0);
      any_positive = any_positive || m.delta_adj_mean > 0.0;
    });
    EXPECT_EQ(any_positive, kind == TargetKind::Mpg);
  }
}
