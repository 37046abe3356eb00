#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "mpg/tabular.hpp"

using namespace mpg;
using namespace mpg::tabular;

namespace {

// Two states, two actions, deterministic transitions:
//   s0: a0 -> s0 (r 0),  a1 -> s1 (r 0.5)
//   s1: a0 -> s1 (r 1),  a1 -> s0 (r 2)
FiniteMdp hand_chain() {
  FiniteMdp m;
  m.n_states = 2;
  m.n_actions = 2;
  m.gamma = 0.9;
  m.transition.assign(8, 0.0);
  auto set = [&](int s, int a, int next) { m.transition[(s * 2 + a) * 2 + next] = 1.0; };
  set(0, 0, 0);
  set(0, 1, 1);
  set(1, 0, 1);
  set(1, 1, 0);
  m.reward = QTable(2, 2);
  m.reward << 0.0, 0.5, 1.0, 2.0;
  return m;
}

}  // namespace

TEST(Tabular, ValueIterationHandChain) {
  const FiniteMdp m = hand_chain();
  // Optimal cycle s0 -a1-> s1 -a1-> s0: V0 = 0.5 + 0.9 V1, V1 = 2 + 0.9 V0.
  const double v0 = (0.5 + 0.9 * 2.0) / (1.0 - 0.81);
  const double v1 = 2.0 + 0.9 * v0;
  const QTable q = value_iteration(m, 1e-12);
  EXPECT_NEAR(q(0, 0), 0.9 * v0, 1e-10);
  EXPECT_NEAR(q(0, 1), v0, 1e-10);
  EXPECT_NEAR(q(1, 0), 1.0 + 0.9 * v1, 1e-10);
  EXPECT_NEAR(q(1, 1), v1, 1e-10);
  EXPECT_LT(bellman_residual(m, q), 1e-10);
}

TEST(Tabular, SingleStateClosedForm) {
  FiniteMdp m;
  m.n_states = 1;
  m.n_actions = 1;
  m.gamma = 0.9;
  m.transition = {1.0};
  m.reward = QTable::Constant(1, 1, 1.0);
  EXPECT_NEAR(value_iteration(m, 1e-12)(0, 0), 10.0, 1e-10);
}

TEST(Tabular, EqualTablesReduceToQLearning) {
  std::mt19937_64 rng(17);
  const int ns = 5, na = 3;
  std::uniform_int_distribution<int> us(0, ns - 1), ua(0, na - 1);
  std::uniform_real_distribution<double> ur(-1.0, 1.0), ualpha(0.01, 0.99);
  QTablePair t;
  t.q = QTable::Random(ns, na);
  t.q_prime = t.q;
  QTable oracle = t.q;
  const double gamma = 0.9;
  for (int i = 0; i < 10000; ++i) {
    const int s = us(rng), a = ua(rng), next = us(rng);
    const double r = ur(rng), alpha = ualpha(rng);
    mpg_tabular_update(t, s, a, r, next, alpha, gamma);
    const double y = r + gamma * oracle.row(next).maxCoeff();
    oracle(s, a) = (1.0 - alpha) * oracle(s, a) + alpha * y;
    ASSERT_NEAR(t.q(s, a), oracle(s, a), 1e-12);
    ASSERT_EQ(t.q, t.q_prime);
    ASSERT_EQ(t.delta_last, 0.0);
  }
}

TEST(Tabular, MomentumUpdateByHand) {
  QTablePair t;
  t.q = QTable::Zero(2, 1);
  t.q_prime = QTable::Zero(2, 1);
  t.q(1, 0) = 1.0;
  t.q_prime(1, 0) = 3.0;
  t.delta_last = 1.0;
  mpg_tabular_update(t, 0, 0, 0.5, 1, 0.5, 0.9);
  // gap 2, adj 1.5, y = 0.5 + 0.9 (3 - 1.5) = 1.85
  EXPECT_NEAR(t.q(0, 0), 0.925, 1e-15);
  EXPECT_NEAR(t.q_prime(0, 0), 0.925, 1e-15);
  EXPECT_EQ(t.delta_last, 2.0);
}

TEST(Tabular, UpdateRejectsBadArguments) {
  QTablePair t{QTable::Zero(2, 2), QTable::Zero(2, 2), 0.0};
  EXPECT_THROW(mpg_tabular_update(t, 0, 0, 0.0, 1, 1.0, 0.9), std::invalid_argument);
  EXPECT_THROW(mpg_tabular_update(t, 0, 0, 0.0, 1, 0.0, 0.9), std::invalid_argument);
  EXPECT_THROW(mpg_tabular_update(t, 2, 0, 0.0, 1, 0.5, 0.9), std::out_of_range);
}

TEST(Tabular, RandomMdpIsValid) {
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const FiniteMdp m = random_mdp(rng);
    EXPECT_NO_THROW(m.validate());
    EXPECT_GE(m.n_states, 2);
    EXPECT_LE(m.n_states, 10);
    EXPECT_GE(m.n_actions, 1);
    EXPECT_LE(m.n_actions, 4);
    EXPECT_GE(m.reward.minCoeff(), 0.0);
    EXPECT_LE(m.reward.maxCoeff(), 1.0);
    EXPECT_EQ(m.reward_noise, 0.1);
  }
}

TEST(Tabular, ValueIterationIsFixedPoint) {
  Rng rng(4);
  for (int i = 0; i < 20; ++i) {
    const FiniteMdp m = random_mdp(rng);
    EXPECT_LT(bellman_residual(m, value_iteration(m, 1e-10)), 1e-10);
  }
}

TEST(Tabular, ConvergenceTraceShapeAndDeterminism) {
  Rng rng(5);
  const FiniteMdp m = random_mdp(rng);
  ConvergenceConfig cfg;
  cfg.n_steps = 5000;
  cfg.trace_every = 1000;
  const auto a = convergence_experiment(m, cfg, 9);
  const auto b = convergence_experiment(m, cfg, 9);
  ASSERT_EQ(a.trace.size(), b.trace.size());
  EXPECT_EQ(a.trace.back().step, 5000);
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    EXPECT_EQ(a.trace[i].sup_error, b.trace[i].sup_error);
  }
  std::ostringstream out;
  write_trace_csv(out, a.trace);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "step,sup_error,q_minus_qprime_sup");
}

TEST(Tabular, SharedTargetShrinksTableGap) {
  Rng rng(6);
  const FiniteMdp m = random_mdp(rng);
  ConvergenceConfig cfg;
  cfg.n_steps = 20000;
  const auto r = convergence_experiment(m, cfg, 1);
  EXPECT_LT(r.terminal_gap, r.trace.front().q_minus_qprime_sup);
}

TEST(Tabular, SlowerDecayConvergesCloser) {
  // With the same budget, alpha = 1/n^0.6 gets much closer to Q* than 1/n.
  Rng rng(7);
  const FiniteMdp m = random_mdp(rng);
  ConvergenceConfig cfg;
  cfg.n_steps = 100000;
  const double harmonic = convergence_experiment(m, cfg, 2).terminal_error;
  cfg.lr_exponent = 0.6;
  const double polynomial = convergence_experiment(m, cfg, 2).terminal_error;
  EXPECT_LT(polynomial, harmonic);
  EXPECT_LT(polynomial, 0.1);
}
