#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mpg/kinematics.hpp"
#include "mpg/leader.hpp"
#include "mpg/rewards.hpp"
#include "mpg/tasks.hpp"

using namespace mpg;
using namespace mpg::env;

namespace {

int brute_force_collisions(const std::vector<Point>& pts, double c) {
  int n = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (i < j && std::sqrt((pts[i].x - pts[j].x) * (pts[i].x - pts[j].x) +
                             (pts[i].y - pts[j].y) * (pts[i].y - pts[j].y)) < c) {
        ++n;
      }
    }
  }
  return n;
}

Eigen::VectorXd zeros(int n) { return Eigen::VectorXd::Zero(n); }

}  // namespace

TEST(Kinematics, ZeroHeadingSubstitution) {
  const AgentState s{0.0, 0.0, 0.0, Role::Follower};
  const WheelCommand c = transform_to_wheel(s, {0.5, 0.25}, 0.125);
  EXPECT_EQ(c.v, 0.5);
  EXPECT_EQ(c.w, -0.25 / 0.125);
  const WheelCommand x_only = transform_to_wheel(s, {0.7, 0.0});
  EXPECT_EQ(x_only.v, 0.7);
  EXPECT_EQ(x_only.w, 0.0);
  const WheelCommand y_only = transform_to_wheel(s, {0.0, 0.3}, 0.15);
  EXPECT_EQ(y_only.v, 0.0);
  EXPECT_EQ(y_only.w, -0.3 / 0.15);
}

TEST(Kinematics, TransformIsLinear) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0), th(-M_PI, M_PI);
  for (int i = 0; i < 1000; ++i) {
    const AgentState s{0.0, 0.0, th(rng), Role::Follower};
    const ControlInput p{u(rng), u(rng)}, q{u(rng), u(rng)};
    const double a = u(rng), b = u(rng);
    const WheelCommand cp = transform_to_wheel(s, p), cq = transform_to_wheel(s, q);
    const WheelCommand cm = transform_to_wheel(s, {a * p.ax + b * q.ax, a * p.ay + b * q.ay});
    EXPECT_NEAR(cm.v, a * cp.v + b * cq.v, 1e-14);
    EXPECT_NEAR(cm.w, a * cp.w + b * cq.w, 1e-13);
  }
  // Exact on the zero heading with dyadic inputs.
  const AgentState z{0.0, 0.0, 0.0, Role::Follower};
  const WheelCommand c1 = transform_to_wheel(z, {0.5, 0.25}, 0.5);
  const WheelCommand c2 = transform_to_wheel(z, {0.125, -0.75}, 0.5);
  const WheelCommand c3 = transform_to_wheel(z, {2 * 0.5 + 4 * 0.125, 2 * 0.25 + 4 * -0.75}, 0.5);
  EXPECT_EQ(c3.v, 2 * c1.v + 4 * c2.v);
  EXPECT_EQ(c3.w, 2 * c1.w + 4 * c2.w);
}

TEST(Kinematics, RejectsNonPositiveOffset) {
  EXPECT_THROW(transform_to_wheel({}, {1.0, 0.0}, 0.0), std::domain_error);
}

TEST(Kinematics, IntegrateStep) {
  const AgentState s{1.0, -1.0, 0.3, Role::Follower};
  const AgentState n = integrate_step(s, {0.5, -0.25}, 0.5);
  EXPECT_EQ(n.x, 1.25);
  EXPECT_EQ(n.y, -1.125);
  EXPECT_DOUBLE_EQ(n.theta, std::atan2(-0.25, 0.5));
  const AgentState rest = integrate_step(s, {0.0, 0.0}, 0.5);
  EXPECT_EQ(rest.theta, 0.3);
  EXPECT_EQ(rest.x, 1.0);
}

TEST(Rewards, CollisionCountMatchesBruteForce) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<Point> pts(2 + trial % 7);
    for (auto& p : pts) p = {u(rng), u(rng)};
    EXPECT_EQ(count_collisions(pts, 0.3), brute_force_collisions(pts, 0.3));
  }
}

TEST(Rewards, CollisionBoundaryIsStrict) {
  const std::vector<Point> pts{{0.0, 0.0}, {0.5, 0.0}};
  EXPECT_EQ(count_collisions(pts, 0.5), 0);
  EXPECT_EQ(count_collisions(pts, 0.5000001), 1);
}

TEST(Rewards, UnisonExamples) {
  const Point lead{0.2, 0.1};
  const std::vector<Point> offsets{{-0.3, 0.0}, {0.0, -0.3}, {-0.3, -0.3}};
  std::vector<Point> perfect;
  for (const auto& o : offsets) perfect.push_back(lead + o);
  const auto r0 = unison_reward(lead, perfect, offsets, 0.1, 10.0);
  EXPECT_EQ(r0.reward, 0.0);
  EXPECT_EQ(r0.collisions, 0);

  std::vector<Point> off = perfect;
  off[0].x += 0.1;
  off[1].y -= 0.1;
  off[2].x -= 0.1;
  const auto r1 = unison_reward(lead, off, offsets, 0.1, 10.0);
  EXPECT_NEAR(r1.reward, -0.3, 1e-12);

  // Offsets that coincide: zero errors, one collision.
  const std::vector<Point> close_offsets{{0.5, 0.0}, {0.55, 0.0}};
  const std::vector<Point> pair{lead + close_offsets[0], lead + close_offsets[1]};
  const auto r2 = unison_reward(lead, pair, close_offsets, 0.1, 10.0);
  EXPECT_EQ(r2.collisions, 1);
  EXPECT_NEAR(r2.reward, -10.0, 1e-12);
}

TEST(Rewards, ConsensusExamples) {
  const double d = 0.4;
  const std::vector<Point> tri{{0.0, 0.0}, {d, 0.0}, {d / 2, d * std::sqrt(3.0) / 2}};
  const auto r = consensus_reward(tri, d, 0.1, 10.0);
  EXPECT_NEAR(r.reward, 0.0, 1e-15);
  ASSERT_EQ(r.errors.size(), 3u);

  const std::vector<Point> collapsed(3, Point{0.1, 0.1});
  const auto c = consensus_reward(collapsed, d, 0.1, 10.0);
  EXPECT_EQ(c.collisions, 3);
  EXPECT_NEAR(c.reward, -30.0 - 3 * d, 1e-12);
}

TEST(Rewards, ObstacleExample) {
  const Point f{0.0, 0.0};
  const std::vector<Point> obs{{1.0, 0.0}, {0.0, -1.0}, {0.0, 2.0}};
  EXPECT_DOUBLE_EQ(obstacle_reward(f, f, obs, 0.25), 1.0);
}

TEST(Rewards, SignInvariants) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const Point l{u(rng), u(rng)}, f{u(rng), u(rng)};
    const std::vector<Point> obs{{u(rng), u(rng)}, {u(rng), u(rng)}};
    EXPECT_LE(tracking_reward(l, f), 0.0);
    EXPECT_GE(obstacle_reward(l, f, obs, 0.25), -distance(l, f));
  }
}

TEST(Leader, DeterministicPaths) {
  const LeaderPath p;
  const Point c0 = path_position(LeaderKind::Circle, p, 0.0);
  EXPECT_NEAR(c0.x, 0.8, 1e-15);
  EXPECT_NEAR(c0.y, 0.0, 1e-15);
  const double period = 2 * M_PI * p.circle_radius / p.circle_speed;
  const Point cq = path_position(LeaderKind::Circle, p, period / 4);
  EXPECT_NEAR(cq.x, 0.0, 1e-12);
  EXPECT_NEAR(cq.y, 0.8, 1e-12);

  const Point s1 = path_position(LeaderKind::Square, p, 0.8 / p.square_speed);
  EXPECT_NEAR(s1.x, 0.8, 1e-12);
  EXPECT_NEAR(s1.y, 0.8, 1e-12);
  const Point s2 = path_position(LeaderKind::Square, p, 2.4 / p.square_speed);
  EXPECT_NEAR(s2.x, -0.8, 1e-12);
  EXPECT_NEAR(s2.y, 0.8, 1e-12);

  const Point l0 = path_position(LeaderKind::Line, p, 0.0);
  EXPECT_EQ(l0, (Point{-1.0, -1.0}));
  const Point lend = path_position(LeaderKind::Line, p, 10.0);
  EXPECT_NEAR(lend.x, 1.0, 1e-12);
  EXPECT_NEAR(lend.y, 1.0, 1e-12);
  const Point past = path_position(LeaderKind::Line, p, 50.0);
  EXPECT_EQ(past, (Point{1.0, 1.0}));
}

TEST(Leader, RandomLeaderStaysInBounds) {
  Leader l(LeaderKind::Random, LeaderPath{});
  Rng rng(4);
  l.reset(rng);
  for (int i = 0; i < 5000; ++i) {
    l.advance(0.05, rng);
    EXPECT_TRUE(kLeaderLimits.contains(l.position()));
  }
}

TEST(Leader, RandomVelocityIsClampedGaussian) {
  Rng rng(5);
  double sq = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const ControlInput u = leader_trajectory(LeaderKind::Random, LeaderPath{}, 0.0, rng);
    ASSERT_LE(std::abs(u.ax), 0.7);
    ASSERT_LE(std::abs(u.ay), 0.7);
    sq += u.ax * u.ax;
  }
  // Variance of a standard normal clipped at 0.7 (closed form).
  const double c = 0.7, phi = std::exp(-c * c / 2) / std::sqrt(2 * M_PI);
  const double cdf = 0.5 * std::erfc(-c / std::sqrt(2.0));
  const double expect = (2 * cdf - 1) - 2 * c * phi + 2 * c * c * (1 - cdf);
  EXPECT_NEAR(sq / n, expect, 0.005);
}

TEST(Env, ObservationLayout) {
  EnvConfig ec;
  EXPECT_EQ(LeaderFollowerEnv(Task::Tracking, ec, 1).observation_dim(), 4);
  EXPECT_EQ(LeaderFollowerEnv(Task::Unison, ec, 1).observation_dim(), 8);
  EXPECT_EQ(LeaderFollowerEnv(Task::Unison, ec, 1).action_dim(), 6);
  EXPECT_EQ(LeaderFollowerEnv(Task::Consensus, ec, 1).observation_dim(), 6);
  ec.leader = LeaderKind::Line;
  LeaderFollowerEnv obs(Task::Obstacle, ec, 1);
  EXPECT_EQ(obs.observation_dim(), 10);
  const auto o = obs.reset();
  EXPECT_EQ(o(0), -1.0);
  EXPECT_EQ(o(1), -1.0);
  EXPECT_EQ(o(4), -0.33);
  EXPECT_EQ(o(8), -1.0);
  EXPECT_EQ(o(9), 1.0);
}

TEST(Env, TrackingBoundBreachTerminatesWithPenalty) {
  LeaderFollowerEnv env(Task::Tracking, EnvConfig{}, 1);
  env.reset();
  env.set_positions({0.0, 0.0}, {{1.99, 0.0}});
  Eigen::VectorXd a(2);
  a << 0.7, 0.0;
  const StepResult r = env.step(a);
  const double x = 1.99 + 0.7 * 0.05;
  EXPECT_GT(x, 2.0);
  EXPECT_TRUE(r.terminal);
  EXPECT_TRUE(env.last_info().out_of_bounds);
  EXPECT_DOUBLE_EQ(r.reward, -x - 10.0);
  EXPECT_THROW(env.step(a), std::logic_error);
}

TEST(Env, TrackingRewardIsNegativeDistance) {
  LeaderFollowerEnv env(Task::Tracking, EnvConfig{}, 1);
  env.reset();
  env.set_positions({0.5, 0.5}, {{0.5, 0.0}});
  const StepResult r = env.step(zeros(2));
  EXPECT_DOUBLE_EQ(r.reward, -0.5);
  EXPECT_FALSE(r.done());
}

TEST(Env, EpisodeTruncatesAtLimit) {
  EnvConfig ec;
  ec.episode_len = 5;
  LeaderFollowerEnv env(Task::Tracking, ec, 2);
  env.reset();
  StepResult r;
  for (int i = 0; i < 5; ++i) r = env.step(zeros(2));
  EXPECT_TRUE(r.truncated);
  EXPECT_FALSE(r.terminal);
}

TEST(Env, UnisonPerfectFormationAndCollision) {
  EnvConfig ec;
  LeaderFollowerEnv env(Task::Unison, ec, 3);
  env.reset();
  const Point lead{0.0, 0.0};
  std::vector<Point> f;
  for (const auto& o : ec.unison_offsets) f.push_back(lead + o);
  env.set_positions(lead, f);
  StepResult r = env.step(zeros(6));
  EXPECT_EQ(r.reward, 0.0);
  EXPECT_FALSE(r.done());

  env.reset();
  std::vector<Point> bumped = f;
  bumped[0] = bumped[2] + Point{0.0, 0.05};  // within C of follower 3
  env.set_positions(lead, bumped);
  r = env.step(zeros(6));
  EXPECT_TRUE(r.terminal);
  EXPECT_EQ(env.last_info().collisions, 1);
  EXPECT_NEAR(r.reward, -10.0 - distance(bumped[0], f[0]), 1e-12);
}

TEST(Env, NonAbsorbingResetEndsWithoutTerminal) {
  EnvConfig ec;
  ec.absorbing_resets = false;
  LeaderFollowerEnv env(Task::Consensus, ec, 3);
  env.reset();
  env.set_positions({0.0, 0.0}, {{0.05, 0.0}, {0.0, 0.4}});
  const StepResult r = env.step(zeros(4));
  EXPECT_FALSE(r.terminal);
  EXPECT_TRUE(r.truncated);
  EXPECT_TRUE(r.done());
  EXPECT_EQ(env.last_info().collisions, 1);
}

TEST(Env, ConsensusTriangleIsZeroReward) {
  EnvConfig ec;
  LeaderFollowerEnv env(Task::Consensus, ec, 4);
  env.reset();
  const double d = ec.consensus_distance;
  env.set_positions({0.0, 0.0}, {{d, 0.0}, {d / 2, d * std::sqrt(3.0) / 2}});
  const StepResult r = env.step(zeros(4));
  EXPECT_NEAR(r.reward, 0.0, 1e-15);
}

TEST(Env, ObstacleContactEndsWithPenalty) {
  EnvConfig ec;
  ec.leader = LeaderKind::Line;
  LeaderFollowerEnv env(Task::Obstacle, ec, 5);
  env.reset();
  env.set_positions({-1.0, -1.0}, {{-0.33 + 0.05, -0.33}});
  const StepResult r = env.step(zeros(2));
  EXPECT_TRUE(r.terminal);
  EXPECT_TRUE(env.last_info().obstacle_contact);
  const Point f{-0.28, -0.33};
  std::vector<Point> obs{{-0.33, -0.33}, {0.33, 0.33}, {-1.0, 1.0}};
  EXPECT_NEAR(r.reward, obstacle_reward({-1.0, -1.0}, f, obs, 0.25) - 10.0, 1e-12);
}

TEST(Env, SpawnAvoidsCollisionsAndIsSeeded) {
  EnvConfig ec;
  LeaderFollowerEnv a(Task::Unison, ec, 6), b(Task::Unison, ec, 6);
  for (int i = 0; i < 200; ++i) {
    const auto oa = a.reset(), ob = b.reset();
    EXPECT_EQ(oa, ob);
    std::vector<Point> pts;
    for (int k = 0; k < 4; ++k) pts.push_back({oa(2 * k), oa(2 * k + 1)});
    EXPECT_EQ(count_collisions(pts, ec.safety_distance), 0);
  }
}

TEST(Env, ActionsAreClampedToVelocityLimit) {
  LeaderFollowerEnv env(Task::Tracking, EnvConfig{}, 7);
  env.reset();
  env.set_positions({0.0, 0.0}, {{0.0, 0.0}});
  Eigen::VectorXd a(2);
  a << 100.0, -100.0;
  env.step(a);
  EXPECT_DOUBLE_EQ(env.followers()[0].x, 0.7 * 0.05);
  EXPECT_DOUBLE_EQ(env.followers()[0].y, -0.7 * 0.05);
}

TEST(Env, ConfigValidation) {
  EnvConfig ec;
  ec.safety_distance = 0.0;
  EXPECT_THROW(ec.validate(Task::Tracking), std::invalid_argument);
  EnvConfig u;
  u.unison_offsets = {{0.0, 0.0}, {0.01, 0.0}};
  EXPECT_THROW(u.validate(Task::Unison), std::invalid_argument);
  EXPECT_THROW(parse_task("dance"), std::invalid_argument);
}
