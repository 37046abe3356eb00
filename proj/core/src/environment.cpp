#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>

#include "mpg/rewards.hpp"
#include "mpg/tasks.hpp"

namespace mpg::env {
namespace {

constexpr int kMaxSpawnAttempts = 10000;

Point moving_obstacle_at(const EnvConfig& c, double t) {
  const double len = distance(c.moving_from, c.moving_to);
  const double s = std::min(c.path.line_speed * t, len);
  return c.moving_from + (s / len) * (c.moving_to - c.moving_from);
}

}  // namespace

std::string_view to_string(Task task) {
  switch (task) {
    case Task::Tracking: return "tracking";
    case Task::Unison: return "unison";
    case Task::Consensus: return "consensus";
    case Task::Obstacle: return "obstacle";
  }
  return "?";
}

Task parse_task(std::string_view text) {
  if (text == "tracking") return Task::Tracking;
  if (text == "unison") return Task::Unison;
  if (text == "consensus") return Task::Consensus;
  if (text == "obstacle") return Task::Obstacle;
  throw std::invalid_argument("unknown task '" + std::string(text) +
                              "' (tracking|unison|consensus|obstacle)");
}

void EnvConfig::validate(Task task) const {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (episode_len < 1) throw std::invalid_argument("episode_len must be >= 1");
  if (!(safety_distance > 0.0)) throw std::invalid_argument("safety distance C must be positive");
  if (!(spawn_half_width >= 0.0)) throw std::invalid_argument("spawn_half_width must be >= 0");
  if (k_b < 0.0 || k_c < 0.0 || k_o < 0.0) {
    throw std::invalid_argument("penalty coefficients must be non-negative");
  }
  if (task == Task::Unison) {
    if (unison_offsets.empty()) throw std::invalid_argument("unison needs at least one offset");
    std::vector<Point> slots{{0.0, 0.0}};
    slots.insert(slots.end(), unison_offsets.begin(), unison_offsets.end());
    if (count_collisions(slots, safety_distance) != 0) {
      throw std::invalid_argument("unison offsets place agents closer than C");
    }
  }
  if (task == Task::Consensus) {
    if (consensus_followers < 1) throw std::invalid_argument("consensus needs >= 1 follower");
    if (!(consensus_distance > safety_distance)) {
      throw std::invalid_argument("consensus distance must exceed C");
    }
  }
}

LeaderFollowerEnv::LeaderFollowerEnv(Task task, EnvConfig config, std::uint64_t seed)
    : task_(task),
      config_(std::move(config)),
      rng_(seed),
      leader_(config_.leader, config_.path, config_.leader_limits) {
  config_.validate(task_);
  reset();
}

int LeaderFollowerEnv::num_followers() const {
  switch (task_) {
    case Task::Unison: return static_cast<int>(config_.unison_offsets.size());
    case Task::Consensus: return config_.consensus_followers;
    default: return 1;
  }
}

int LeaderFollowerEnv::observation_dim() const {
  int n = 2 * (1 + num_followers());
  if (task_ == Task::Obstacle) n += 2 * static_cast<int>(obstacle_positions().size());
  return n;
}

std::vector<Point> LeaderFollowerEnv::obstacle_positions() const {
  if (task_ != Task::Obstacle) return {};
  std::vector<Point> obs = config_.fixed_obstacles;
  if (config_.moving_obstacle) obs.push_back(moving_obstacle_at(config_, leader_.time()));
  return obs;
}

Eigen::VectorXd LeaderFollowerEnv::observe() const {
  Eigen::VectorXd o(observation_dim());
  Eigen::Index k = 0;
  o(k++) = leader_.state().x;
  o(k++) = leader_.state().y;
  for (const auto& f : followers_) {
    o(k++) = f.x;
    o(k++) = f.y;
  }
  for (const Point& p : obstacle_positions()) {
    o(k++) = p.x;
    o(k++) = p.y;
  }
  return o;
}

void LeaderFollowerEnv::take_snapshot() {
  snapshot_.clear();
  snapshot_.push_back(leader_.state());
  snapshot_.insert(snapshot_.end(), followers_.begin(), followers_.end());
  for (const Point& p : obstacle_positions()) snapshot_.push_back({p.x, p.y, 0.0, Role::Obstacle});
}

void LeaderFollowerEnv::spawn_followers() {
  const int n = num_followers();
  const auto& lim = config_.follower_limits;
  const double h = config_.spawn_half_width;
  const Point lead = leader_.position();
  const std::vector<Point> obstacles = obstacle_positions();

  for (int attempt = 0; attempt < kMaxSpawnAttempts; ++attempt) {
    followers_.clear();
    std::vector<Point> placed{lead};
    for (int i = 0; i < n; ++i) {
      Point anchor = lead;
      if (task_ == Task::Unison) anchor = lead + config_.unison_offsets[static_cast<std::size_t>(i)];
      std::uniform_real_distribution<double> ux(std::max(lim.pos_min, anchor.x - h),
                                                std::min(lim.pos_max, anchor.x + h));
      std::uniform_real_distribution<double> uy(std::max(lim.pos_min, anchor.y - h),
                                                std::min(lim.pos_max, anchor.y + h));
      const Point p{ux(rng_), uy(rng_)};
      followers_.push_back({p.x, p.y, 0.0, Role::Follower});
      placed.push_back(p);
    }
    bool clear = count_collisions(placed, config_.safety_distance) == 0;
    for (const Point& o : obstacles) {
      for (std::size_t i = 1; i < placed.size() && clear; ++i) {
        if (distance(placed[i], o) < 2.0 * config_.safety_distance) clear = false;
      }
    }
    if (clear) return;
  }
  throw std::runtime_error("could not place followers without collisions");
}

Eigen::VectorXd LeaderFollowerEnv::reset() {
  steps_ = 0;
  terminal_ = false;
  ended_ = false;
  info_ = {};
  leader_.reset(rng_);
  spawn_followers();
  take_snapshot();
  return observe();
}

void LeaderFollowerEnv::set_positions(Point leader, const std::vector<Point>& followers) {
  if (static_cast<int>(followers.size()) != num_followers()) {
    throw std::invalid_argument("set_positions: follower count mismatch");
  }
  leader_.place(leader);
  for (std::size_t i = 0; i < followers.size(); ++i) {
    followers_[i].x = followers[i].x;
    followers_[i].y = followers[i].y;
  }
  take_snapshot();
}

StepResult LeaderFollowerEnv::step(const Eigen::VectorXd& action) {
  if (action.size() != action_dim()) {
    throw std::invalid_argument("step: action has " + std::to_string(action.size()) +
                                " entries, expected " + std::to_string(action_dim()));
  }
  if (ended_ || steps_ >= config_.episode_len) {
    throw std::logic_error("step called on a finished episode; call reset()");
  }
  const auto& lim = config_.follower_limits;
  for (std::size_t i = 0; i < followers_.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(2 * i);
    const ControlInput u{std::clamp(action(k), lim.v_min, lim.v_max),
                         std::clamp(action(k + 1), lim.v_min, lim.v_max)};
    followers_[i] = integrate_step(followers_[i], u, config_.dt);
  }
  ++steps_;
  take_snapshot();

  info_ = {};
  for (const auto& f : followers_) {
    if (!lim.contains(f.position())) info_.out_of_bounds = true;
  }

  double reward = 0.0;
  switch (task_) {
    case Task::Tracking: reward = tracking_step(); break;
    case Task::Unison: reward = unison_step(); break;
    case Task::Consensus: reward = consensus_step(); break;
    case Task::Obstacle: reward = obstacle_step(); break;
  }
  if (info_.out_of_bounds) {
    reward -= config_.k_b;
    end_by_reset();
  }

  leader_.advance(config_.dt, rng_);

  StepResult r;
  r.observation = observe();
  r.reward = reward;
  r.terminal = terminal_;
  r.truncated = !terminal_ && (ended_ || steps_ >= config_.episode_len);
  return r;
}

void LeaderFollowerEnv::end_by_reset() {
  ended_ = true;
  if (config_.absorbing_resets) terminal_ = true;
}

double LeaderFollowerEnv::tracking_step() {
  const Point f = followers_.front().position();
  info_.errors = {distance(leader_.position(), f)};
  return tracking_reward(leader_.position(), f);
}

double LeaderFollowerEnv::unison_step() {
  std::vector<Point> pos;
  for (const auto& f : followers_) pos.push_back(f.position());
  FormationReward fr = unison_reward(leader_.position(), pos, config_.unison_offsets,
                                     config_.safety_distance, config_.k_c);
  info_.errors = std::move(fr.errors);
  info_.collisions = fr.collisions;
  if (fr.collisions > 0) end_by_reset();
  return fr.reward;
}

double LeaderFollowerEnv::consensus_step() {
  std::vector<Point> pos{leader_.position()};
  for (const auto& f : followers_) pos.push_back(f.position());
  FormationReward fr = consensus_reward(pos, config_.consensus_distance,
                                        config_.safety_distance, config_.k_c);
  info_.errors = std::move(fr.errors);
  info_.collisions = fr.collisions;
  if (fr.collisions > 0) end_by_reset();
  return fr.reward;
}

double LeaderFollowerEnv::obstacle_step() {
  const Point f = followers_.front().position();
  const std::vector<Point> obstacles = obstacle_positions();
  info_.errors = {distance(leader_.position(), f)};
  double reward = obstacle_reward(leader_.position(), f, obstacles, config_.k_o);
  for (const Point& o : obstacles) {
    if (distance(f, o) < config_.safety_distance) info_.obstacle_contact = true;
  }
  if (info_.obstacle_contact) {
    reward -= config_.k_b;
    end_by_reset();
  }
  return reward;
}

std::unique_ptr<LeaderFollowerEnv> make_env(Task task, const EnvConfig& config,
                                            std::uint64_t seed) {
  return std::make_unique<LeaderFollowerEnv>(task, config, seed);
}

}  // namespace mpg::env
