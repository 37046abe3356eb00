#pragma once

#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "mpg/environment.hpp"
#include "mpg/kinematics.hpp"
#include "mpg/leader.hpp"
#include "mpg/seeding.hpp"

namespace mpg::env {

enum class Task { Tracking, Unison, Consensus, Obstacle };

std::string_view to_string(Task task);
Task parse_task(std::string_view text);

struct EnvConfig {
  double dt = 0.05;
  int episode_len = 200;
  AgentLimits leader_limits = kLeaderLimits;
  AgentLimits follower_limits = kFollowerLimits;
  double k_b = 10.0;             // bound breach / obstacle contact penalty
  double k_c = 10.0;             // per-collision penalty
  double k_o = 0.25;             // obstacle shaping weight
  double safety_distance = 0.1;  // C
  /// Followers start uniformly inside a box of this half-width around their
  /// anchor point (the leader, or the leader plus the formation offset).
  double spawn_half_width = 0.5;
  LeaderKind leader = LeaderKind::Random;
  LeaderPath path;
  std::vector<Point> unison_offsets{{-0.3, 0.0}, {0.0, -0.3}, {-0.3, -0.3}};
  int consensus_followers = 2;
  double consensus_distance = 0.4;  // D_ij, shared by every pair
  std::vector<Point> fixed_obstacles{{-0.33, -0.33}, {0.33, 0.33}};
  bool moving_obstacle = true;
  /// Whether an episode ended early (bound breach, collision, obstacle
  /// contact) is absorbing, i.e. cuts the bootstrap. When false the reset is
  /// treated like the step limit: the episode still ends and the penalty is
  /// still paid, but the value target keeps bootstrapping.
  bool absorbing_resets = true;
  Point moving_from{-1.0, 1.0};
  Point moving_to{1.0, -1.0};

  void validate(Task task) const;
  friend bool operator==(const EnvConfig&, const EnvConfig&) = default;
};

/// Bookkeeping for the most recent step, used by evaluation and logging.
struct StepInfo {
  /// Tracking/obstacle: ||p_l - p_f||. Unison: per-follower offset errors.
  /// Consensus: per-pair distance errors.
  std::vector<double> errors;
  int collisions = 0;
  bool out_of_bounds = false;
  bool obstacle_contact = false;
};

/// Leader plus followers (plus obstacles) on the plane. Followers integrate
/// the commanded velocities; the reward is evaluated against the leader and
/// obstacle positions the followers observed, after which the leader and the
/// moving obstacle advance. A pure state machine given its seed.
class LeaderFollowerEnv final : public Environment {
 public:
  LeaderFollowerEnv(Task task, EnvConfig config, std::uint64_t seed);

  int observation_dim() const override;
  int action_dim() const override { return 2 * num_followers(); }
  double action_bound() const override { return config_.follower_limits.v_max; }

  Eigen::VectorXd reset() override;
  StepResult step(const Eigen::VectorXd& action) override;

  Task task() const { return task_; }
  const EnvConfig& config() const { return config_; }
  int num_followers() const;
  int step_count() const { return steps_; }

  /// Agents as seen when the last reward was computed (leader first, then
  /// followers, then obstacles). After reset, the initial configuration.
  const std::vector<AgentState>& agents() const { return snapshot_; }
  const StepInfo& last_info() const { return info_; }

  const Leader& leader() const { return leader_; }
  const std::vector<AgentState>& followers() const { return followers_; }
  std::vector<Point> obstacle_positions() const;

  /// Overwrites poses; used by tests to set up exact configurations.
  void set_positions(Point leader, const std::vector<Point>& followers);

 private:
  Eigen::VectorXd observe() const;
  void spawn_followers();
  void take_snapshot();
  void end_by_reset();
  double tracking_step();
  double unison_step();
  double consensus_step();
  double obstacle_step();

  Task task_;
  EnvConfig config_;
  Rng rng_;
  Leader leader_;
  std::vector<AgentState> followers_;
  std::vector<AgentState> snapshot_;
  StepInfo info_;
  int steps_ = 0;
  bool terminal_ = false;  // absorbing end
  bool ended_ = false;
};

std::unique_ptr<LeaderFollowerEnv> make_env(Task task, const EnvConfig& config,
                                            std::uint64_t seed);

}  // namespace mpg::env
