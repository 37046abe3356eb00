#pragma once

#include <span>
#include <vector>

#include "mpg/kinematics.hpp"

namespace mpg::env {

/// Number of unordered pairs closer than `safety_distance`.
int count_collisions(std::span<const Point> agents, double safety_distance);

/// -||p_leader - p_follower||
double tracking_reward(Point leader, Point follower);

struct FormationReward {
  double reward = 0.0;
  int collisions = 0;
  /// Per-follower ||p_i - F_i|| (unison) or per-pair |d_ij - D_ij| (consensus).
  std::vector<double> errors;
};

/// -k_c n_c - sum_i ||p_i - (p_leader + offset_i)||; collisions are counted over
/// all agents including the leader.
FormationReward unison_reward(Point leader, std::span<const Point> followers,
                              std::span<const Point> offsets, double safety_distance,
                              double k_c);

/// -k_c n_c - sum_{i<j} |d_ij - D| over every unordered pair of `agents`
/// (leader first). Pair order in `errors` is (0,1), (0,2), ..., (1,2), ...
FormationReward consensus_reward(std::span<const Point> agents, double target_distance,
                                 double safety_distance, double k_c);

/// -||p_l - p_f|| + k_o sum_i ||p_f - o_i||
double obstacle_reward(Point leader, Point follower, std::span<const Point> obstacles, double k_o);

}  // namespace mpg::env
