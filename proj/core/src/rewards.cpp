#include "mpg/rewards.hpp"

#include <cmath>
#include <stdexcept>

namespace mpg::env {

int count_collisions(std::span<const Point> agents, double safety_distance) {
  int n = 0;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    for (std::size_t j = i + 1; j < agents.size(); ++j) {
      if (distance(agents[i], agents[j]) < safety_distance) ++n;
    }
  }
  return n;
}

double tracking_reward(Point leader, Point follower) { return -distance(leader, follower); }

FormationReward unison_reward(Point leader, std::span<const Point> followers,
                              std::span<const Point> offsets, double safety_distance,
                              double k_c) {
  if (followers.size() != offsets.size()) {
    throw std::invalid_argument("unison_reward: one offset per follower required");
  }
  FormationReward out;
  std::vector<Point> all{leader};
  all.insert(all.end(), followers.begin(), followers.end());
  out.collisions = count_collisions(all, safety_distance);
  out.reward = -k_c * out.collisions;
  for (std::size_t i = 0; i < followers.size(); ++i) {
    const double e = distance(followers[i], leader + offsets[i]);
    out.errors.push_back(e);
    out.reward -= e;
  }
  return out;
}

FormationReward consensus_reward(std::span<const Point> agents, double target_distance,
                                 double safety_distance, double k_c) {
  FormationReward out;
  out.collisions = count_collisions(agents, safety_distance);
  out.reward = -k_c * out.collisions;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    for (std::size_t j = i + 1; j < agents.size(); ++j) {
      const double e = std::abs(distance(agents[i], agents[j]) - target_distance);
      out.errors.push_back(e);
      out.reward -= e;
    }
  }
  return out;
}

double obstacle_reward(Point leader, Point follower, std::span<const Point> obstacles,
                       double k_o) {
  double shaping = 0.0;
  for (const Point& o : obstacles) shaping += distance(follower, o);
  return -distance(leader, follower) + k_o * shaping;
}

}  // namespace mpg::env
