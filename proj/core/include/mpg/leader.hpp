#pragma once

#include <string_view>

#include "mpg/kinematics.hpp"
#include "mpg/seeding.hpp"

namespace mpg::env {

enum class LeaderKind { Circle, Square, Random, Line };

std::string_view to_string(LeaderKind kind);
LeaderKind parse_leader_kind(std::string_view text);

struct LeaderPath {
  double circle_radius = 0.8;
  double circle_speed = 0.4;
  double square_half_side = 0.8;
  double square_speed = 0.4;
  Point line_from{-1.0, -1.0};
  Point line_to{1.0, 1.0};
  /// Chosen so the diagonal takes exactly one 200-step, dt = 0.05 episode.
  double line_speed = 2.0 * 1.4142135623730951 / 10.0;
  /// Random leaders start uniformly inside +-this box.
  double random_start_half = 0.8;

  friend bool operator==(const LeaderPath&, const LeaderPath&) = default;
};

/// Closed-form position of the deterministic paths at time t.
/// Circle: counter-clockwise from (r, 0). Square: counter-clockwise along the
/// perimeter starting at (h, 0). Line: from line_from toward line_to, then at rest.
Point path_position(LeaderKind kind, const LeaderPath& path, double t);

/// Leader command at time t. Deterministic kinds return the path tangent;
/// Random draws N(0, 1) per axis and clamps to the leader velocity limit.
ControlInput leader_trajectory(LeaderKind kind, const LeaderPath& path, double t, Rng& rng);

/// Stateful leader: advances one step at a time and keeps its pose inside
/// the leader bounds.
class Leader {
 public:
  Leader(LeaderKind kind, LeaderPath path, AgentLimits limits = kLeaderLimits);

  void reset(Rng& rng);
  void advance(double dt, Rng& rng);
  /// Moves the leader without touching its clock.
  void place(Point p) {
    state_.x = p.x;
    state_.y = p.y;
  }

  const AgentState& state() const { return state_; }
  Point position() const { return state_.position(); }
  double time() const { return time_; }
  LeaderKind kind() const { return kind_; }

 private:
  LeaderKind kind_;
  LeaderPath path_;
  AgentLimits limits_;
  AgentState state_;
  double time_ = 0.0;
};

}  // namespace mpg::env
