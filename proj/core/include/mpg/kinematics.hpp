#pragma once

#include <cmath>
#include <string_view>

namespace mpg::env {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
  friend bool operator==(Point, Point) = default;
};

inline double norm(Point p) { return std::hypot(p.x, p.y); }
inline double distance(Point a, Point b) { return norm(a - b); }

enum class Role { Leader, Follower, Obstacle };
std::string_view to_string(Role role);

/// Pose of one agent. (x, y) is the linearized reference point the
/// controller commands directly.
struct AgentState {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  Role role = Role::Follower;

  Point position() const { return {x, y}; }
};

/// Position box and per-axis velocity limits for one role.
struct AgentLimits {
  double pos_min;
  double pos_max;
  double v_min;
  double v_max;

  friend bool operator==(const AgentLimits&, const AgentLimits&) = default;

  bool contains(Point p) const {
    return p.x >= pos_min && p.x <= pos_max && p.y >= pos_min && p.y <= pos_max;
  }
};

inline constexpr AgentLimits kLeaderLimits{-1.0, 1.0, -0.7, 0.7};
inline constexpr AgentLimits kFollowerLimits{-2.0, 2.0, -0.7, 0.7};
inline constexpr double kReferenceOffset = 0.15;

/// Commanded reference-point velocity (m/s).
struct ControlInput {
  double ax = 0.0;
  double ay = 0.0;
};

/// Unicycle linear and angular velocity.
struct WheelCommand {
  double v = 0.0;
  double w = 0.0;
};

/// Maps reference-point velocities to unicycle commands:
///   v =  cos(theta) ax + sin(theta) ay
///   w = -(sin(theta) ax + cos(theta) ay) / d
/// Throws std::domain_error when d is not positive.
WheelCommand transform_to_wheel(const AgentState& state, const ControlInput& u,
                                double d = kReferenceOffset);

/// Euler step of the reference point. Heading follows the direction of motion
/// and is left alone when the agent is (numerically) at rest.
AgentState integrate_step(const AgentState& state, const ControlInput& u, double dt);

}  // namespace mpg::env
