#include <stdexcept>

#include "mpg/kinematics.hpp"

namespace mpg::env {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::Leader: return "leader";
    case Role::Follower: return "follower";
    case Role::Obstacle: return "obstacle";
  }
  return "?";
}

WheelCommand transform_to_wheel(const AgentState& state, const ControlInput& u, double d) {
  if (!(d > 0.0)) throw std::domain_error("reference offset d must be positive");
  const double c = std::cos(state.theta);
  const double s = std::sin(state.theta);
  return {c * u.ax + s * u.ay, -(s * u.ax + c * u.ay) / d};
}

AgentState integrate_step(const AgentState& state, const ControlInput& u, double dt) {
  AgentState next = state;
  next.x += u.ax * dt;
  next.y += u.ay * dt;
  if (std::hypot(u.ax, u.ay) > 1e-9) next.theta = std::atan2(u.ay, u.ax);
  return next;
}

}  // namespace mpg::env
