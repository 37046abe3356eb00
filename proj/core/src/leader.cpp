#include "mpg/leader.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace mpg::env {
namespace {

// Square perimeter, counter-clockwise from (h, 0): up, left, down, right, up.
Point square_point(double h, double s) {
  const double perimeter = 8.0 * h;
  s = std::fmod(s, perimeter);
  if (s < 0) s += perimeter;
  if (s < h) return {h, s};
  s -= h;
  if (s < 2 * h) return {h - s, h};
  s -= 2 * h;
  if (s < 2 * h) return {-h, h - s};
  s -= 2 * h;
  if (s < 2 * h) return {-h + s, -h};
  s -= 2 * h;
  return {h, -h + s};
}

Point square_direction(double h, double s) {
  const double perimeter = 8.0 * h;
  s = std::fmod(s, perimeter);
  if (s < 0) s += perimeter;
  if (s < h) return {0, 1};
  if (s < 3 * h) return {-1, 0};
  if (s < 5 * h) return {0, -1};
  if (s < 7 * h) return {1, 0};
  return {0, 1};
}

double line_length(const LeaderPath& p) { return distance(p.line_from, p.line_to); }

}  // namespace

std::string_view to_string(LeaderKind kind) {
  switch (kind) {
    case LeaderKind::Circle: return "circle";
    case LeaderKind::Square: return "square";
    case LeaderKind::Random: return "random";
    case LeaderKind::Line: return "line";
  }
  return "?";
}

LeaderKind parse_leader_kind(std::string_view text) {
  if (text == "circle") return LeaderKind::Circle;
  if (text == "square") return LeaderKind::Square;
  if (text == "random") return LeaderKind::Random;
  if (text == "line") return LeaderKind::Line;
  throw std::invalid_argument("unknown leader kind '" + std::string(text) +
                              "' (circle|square|random|line)");
}

Point path_position(LeaderKind kind, const LeaderPath& path, double t) {
  switch (kind) {
    case LeaderKind::Circle: {
      const double w = path.circle_speed / path.circle_radius;
      return {path.circle_radius * std::cos(w * t), path.circle_radius * std::sin(w * t)};
    }
    case LeaderKind::Square:
      return square_point(path.square_half_side, path.square_speed * t);
    case LeaderKind::Line: {
      const double len = line_length(path);
      const double s = std::min(path.line_speed * t, len);
      return path.line_from + (s / len) * (path.line_to - path.line_from);
    }
    case LeaderKind::Random:
      break;
  }
  throw std::invalid_argument("random leader has no closed-form path");
}

ControlInput leader_trajectory(LeaderKind kind, const LeaderPath& path, double t, Rng& rng) {
  switch (kind) {
    case LeaderKind::Circle: {
      const double w = path.circle_speed / path.circle_radius;
      return {-path.circle_speed * std::sin(w * t), path.circle_speed * std::cos(w * t)};
    }
    case LeaderKind::Square: {
      const Point d = square_direction(path.square_half_side, path.square_speed * t);
      return {path.square_speed * d.x, path.square_speed * d.y};
    }
    case LeaderKind::Line: {
      const double len = line_length(path);
      if (path.line_speed * t >= len) return {0.0, 0.0};
      const Point d = (1.0 / len) * (path.line_to - path.line_from);
      return {path.line_speed * d.x, path.line_speed * d.y};
    }
    case LeaderKind::Random: {
      std::normal_distribution<double> n(0.0, 1.0);
      const double vx = n(rng);
      const double vy = n(rng);
      return {std::clamp(vx, kLeaderLimits.v_min, kLeaderLimits.v_max),
              std::clamp(vy, kLeaderLimits.v_min, kLeaderLimits.v_max)};
    }
  }
  return {};
}

Leader::Leader(LeaderKind kind, LeaderPath path, AgentLimits limits)
    : kind_(kind), path_(path), limits_(limits) {
  state_.role = Role::Leader;
}

void Leader::reset(Rng& rng) {
  time_ = 0.0;
  state_ = AgentState{};
  state_.role = Role::Leader;
  if (kind_ == LeaderKind::Random) {
    std::uniform_real_distribution<double> u(-path_.random_start_half, path_.random_start_half);
    state_.x = u(rng);
    state_.y = u(rng);
  } else {
    const Point p = path_position(kind_, path_, 0.0);
    state_.x = p.x;
    state_.y = p.y;
    Rng unused{0};
    const ControlInput v = leader_trajectory(kind_, path_, 0.0, unused);
    if (std::hypot(v.ax, v.ay) > 1e-9) state_.theta = std::atan2(v.ay, v.ax);
  }
}

void Leader::advance(double dt, Rng& rng) {
  if (kind_ == LeaderKind::Random) {
    const ControlInput v = leader_trajectory(kind_, path_, time_, rng);
    state_ = integrate_step(state_, v, dt);
    state_.x = std::clamp(state_.x, limits_.pos_min, limits_.pos_max);
    state_.y = std::clamp(state_.y, limits_.pos_min, limits_.pos_max);
  } else {
    const Point before = state_.position();
    const Point after = path_position(kind_, path_, time_ + dt);
    const Point d = after - before;
    state_.x = after.x;
    state_.y = after.y;
    if (norm(d) > 1e-12) state_.theta = std::atan2(d.y, d.x);
  }
  time_ += dt;
}

}  // namespace mpg::env
