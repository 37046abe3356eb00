#include "mpg/target_rule.hpp"

#include <stdexcept>

namespace mpg::rl {

std::string_view to_string(TargetKind kind) {
  switch (kind) {
    case TargetKind::Mpg: return "mpg";
    case TargetKind::Td3: return "td3";
    case TargetKind::Ddpg: return "ddpg";
  }
  return "?";
}

TargetKind parse_target_kind(std::string_view text) {
  if (text == "mpg" || text == "MPG") return TargetKind::Mpg;
  if (text == "td3" || text == "TD3") return TargetKind::Td3;
  if (text == "ddpg" || text == "DDPG") return TargetKind::Ddpg;
  throw std::invalid_argument("unknown algorithm '" + std::string(text) + "' (mpg|td3|ddpg)");
}

Eigen::VectorXd compute_target(TargetRule& rule, const Eigen::VectorXd& rewards,
                               const Eigen::VectorXd& dones, const Eigen::VectorXd& q1,
                               const Eigen::VectorXd& q2, double gamma) {
  const Eigen::Index n = rewards.size();
  if (dones.size() != n || q1.size() != n || q2.size() != n) {
    throw std::invalid_argument("compute_target: batch lengths differ");
  }
  if (!q1.allFinite() || !q2.allFinite()) {
    throw std::domain_error("compute_target: non-finite critic value (training diverged)");
  }
  const Eigen::ArrayXd keep = 1.0 - dones.array();

  switch (rule.kind) {
    case TargetKind::Mpg: {
      if (rule.delta_last.size() != n) rule.reset(n);
      const Eigen::ArrayXd gap = (q1 - q2).array().abs();
      rule.delta_adj = (0.5 * (rule.delta_last.array() + gap)).matrix();
      const Eigen::ArrayXd q = q1.array().max(q2.array()) - rule.delta_adj.array();
      rule.delta_last = gap.matrix();
      return (rewards.array() + gamma * keep * q).matrix();
    }
    case TargetKind::Td3:
      return (rewards.array() + gamma * keep * q1.array().min(q2.array())).matrix();
    case TargetKind::Ddpg:
      return (rewards.array() + gamma * keep * q1.array()).matrix();
  }
  throw std::logic_error("compute_target: unhandled rule");
}

}  // namespace mpg::rl
