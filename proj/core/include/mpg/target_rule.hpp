#pragma once

#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace mpg::rl {

enum class TargetKind { Mpg, Td3, Ddpg };

std::string_view to_string(TargetKind kind);
TargetKind parse_target_kind(std::string_view text);

/// Bootstrap target strategy. For the momentum rule, delta_last carries the
/// previous critic gap |q1' - q2'| per minibatch element between inner
/// iterations and is cleared whenever a new minibatch is drawn.
struct TargetRule {
  TargetKind kind = TargetKind::Mpg;
  Eigen::VectorXd delta_last;
  Eigen::VectorXd delta_adj;  // last adjustment applied (momentum rule only)

  void reset(Eigen::Index batch_size) {
    delta_last = Eigen::VectorXd::Zero(batch_size);
    delta_adj = Eigen::VectorXd::Zero(batch_size);
  }
};

/// y = r + gamma * (1 - done) * q, with q chosen by the rule:
///   Mpg:  max(q1', q2') - (delta_last + |q1' - q2'|) / 2, then delta_last <- |q1' - q2'|
///   Td3:  min(q1', q2')
///   Ddpg: q1'
/// Throws std::domain_error on non-finite critic values.
Eigen::VectorXd compute_target(TargetRule& rule, const Eigen::VectorXd& rewards,
                               const Eigen::VectorXd& dones, const Eigen::VectorXd& q1,
                               const Eigen::VectorXd& q2, double gamma);

}  // namespace mpg::rl
