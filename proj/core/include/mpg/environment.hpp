#pragma once

#include <Eigen/Dense>

namespace mpg::env {

struct StepResult {
  Eigen::VectorXd observation;
  double reward = 0.0;
  /// Absorbing end (bound breach, collision, contact unless configured otherwise).
  /// Only terminal transitions cut the bootstrap.
  bool terminal = false;
  /// Episode ended without being absorbing: the step limit, or a
  /// non-absorbing early reset.
  bool truncated = false;

  bool done() const { return terminal || truncated; }
};

/// Minimal interface the trainer needs from a task.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual int observation_dim() const = 0;
  virtual int action_dim() const = 0;
  virtual double action_bound() const = 0;

  virtual Eigen::VectorXd reset() = 0;
  virtual StepResult step(const Eigen::VectorXd& action) = 0;
};

}  // namespace mpg::env
