#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "mpg/seeding.hpp"

namespace mpg::rl {

struct Transition {
  Eigen::VectorXd state;
  Eigen::VectorXd action;
  Eigen::VectorXd next_state;
  double reward = 0.0;
  bool done = false;
};

/// Column-stacked minibatch; column j of each matrix is sample j.
struct Batch {
  Eigen::MatrixXd states;
  Eigen::MatrixXd actions;
  Eigen::MatrixXd next_states;
  Eigen::VectorXd rewards;
  Eigen::VectorXd dones;  // 1.0 for terminal transitions, else 0.0

  Eigen::Index size() const { return rewards.size(); }
};

/// Fixed-capacity ring of transitions; the oldest entry is overwritten first.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Transition t);
  std::size_t size() const { return storage_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return storage_.empty(); }
  const Transition& at(std::size_t i) const { return storage_.at(i); }

  /// Uniform sampling with replacement. Requires a non-empty buffer.
  std::vector<std::size_t> sample_indices(std::size_t batch_size, Rng& rng) const;
  Batch sample(std::size_t batch_size, Rng& rng) const;
  Batch gather(const std::vector<std::size_t>& indices) const;

 private:
  std::size_t capacity_;
  std::size_t next_ = 0;
  std::vector<Transition> storage_;
};

}  // namespace mpg::rl
