#include "mpg/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace mpg::rl {
namespace {

std::vector<int> layer_sizes(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> sizes{in};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(out);
  return sizes;
}

Eigen::VectorXd clamp(Eigen::VectorXd v, double bound) {
  return v.cwiseMax(-bound).cwiseMin(bound);
}

}  // namespace

NoiseSchedule decay_noise(NoiseSchedule noise) {
  noise.v_explore = std::max(noise.lambda * noise.v_explore, noise.v_min);
  return noise;
}

void TrainerConfig::validate() const {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in [0, 1)");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (!(actor_lr > 0.0) || !(critic_lr > 0.0)) {
    throw std::invalid_argument("learning rates must be positive");
  }
  if (inner_iters < 1) throw std::invalid_argument("inner_iters must be >= 1");
  if (policy_delay < 1) throw std::invalid_argument("policy_delay must be >= 1");
  if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("tau must lie in (0, 1]");
  if (replay_capacity == 0) throw std::invalid_argument("replay_capacity must be positive");
  if (hidden.empty()) throw std::invalid_argument("at least one hidden layer is required");
  for (int h : hidden) {
    if (h <= 0) throw std::invalid_argument("hidden layer sizes must be positive");
  }
  if (!(noise.v_min >= 0.0) || !(noise.v_explore >= 0.0) || !(noise.v_train >= 0.0)) {
    throw std::invalid_argument("noise variances must be non-negative");
  }
  if (!(noise.lambda > 0.0 && noise.lambda <= 1.0)) {
    throw std::invalid_argument("noise decay must lie in (0, 1]");
  }
}

Eigen::MatrixXd critic_input(const Eigen::MatrixXd& states, const Eigen::MatrixXd& actions) {
  Eigen::MatrixXd x(states.rows() + actions.rows(), states.cols());
  x << states, actions;
  return x;
}

Eigen::VectorXd select_action(const nn::MlpParams& actor, double v_max,
                              const Eigen::VectorXd& state, const NoiseSchedule& noise,
                              Rng& rng) {
  Eigen::VectorXd a = nn::forward(actor, nn::ActivationSpec::actor(v_max), state);
  if (noise.v_explore > 0.0) {
    std::normal_distribution<double> n(0.0, std::sqrt(noise.v_explore));
    for (Eigen::Index i = 0; i < a.size(); ++i) a(i) += n(rng);
  }
  return clamp(std::move(a), v_max);
}

double critic_update(nn::MlpParams& critic1, nn::MlpParams& critic2, const Batch& batch,
                     const Eigen::VectorXd& y, double learning_rate) {
  const Eigen::MatrixXd x = critic_input(batch.states, batch.actions);
  const double n = static_cast<double>(batch.size());
  const auto spec = nn::ActivationSpec::critic();

  double total = 0.0;
  for (nn::MlpParams* critic : {&critic1, &critic2}) {
    const nn::ForwardCache cache = nn::forward_cached(*critic, spec, x);
    const Eigen::RowVectorXd residual = cache.output().row(0) - y.transpose();
    const double loss = residual.squaredNorm() / n;
    if (!std::isfinite(loss)) throw std::domain_error("critic loss is not finite");
    total += loss;
    const nn::MlpGrads g = nn::backward_cached(*critic, spec, cache, (2.0 / n) * residual);
    nn::adam_step(*critic, g, learning_rate);
  }
  return total;
}

double actor_update(nn::MlpParams& actor, double v_max, const nn::MlpParams& critic1,
                    const Batch& batch, double learning_rate) {
  const auto actor_spec = nn::ActivationSpec::actor(v_max);
  const auto critic_spec = nn::ActivationSpec::critic();
  const Eigen::Index n = batch.size();
  const Eigen::Index obs_dim = batch.states.rows();

  const nn::ForwardCache actor_cache = nn::forward_cached(actor, actor_spec, batch.states);
  const nn::ForwardCache critic_cache =
      nn::forward_cached(critic1, critic_spec, critic_input(batch.states, actor_cache.output()));
  const double loss = -critic_cache.output().mean();
  if (!std::isfinite(loss)) throw std::domain_error("actor loss is not finite");

  const Eigen::MatrixXd dloss_dq =
      Eigen::MatrixXd::Constant(1, n, -1.0 / static_cast<double>(n));
  const nn::MlpGrads critic_grads =
      nn::backward_cached(critic1, critic_spec, critic_cache, dloss_dq);
  const Eigen::MatrixXd dloss_da = critic_grads.input.bottomRows(critic_grads.input.rows() - obs_dim);
  const nn::MlpGrads actor_grads = nn::backward_cached(actor, actor_spec, actor_cache, dloss_da);
  nn::adam_step(actor, actor_grads, learning_rate);
  return loss;
}

Trainer::Trainer(int observation_dim, int action_dim, double v_max, TrainerConfig config,
                 std::uint64_t seed)
    : config_(std::move(config)),
      obs_dim_(observation_dim),
      act_dim_(action_dim),
      v_max_(v_max),
      buffer_(config_.replay_capacity),
      noise_(config_.noise),
      explore_rng_(make_rng(seed, Stream::Exploration)),
      replay_rng_(make_rng(seed, Stream::Replay)),
      target_noise_rng_(make_rng(seed, Stream::TargetNoise)) {
  config_.validate();
  if (observation_dim <= 0 || action_dim <= 0) {
    throw std::invalid_argument("observation and action dimensions must be positive");
  }
  if (!(v_max > 0.0)) throw std::invalid_argument("v_max must be positive");
  actor_ = nn::init_params(layer_sizes(obs_dim_, config_.hidden, act_dim_),
                           derive_seed(seed, Stream::ActorInit));
  critic1_ = nn::init_params(layer_sizes(obs_dim_ + act_dim_, config_.hidden, 1),
                             derive_seed(seed, Stream::Critic1Init));
  critic2_ = nn::init_params(layer_sizes(obs_dim_ + act_dim_, config_.hidden, 1),
                             derive_seed(seed, Stream::Critic2Init));
  critic1_target_ = critic1_;
  critic2_target_ = critic2_;
  rule_.kind = config_.rule;
}

Eigen::VectorXd Trainer::act(const Eigen::VectorXd& state) const {
  return clamp(nn::forward(actor_, nn::ActivationSpec::actor(v_max_), state), v_max_);
}

Eigen::VectorXd Trainer::explore(const Eigen::VectorXd& state) {
  return select_action(actor_, v_max_, state, noise_, explore_rng_);
}

UpdateStats Trainer::update(const Batch& batch) {
  UpdateStats stats;
  stats.performed = true;
  const auto actor_spec = nn::ActivationSpec::actor(v_max_);
  const auto critic_spec = nn::ActivationSpec::critic();
  const double sigma = std::sqrt(noise_.v_train);
  std::normal_distribution<double> gauss(0.0, 1.0);

  rule_.reset(batch.size());
  for (int i = 1; i <= config_.inner_iters; ++i) {
    // a' = pi(s') + clip(N(0, v_train)), kept inside the action bound.
    Eigen::MatrixXd next_actions = nn::forward_batch(actor_, actor_spec, batch.next_states);
    for (Eigen::Index c = 0; c < next_actions.cols(); ++c) {
      for (Eigen::Index r = 0; r < next_actions.rows(); ++r) {
        const double eps = std::clamp(sigma * gauss(target_noise_rng_), -config_.target_noise_clip,
                                      config_.target_noise_clip);
        next_actions(r, c) = std::clamp(next_actions(r, c) + eps, -v_max_, v_max_);
      }
    }
    const Eigen::MatrixXd next_input = critic_input(batch.next_states, next_actions);
    const Eigen::VectorXd q1 =
        nn::forward_batch(critic1_target_, critic_spec, next_input).row(0).transpose();
    const Eigen::VectorXd q2 =
        nn::forward_batch(critic2_target_, critic_spec, next_input).row(0).transpose();
    const Eigen::VectorXd y =
        compute_target(rule_, batch.rewards, batch.dones, q1, q2, config_.gamma);

    stats.q1_mean = q1.mean();
    stats.q2_mean = q2.mean();
    stats.delta_adj_mean = rule_.kind == TargetKind::Mpg ? rule_.delta_adj.mean() : 0.0;
    stats.loss_critic = critic_update(critic1_, critic2_, batch, y, config_.critic_lr);

    if (i % config_.policy_delay == 0) {
      stats.loss_actor = actor_update(actor_, v_max_, critic1_, batch, config_.actor_lr);
      nn::soft_update(critic1_, critic1_target_, config_.tau);
      nn::soft_update(critic2_, critic2_target_, config_.tau);
    }
  }
  return stats;
}

EpisodeSummary Trainer::train_episode(env::Environment& env, int episode_index, int max_steps,
                                      const MetricsSink& sink) {
  if (env.observation_dim() != obs_dim_ || env.action_dim() != act_dim_) {
    throw std::invalid_argument("environment dimensions do not match the trainer");
  }
  EpisodeSummary summary;
  Eigen::VectorXd state = env.reset();
  const auto batch_size = static_cast<std::size_t>(config_.batch_size);

  for (int t = 1; t <= max_steps; ++t) {
    const Eigen::VectorXd action = explore(state);
    noise_ = decay_noise(noise_);
    const env::StepResult step = env.step(action);
    buffer_.push({state, action, step.observation, step.reward, step.terminal});

    UpdateStats stats;
    if (buffer_.size() >= batch_size) {
      stats = update(buffer_.sample(batch_size, replay_rng_));
    }

    summary.total_reward += step.reward;
    summary.steps = t;
    if (sink) {
      sink(StepMetrics{episode_index, t, step.reward, stats.q1_mean, stats.q2_mean,
                       stats.delta_adj_mean, noise_.v_explore, stats.loss_critic,
                       stats.loss_actor});
    }
    state = step.observation;
    if (step.done()) {
      summary.terminated = step.terminal || t < max_steps;
      break;
    }
  }
  summary.final_v_explore = noise_.v_explore;
  return summary;
}

}  // namespace mpg::rl
