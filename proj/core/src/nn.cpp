#include "mpg/nn.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "mpg/seeding.hpp"

namespace mpg::nn {
namespace {

void check_layer_sizes(std::span<const int> sizes) {
  if (sizes.size() < 2) {
    throw std::invalid_argument("network needs at least an input and an output layer");
  }
  for (int s : sizes) {
    if (s <= 0) throw std::invalid_argument("layer sizes must be positive");
  }
}

Matrix activate_output(const ActivationSpec& spec, const Matrix& z) {
  if (spec.output == OutputActivation::Identity) return z;
  return spec.scale * z.array().tanh();
}

}  // namespace

std::size_t MlpParams::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    n += static_cast<std::size_t>(weights[k].size() + biases[k].size());
  }
  return n;
}

MlpParams init_params(std::span<const int> layer_sizes, std::uint64_t seed) {
  check_layer_sizes(layer_sizes);
  MlpParams p;
  p.layer_sizes.assign(layer_sizes.begin(), layer_sizes.end());
  Rng rng{seed};
  for (std::size_t k = 0; k + 1 < layer_sizes.size(); ++k) {
    const int fan_in = layer_sizes[k];
    const int fan_out = layer_sizes[k + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    Matrix w(fan_out, fan_in);
    // Row-major fill order keeps the draw sequence independent of Eigen's storage.
    for (int r = 0; r < fan_out; ++r) {
      for (int c = 0; c < fan_in; ++c) w(r, c) = dist(rng);
    }
    p.weights.push_back(std::move(w));
    p.biases.push_back(Vector::Zero(fan_out));
    p.adam_m_w.push_back(Matrix::Zero(fan_out, fan_in));
    p.adam_v_w.push_back(Matrix::Zero(fan_out, fan_in));
    p.adam_m_b.push_back(Vector::Zero(fan_out));
    p.adam_v_b.push_back(Vector::Zero(fan_out));
  }
  return p;
}

ForwardCache forward_cached(const MlpParams& params, const ActivationSpec& spec,
                            const Matrix& inputs) {
  if (inputs.rows() != params.input_size()) {
    throw std::invalid_argument("forward: input has " + std::to_string(inputs.rows()) +
                                " rows, network expects " + std::to_string(params.input_size()));
  }
  const std::size_t L = params.num_layers();
  ForwardCache cache;
  cache.activations.reserve(L + 1);
  cache.preactivations.reserve(L);
  cache.activations.push_back(inputs);
  for (std::size_t k = 0; k < L; ++k) {
    Matrix z = params.weights[k] * cache.activations.back();
    z.colwise() += params.biases[k];
    if (k + 1 < L) {
      cache.activations.push_back(z.cwiseMax(0.0));
    } else {
      cache.activations.push_back(activate_output(spec, z));
    }
    cache.preactivations.push_back(std::move(z));
  }
  return cache;
}

Matrix forward_batch(const MlpParams& params, const ActivationSpec& spec, const Matrix& inputs) {
  if (inputs.rows() != params.input_size()) {
    throw std::invalid_argument("forward: input dimension mismatch");
  }
  const std::size_t L = params.num_layers();
  Matrix a = inputs;
  for (std::size_t k = 0; k < L; ++k) {
    Matrix z = params.weights[k] * a;
    z.colwise() += params.biases[k];
    a = (k + 1 < L) ? Matrix(z.cwiseMax(0.0)) : activate_output(spec, z);
  }
  return a;
}

Vector forward(const MlpParams& params, const ActivationSpec& spec, const Vector& input) {
  return forward_batch(params, spec, input);
}

MlpGrads backward_cached(const MlpParams& params, const ActivationSpec& spec,
                         const ForwardCache& cache, const Matrix& output_grad) {
  const std::size_t L = params.num_layers();
  if (output_grad.rows() != params.output_size() ||
      output_grad.cols() != cache.output().cols()) {
    throw std::invalid_argument("backward: output gradient dimension mismatch");
  }
  MlpGrads g;
  g.weights.resize(L);
  g.biases.resize(L);

  // delta holds dLoss/dz for the current layer.
  Matrix delta;
  if (spec.output == OutputActivation::Identity) {
    delta = output_grad;
  } else {
    const auto t = cache.preactivations.back().array().tanh();
    delta = (output_grad.array() * spec.scale * (1.0 - t.square())).matrix();
  }
  for (std::size_t k = L; k-- > 0;) {
    g.weights[k].noalias() = delta * cache.activations[k].transpose();
    g.biases[k] = delta.rowwise().sum();
    Matrix upstream = params.weights[k].transpose() * delta;
    if (k > 0) {
      delta = (upstream.array() * (cache.preactivations[k - 1].array() > 0.0).cast<double>())
                  .matrix();
    } else {
      g.input = std::move(upstream);
    }
  }
  return g;
}

MlpGrads backward(const MlpParams& params, const ActivationSpec& spec, const Vector& input,
                  const Vector& output_grad) {
  if (output_grad.size() != params.output_size()) {
    throw std::invalid_argument("backward: output gradient dimension mismatch");
  }
  const ForwardCache cache = forward_cached(params, spec, input);
  return backward_cached(params, spec, cache, output_grad);
}

MlpGrads zero_grads(const MlpParams& params) {
  MlpGrads g;
  for (std::size_t k = 0; k < params.num_layers(); ++k) {
    g.weights.push_back(Matrix::Zero(params.weights[k].rows(), params.weights[k].cols()));
    g.biases.push_back(Vector::Zero(params.biases[k].size()));
  }
  g.input = Matrix::Zero(params.input_size(), 1);
  return g;
}

void adam_step(MlpParams& params, const MlpGrads& grads, double learning_rate,
               const AdamConstants& c) {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");
  if (grads.weights.size() != params.num_layers() || grads.biases.size() != params.num_layers()) {
    throw std::invalid_argument("adam_step: gradient layer count mismatch");
  }
  for (std::size_t k = 0; k < params.num_layers(); ++k) {
    if (grads.weights[k].rows() != params.weights[k].rows() ||
        grads.weights[k].cols() != params.weights[k].cols() ||
        grads.biases[k].size() != params.biases[k].size()) {
      throw std::invalid_argument("adam_step: gradient shape mismatch");
    }
    if (!grads.weights[k].allFinite() || !grads.biases[k].allFinite()) {
      throw std::domain_error("adam_step: non-finite gradient");
    }
  }

  params.adam_t += 1;
  const double t = static_cast<double>(params.adam_t);
  const double correction1 = 1.0 - std::pow(c.beta1, t);
  const double correction2 = 1.0 - std::pow(c.beta2, t);
  const double step = learning_rate / correction1;
  const double inv_sqrt_c2 = 1.0 / std::sqrt(correction2);

  auto update = [&](auto& p, auto& m, auto& v, const auto& g) {
    m = c.beta1 * m + (1.0 - c.beta1) * g;
    v = c.beta2 * v + (1.0 - c.beta2) * g.cwiseProduct(g);
    p.array() -= step * m.array() / ((v.array().sqrt() * inv_sqrt_c2) + c.epsilon);
  };
  for (std::size_t k = 0; k < params.num_layers(); ++k) {
    update(params.weights[k], params.adam_m_w[k], params.adam_v_w[k], grads.weights[k]);
    update(params.biases[k], params.adam_m_b[k], params.adam_v_b[k], grads.biases[k]);
  }
}

bool same_shape(const MlpParams& a, const MlpParams& b) {
  return a.layer_sizes == b.layer_sizes && a.weights.size() == b.weights.size();
}

void soft_update(const MlpParams& main, MlpParams& target, double tau) {
  if (!same_shape(main, target)) throw std::invalid_argument("soft_update: shape mismatch");
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("soft_update: tau outside [0, 1]");
  if (tau == 1.0) {
    target.weights = main.weights;
    target.biases = main.biases;
    return;
  }
  for (std::size_t k = 0; k < main.num_layers(); ++k) {
    target.weights[k] = tau * main.weights[k] + (1.0 - tau) * target.weights[k];
    target.biases[k] = tau * main.biases[k] + (1.0 - tau) * target.biases[k];
  }
}

bool all_finite(const MlpParams& params) {
  for (std::size_t k = 0; k < params.num_layers(); ++k) {
    if (!params.weights[k].allFinite() || !params.biases[k].allFinite()) return false;
  }
  return true;
}

}  // namespace mpg::nn
