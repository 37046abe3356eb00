#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mpg::nn {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class OutputActivation {
  Identity,    // critics
  ScaledTanh,  // actor: scale * tanh(z), bounded to [-scale, scale]
};

/// Hidden layers are always rectified; only the output layer varies.
struct ActivationSpec {
  OutputActivation output = OutputActivation::Identity;
  double scale = 1.0;

  static ActivationSpec critic() { return {OutputActivation::Identity, 1.0}; }
  static ActivationSpec actor(double v_max) { return {OutputActivation::ScaledTanh, v_max}; }
};

/// Dense network parameters together with the Adam moment estimates.
///
/// weights[k] is (layer_sizes[k+1] x layer_sizes[k]) and biases[k] has
/// layer_sizes[k+1] entries. Moment buffers mirror those shapes exactly.
struct MlpParams {
  std::vector<int> layer_sizes;
  std::vector<Matrix> weights;
  std::vector<Vector> biases;
  std::vector<Matrix> adam_m_w, adam_v_w;
  std::vector<Vector> adam_m_b, adam_v_b;
  std::int64_t adam_t = 0;

  std::size_t num_layers() const { return weights.size(); }
  int input_size() const { return layer_sizes.front(); }
  int output_size() const { return layer_sizes.back(); }
  std::size_t parameter_count() const;
};

/// Gradient of a scalar loss with respect to every weight and bias, plus the
/// gradient with respect to the network input (one column per sample).
struct MlpGrads {
  std::vector<Matrix> weights;
  std::vector<Vector> biases;
  Matrix input;
};

/// Intermediate values recorded by a forward pass so that the backward pass
/// does not recompute them. activations[0] is the input batch.
struct ForwardCache {
  std::vector<Matrix> activations;
  std::vector<Matrix> preactivations;
  const Matrix& output() const { return activations.back(); }
};

/// Allocates a network with weights uniform in +-1/sqrt(fan_in), zero biases
/// and zero Adam state. Identical seeds give bit-identical parameters.
MlpParams init_params(std::span<const int> layer_sizes, std::uint64_t seed);

Vector forward(const MlpParams& params, const ActivationSpec& spec, const Vector& input);

/// Batched forward pass; each column of `inputs` is one sample.
Matrix forward_batch(const MlpParams& params, const ActivationSpec& spec, const Matrix& inputs);

ForwardCache forward_cached(const MlpParams& params, const ActivationSpec& spec,
                            const Matrix& inputs);

MlpGrads backward(const MlpParams& params, const ActivationSpec& spec, const Vector& input,
                  const Vector& output_grad);

/// Gradients summed over the batch for the loss whose derivative with respect
/// to the network output is `output_grad` (same shape as the cached output).
MlpGrads backward_cached(const MlpParams& params, const ActivationSpec& spec,
                         const ForwardCache& cache, const Matrix& output_grad);

MlpGrads zero_grads(const MlpParams& params);

struct AdamConstants {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Bias-corrected Adam update applied in place. Throws std::domain_error and
/// leaves `params` untouched if any gradient entry is non-finite.
void adam_step(MlpParams& params, const MlpGrads& grads, double learning_rate,
               const AdamConstants& constants = {});

/// target <- tau * main + (1 - tau) * target for every weight and bias.
void soft_update(const MlpParams& main, MlpParams& target, double tau);

bool same_shape(const MlpParams& a, const MlpParams& b);
bool all_finite(const MlpParams& params);

// Checkpoint layout (little-endian):
//   8 bytes   magic "MPGNET01"
//   uint32    number of entries in layer_sizes
//   uint32[]  layer_sizes
//   per layer k: float64 weights[k] in row-major order, then float64 biases[k]
// Adam state is not stored; loading yields zero moments.
void save_checkpoint(const MlpParams& params, const std::filesystem::path& path);
MlpParams load_checkpoint(const std::filesystem::path& path);

std::vector<char> serialize(const MlpParams& params);
MlpParams deserialize(std::span<const char> bytes);

}  // namespace mpg::nn
