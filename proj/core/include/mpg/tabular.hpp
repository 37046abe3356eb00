#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "mpg/seeding.hpp"

namespace mpg::tabular {

using QTable = Eigen::MatrixXd;  // n_states x n_actions

/// Finite MDP with mean rewards r(s, a) perturbed by uniform noise in
/// [-reward_noise, reward_noise] on every sample.
struct FiniteMdp {
  int n_states = 0;
  int n_actions = 0;
  std::vector<double> transition;  // P(s' | s, a) at [(s * n_actions + a) * n_states + s']
  QTable reward;
  double reward_noise = 0.0;
  double gamma = 0.9;

  double p(int s, int a, int next) const {
    return transition[static_cast<std::size_t>((s * n_actions + a) * n_states + next)];
  }
  void validate() const;
};

/// States in [2, max_states], actions in [1, max_actions], Dirichlet-like
/// kernels from normalized uniforms, mean rewards uniform in [0, 1].
FiniteMdp random_mdp(Rng& rng, int max_states = 10, int max_actions = 4, double gamma = 0.9,
                     double reward_noise = 0.1);

struct QTablePair {
  QTable q;
  QTable q_prime;
  /// |Q - Q'| at the bootstrap pair of the previous update.
  double delta_last = 0.0;
};

enum class UpdateMode {
  SharedTarget,  // both tables move toward the same target at (s, a)
  Alternating,   // a coin flip picks the table that is written
};

enum class WriteTarget { Both, Primary, Secondary };

/// Momentum update at (s, a) after observing (r, s'):
///   a*    = argmax_b T(s', b) for the table T being written (Q when both)
///   gap   = |Q(s', a*) - Q'(s', a*)|
///   adj   = (gap + delta_last) / 2
///   y     = r + gamma * (max(Q(s', a*), Q'(s', a*)) - adj)
///   T(s, a) <- (1 - alpha) T(s, a) + alpha y ;  delta_last <- gap
void mpg_tabular_update(QTablePair& tables, int s, int a, double r, int next, double alpha,
                        double gamma, WriteTarget write = WriteTarget::Both);

/// Iterates the Bellman optimality operator until the sup-norm residual falls
/// below tol (1 - gamma) / gamma, which bounds ||Q - Q*|| by tol.
QTable value_iteration(const FiniteMdp& mdp, double tol);

double bellman_residual(const FiniteMdp& mdp, const QTable& q);

struct ConvergenceConfig {
  std::int64_t n_steps = 200000;
  UpdateMode mode = UpdateMode::SharedTarget;
  /// alpha = 1 / (1 + n)^exponent with n counting updates of (s, a) including
  /// the current one, so the first step uses 1/2 and 0 < alpha < 1 holds.
  double lr_exponent = 1.0;
  /// Q'_0 = Q_0 + U(0, init_spread) entrywise; 0 gives symmetric tables.
  double init_spread = 1.0;
  std::int64_t trace_every = 1000;
  double oracle_tol = 1e-10;
};

struct TracePoint {
  std::int64_t step = 0;
  double sup_error = 0.0;
  double q_minus_qprime_sup = 0.0;
};

struct ConvergenceResult {
  std::vector<TracePoint> trace;
  QTable q_star;
  QTablePair tables;
  double terminal_error = 0.0;
  double terminal_gap = 0.0;
};

/// Uniformly samples (s, a), draws s' and a noisy reward, applies the
/// momentum update and records ||Q - Q*|| against the value-iteration oracle.
ConvergenceResult convergence_experiment(const FiniteMdp& mdp, const ConvergenceConfig& config,
                                         std::uint64_t seed);

struct SuiteResult {
  std::vector<FiniteMdp> mdps;
  std::vector<ConvergenceResult> runs;
  double median_error = 0.0;
  double max_terminal_gap = 0.0;
};

/// Runs convergence_experiment on `n_mdps` random MDPs drawn from `seed`.
SuiteResult convergence_suite(std::uint64_t seed, int n_mdps, const ConvergenceConfig& config);

void write_trace_csv(std::ostream& out, const std::vector<TracePoint>& trace);

}  // namespace mpg::tabular
