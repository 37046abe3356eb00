#include "mpg/tabular.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <stdexcept>

namespace mpg::tabular {
namespace {

void check_index(const QTablePair& t, int s, int a, int next) {
  const auto rows = t.q.rows();
  const auto cols = t.q.cols();
  if (s < 0 || s >= rows || next < 0 || next >= rows || a < 0 || a >= cols) {
    throw std::out_of_range("tabular update: state or action index out of range");
  }
}

int argmax_row(const QTable& q, int s) {
  Eigen::Index best = 0;
  q.row(s).maxCoeff(&best);
  return static_cast<int>(best);
}

}  // namespace

void FiniteMdp::validate() const {
  if (n_states < 1 || n_actions < 1) throw std::invalid_argument("MDP needs states and actions");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in [0, 1)");
  if (transition.size() != static_cast<std::size_t>(n_states * n_actions * n_states)) {
    throw std::invalid_argument("transition table has the wrong size");
  }
  if (reward.rows() != n_states || reward.cols() != n_actions || !reward.allFinite()) {
    throw std::invalid_argument("reward table malformed");
  }
  for (int s = 0; s < n_states; ++s) {
    for (int a = 0; a < n_actions; ++a) {
      double total = 0.0;
      for (int n = 0; n < n_states; ++n) {
        if (p(s, a, n) < 0.0) throw std::invalid_argument("negative transition probability");
        total += p(s, a, n);
      }
      if (std::abs(total - 1.0) > 1e-12) {
        throw std::invalid_argument("transition row does not sum to 1");
      }
    }
  }
}

FiniteMdp random_mdp(Rng& rng, int max_states, int max_actions, double gamma,
                     double reward_noise) {
  std::uniform_int_distribution<int> ns(2, max_states);
  std::uniform_int_distribution<int> na(1, max_actions);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  FiniteMdp m;
  m.n_states = ns(rng);
  m.n_actions = na(rng);
  m.gamma = gamma;
  m.reward_noise = reward_noise;
  m.transition.resize(static_cast<std::size_t>(m.n_states * m.n_actions * m.n_states));
  for (int s = 0; s < m.n_states; ++s) {
    for (int a = 0; a < m.n_actions; ++a) {
      double total = 0.0;
      const std::size_t base = static_cast<std::size_t>((s * m.n_actions + a) * m.n_states);
      for (int n = 0; n < m.n_states; ++n) total += (m.transition[base + n] = u(rng));
      for (int n = 0; n < m.n_states; ++n) m.transition[base + n] /= total;
    }
  }
  m.reward.resize(m.n_states, m.n_actions);
  for (int s = 0; s < m.n_states; ++s) {
    for (int a = 0; a < m.n_actions; ++a) m.reward(s, a) = u(rng);
  }
  return m;
}

void mpg_tabular_update(QTablePair& t, int s, int a, double r, int next, double alpha,
                        double gamma, WriteTarget write) {
  check_index(t, s, a, next);
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");

  const QTable& greedy = write == WriteTarget::Secondary ? t.q_prime : t.q;
  const int best = argmax_row(greedy, next);
  const double v1 = t.q(next, best);
  const double v2 = t.q_prime(next, best);
  const double gap = std::abs(v1 - v2);
  const double adj = 0.5 * (gap + t.delta_last);
  const double y = r + gamma * (std::max(v1, v2) - adj);

  if (write != WriteTarget::Secondary) t.q(s, a) = (1.0 - alpha) * t.q(s, a) + alpha * y;
  if (write != WriteTarget::Primary) {
    t.q_prime(s, a) = (1.0 - alpha) * t.q_prime(s, a) + alpha * y;
  }
  t.delta_last = gap;
}

double bellman_residual(const FiniteMdp& mdp, const QTable& q) {
  const Eigen::VectorXd v = q.rowwise().maxCoeff();
  double worst = 0.0;
  for (int s = 0; s < mdp.n_states; ++s) {
    for (int a = 0; a < mdp.n_actions; ++a) {
      double backup = mdp.reward(s, a);
      for (int n = 0; n < mdp.n_states; ++n) backup += mdp.gamma * mdp.p(s, a, n) * v(n);
      worst = std::max(worst, std::abs(backup - q(s, a)));
    }
  }
  return worst;
}

QTable value_iteration(const FiniteMdp& mdp, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("value_iteration: tol must be positive");
  mdp.validate();
  QTable q = QTable::Zero(mdp.n_states, mdp.n_actions);
  const double threshold = mdp.gamma > 0.0 ? tol * (1.0 - mdp.gamma) / mdp.gamma : tol;
  for (;;) {
    const Eigen::VectorXd v = q.rowwise().maxCoeff();
    QTable next = mdp.reward;
    for (int s = 0; s < mdp.n_states; ++s) {
      for (int a = 0; a < mdp.n_actions; ++a) {
        for (int n = 0; n < mdp.n_states; ++n) next(s, a) += mdp.gamma * mdp.p(s, a, n) * v(n);
      }
    }
    const double change = (next - q).cwiseAbs().maxCoeff();
    q = std::move(next);
    // After the update the residual is at most gamma * change.
    if (mdp.gamma * change < threshold || change == 0.0) return q;
  }
}

ConvergenceResult convergence_experiment(const FiniteMdp& mdp, const ConvergenceConfig& config,
                                         std::uint64_t seed) {
  mdp.validate();
  if (config.n_steps < 0 || config.trace_every < 1) {
    throw std::invalid_argument("convergence_experiment: bad step counts");
  }
  Rng rng{seed};
  ConvergenceResult out;
  out.q_star = value_iteration(mdp, config.oracle_tol);

  out.tables.q = QTable::Zero(mdp.n_states, mdp.n_actions);
  out.tables.q_prime = out.tables.q;
  std::uniform_real_distribution<double> init(0.0, config.init_spread);
  if (config.init_spread > 0.0) {
    for (int s = 0; s < mdp.n_states; ++s) {
      for (int a = 0; a < mdp.n_actions; ++a) out.tables.q_prime(s, a) = init(rng);
    }
  }

  Eigen::MatrixXd visits = Eigen::MatrixXd::Zero(mdp.n_states, mdp.n_actions);
  std::uniform_int_distribution<int> pick_s(0, mdp.n_states - 1);
  std::uniform_int_distribution<int> pick_a(0, mdp.n_actions - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> noise(-mdp.reward_noise, mdp.reward_noise);
  std::bernoulli_distribution coin(0.5);

  auto record = [&](std::int64_t step) {
    out.trace.push_back({step, (out.tables.q - out.q_star).cwiseAbs().maxCoeff(),
                         (out.tables.q - out.tables.q_prime).cwiseAbs().maxCoeff()});
  };
  record(0);
  for (std::int64_t t = 1; t <= config.n_steps; ++t) {
    const int s = pick_s(rng);
    const int a = pick_a(rng);
    double u = unit(rng);
    int next = mdp.n_states - 1;
    for (int n = 0; n < mdp.n_states; ++n) {
      u -= mdp.p(s, a, n);
      if (u < 0.0) {
        next = n;
        break;
      }
    }
    const double r = mdp.reward(s, a) + (mdp.reward_noise > 0.0 ? noise(rng) : 0.0);
    visits(s, a) += 1.0;
    const double alpha = 1.0 / std::pow(1.0 + visits(s, a), config.lr_exponent);
    WriteTarget write = WriteTarget::Both;
    if (config.mode == UpdateMode::Alternating) {
      write = coin(rng) ? WriteTarget::Primary : WriteTarget::Secondary;
    }
    mpg_tabular_update(out.tables, s, a, r, next, alpha, mdp.gamma, write);
    if (t % config.trace_every == 0 || t == config.n_steps) record(t);
  }
  out.terminal_error = out.trace.back().sup_error;
  out.terminal_gap = out.trace.back().q_minus_qprime_sup;
  return out;
}

SuiteResult convergence_suite(std::uint64_t seed, int n_mdps, const ConvergenceConfig& config) {
  if (n_mdps < 1) throw std::invalid_argument("need at least one MDP");
  SuiteResult out;
  std::vector<double> errors;
  for (int i = 0; i < n_mdps; ++i) {
    Rng rng = make_rng(seed, Stream::Tabular, static_cast<std::uint64_t>(i));
    out.mdps.push_back(random_mdp(rng));
    out.runs.push_back(convergence_experiment(out.mdps.back(), config,
                                              derive_seed(seed, Stream::Tabular, 1000 + i)));
    errors.push_back(out.runs.back().terminal_error);
    out.max_terminal_gap = std::max(out.max_terminal_gap, out.runs.back().terminal_gap);
  }
  std::sort(errors.begin(), errors.end());
  const std::size_t n = errors.size();
  out.median_error = n % 2 ? errors[n / 2] : 0.5 * (errors[n / 2 - 1] + errors[n / 2]);
  return out;
}

void write_trace_csv(std::ostream& out, const std::vector<TracePoint>& trace) {
  out << "step,sup_error,q_minus_qprime_sup\n";
  out << std::setprecision(17);
  for (const auto& p : trace) {
    out << p.step << ',' << p.sup_error << ',' << p.q_minus_qprime_sup << '\n';
  }
}

}  // namespace mpg::tabular
