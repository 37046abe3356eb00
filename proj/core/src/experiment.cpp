#include "mpg/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <map>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "mpg/csv.hpp"
#include "mpg/rewards.hpp"
#include "mpg/seeding.hpp"

namespace mpg::harness {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::uint64_t leader_index(env::LeaderKind k) { return static_cast<std::uint64_t>(k); }

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + p.string() + " for writing");
  return out;
}

void write_rows(std::ostream& out, int episode, int step, const std::vector<env::AgentState>& agents,
                double reward) {
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const auto& a = agents[i];
    out << episode << ',' << step << ',' << i << ',' << env::to_string(a.role) << ','
        << format_double(a.x) << ',' << format_double(a.y) << ',' << format_double(a.theta) << ','
        << format_double(reward) << '\n';
  }
}

/// Running sums shared by the live evaluation and the CSV recomputation so
/// both paths reduce identically.
struct Accumulator {
  EvalMetrics m;
  std::vector<double> slot_sums;
  double distance_sum = 0.0;
  double reward_sum = 0.0;

  void add_step(const std::vector<double>& errors, double reward, bool collision, bool contact,
                bool breach) {
    if (slot_sums.empty()) slot_sums.assign(errors.size(), 0.0);
    double mean = 0.0;
    for (std::size_t i = 0; i < errors.size(); ++i) {
      slot_sums[i] += errors[i];
      mean += errors[i];
    }
    distance_sum += errors.empty() ? 0.0 : mean / static_cast<double>(errors.size());
    reward_sum += reward;
    m.steps += 1;
    m.collisions += collision ? 1 : 0;
    m.obstacle_contacts += contact ? 1 : 0;
    m.bound_breaches += breach ? 1 : 0;
  }

  EvalMetrics finish() {
    const double n = std::max(1, m.steps);
    m.mean_distance = distance_sum / n;
    m.mean_reward = reward_sum / n;
    m.per_slot_error.clear();
    for (double s : slot_sums) m.per_slot_error.push_back(s / n);
    m.mean_episode_length = m.episodes > 0 ? static_cast<double>(m.steps) / m.episodes : 0.0;
    return m;
  }
};

json eval_to_json(const EvalMetrics& e) {
  return json{{"leader", std::string(env::to_string(e.leader))},
              {"episodes", e.episodes},
              {"steps", e.steps},
              {"mean_distance", e.mean_distance},
              {"mean_reward", e.mean_reward},
              {"per_slot_error", e.per_slot_error},
              {"collisions", e.collisions},
              {"obstacle_contacts", e.obstacle_contacts},
              {"bound_breaches", e.bound_breaches},
              {"mean_episode_length", e.mean_episode_length}};
}

json seed_to_json(const SeedRun& run) {
  json episodes = json::array();
  for (const auto& e : run.episodes) {
    episodes.push_back({{"total_reward", e.total_reward},
                        {"steps", e.steps},
                        {"terminated", e.terminated}});
  }
  json evals = json::array();
  for (const auto& e : run.evaluations) evals.push_back(eval_to_json(e));
  return json{{"seed", run.seed}, {"episodes", episodes}, {"evaluation", evals}};
}

}  // namespace

std::vector<env::LeaderKind> evaluation_leaders(const ExperimentConfig& config) {
  const env::LeaderKind trained = config.resolved_leader();
  std::vector<env::LeaderKind> out{trained};
  if (config.task == env::Task::Tracking && trained == env::LeaderKind::Random) {
    out.push_back(env::LeaderKind::Square);
    out.push_back(env::LeaderKind::Circle);
  }
  return out;
}

std::string seed_directory_name(const ExperimentConfig& config, std::uint64_t seed) {
  return std::string(env::to_string(config.task)) + "-" + std::string(rl::to_string(config.algorithm)) +
         "-seed" + std::to_string(seed);
}

EvalMetrics evaluate_policy(const nn::MlpParams& actor, const ExperimentConfig& config,
                            env::LeaderKind leader, std::uint64_t seed, std::ostream* trajectory) {
  env::EnvConfig ec = config.env_config();
  ec.leader = leader;
  env::LeaderFollowerEnv env(config.task, ec,
                             derive_seed(seed, Stream::Evaluation, leader_index(leader)));
  if (actor.input_size() != env.observation_dim() || actor.output_size() != env.action_dim()) {
    throw std::invalid_argument("actor does not match the task's observation/action sizes");
  }
  const auto spec = nn::ActivationSpec::actor(env.action_bound());
  if (trajectory) *trajectory << kTrajectoryHeader << '\n';

  Accumulator acc;
  acc.m.leader = leader;
  for (int ep = 1; ep <= config.eval_episodes; ++ep) {
    Eigen::VectorXd obs = env.reset();
    if (trajectory) write_rows(*trajectory, ep, 0, env.agents(), 0.0);
    acc.m.episodes += 1;
    for (;;) {
      const Eigen::VectorXd action = nn::forward(actor, spec, obs);
      const env::StepResult r = env.step(action);
      const env::StepInfo& info = env.last_info();
      acc.add_step(info.errors, r.reward, info.collisions > 0, info.obstacle_contact,
                   info.out_of_bounds);
      if (trajectory) write_rows(*trajectory, ep, env.step_count(), env.agents(), r.reward);
      obs = r.observation;
      if (r.done()) break;
    }
  }
  return acc.finish();
}

EvalMetrics metrics_from_trajectory(const fs::path& csv, const ExperimentConfig& config,
                                    env::LeaderKind leader) {
  const CsvTable t = read_csv(csv);
  const auto c_ep = t.column("episode"), c_step = t.column("step"), c_role = t.column("role");
  const auto c_x = t.column("x"), c_y = t.column("y"), c_r = t.column("reward");
  const env::EnvConfig ec = config.env_config();

  Accumulator acc;
  acc.m.leader = leader;
  std::size_t i = 0;
  long long last_episode = -1;
  while (i < t.rows.size()) {
    const long long ep = t.integer(i, c_ep);
    const long long step = t.integer(i, c_step);
    env::Point lead;
    std::vector<env::Point> followers, obstacles;
    const double reward = t.number(i, c_r);
    std::size_t j = i;
    for (; j < t.rows.size() && t.integer(j, c_ep) == ep && t.integer(j, c_step) == step; ++j) {
      const env::Point p{t.number(j, c_x), t.number(j, c_y)};
      const std::string& role = t.rows[j][c_role];
      if (role == "leader") {
        lead = p;
      } else if (role == "follower") {
        followers.push_back(p);
      } else if (role == "obstacle") {
        obstacles.push_back(p);
      } else {
        throw CsvError(t.source, t.line_numbers[j], "unknown role '" + role + "'");
      }
    }
    if (ep != last_episode) {
      acc.m.episodes += 1;
      last_episode = ep;
    }
    if (step > 0) {
      std::vector<double> errors;
      int collisions = 0;
      bool contact = false;
      bool breach = false;
      for (const auto& f : followers) breach = breach || !ec.follower_limits.contains(f);
      switch (config.task) {
        case env::Task::Tracking:
          errors = {env::distance(lead, followers.at(0))};
          break;
        case env::Task::Obstacle:
          errors = {env::distance(lead, followers.at(0))};
          for (const auto& o : obstacles) {
            contact = contact || env::distance(followers.at(0), o) < ec.safety_distance;
          }
          break;
        case env::Task::Unison: {
          auto fr = env::unison_reward(lead, followers, ec.unison_offsets, ec.safety_distance, ec.k_c);
          errors = std::move(fr.errors);
          collisions = fr.collisions;
          break;
        }
        case env::Task::Consensus: {
          std::vector<env::Point> all{lead};
          all.insert(all.end(), followers.begin(), followers.end());
          auto fr = env::consensus_reward(all, ec.consensus_distance, ec.safety_distance, ec.k_c);
          errors = std::move(fr.errors);
          collisions = fr.collisions;
          break;
        }
      }
      acc.add_step(errors, reward, collisions > 0, contact, breach);
    }
    i = j;
  }
  return acc.finish();
}

SeedRun run_seed(const ExperimentConfig& config, std::uint64_t seed, const fs::path& directory) {
  fs::create_directories(directory);
  SeedRun run;
  run.seed = seed;
  run.directory = directory;

  const env::EnvConfig ec = config.env_config();
  env::LeaderFollowerEnv env(config.task, ec, derive_seed(seed, Stream::Environment));
  rl::Trainer trainer(env.observation_dim(), env.action_dim(), env.action_bound(),
                      config.trainer_config(), seed);

  {
    auto metrics = open_out(directory / "metrics.csv");
    auto episodes = open_out(directory / "episodes.csv");
    metrics << kMetricsHeader << '\n';
    episodes << kEpisodesHeader << '\n';
    const rl::MetricsSink sink = [&](const rl::StepMetrics& m) {
      write_metrics_row(metrics, m);
      run.step_rewards.push_back(m.reward);
    };
    for (int ep = 1; ep <= config.episodes; ++ep) {
      const rl::EpisodeSummary s = trainer.train_episode(env, ep, ec.episode_len, sink);
      run.episodes.push_back(s);
      episodes << ep << ',' << format_double(s.total_reward) << ',' << s.steps << ','
               << (s.terminated ? 1 : 0) << ',' << format_double(s.final_v_explore) << '\n';
    }
  }

  nn::save_checkpoint(trainer.actor(), directory / "actor.ckpt");
  nn::save_checkpoint(trainer.critic1(), directory / "critic1.ckpt");
  nn::save_checkpoint(trainer.critic2(), directory / "critic2.ckpt");

  for (env::LeaderKind leader : evaluation_leaders(config)) {
    auto traj = open_out(directory / ("trajectory_" + std::string(env::to_string(leader)) + ".csv"));
    run.evaluations.push_back(evaluate_policy(trainer.actor(), config, leader, seed, &traj));
  }

  auto cfg = open_out(directory / "config.txt");
  cfg << serialize_config(config);
  auto summary = open_out(directory / "summary.json");
  summary << seed_to_json(run).dump(2) << '\n';
  return run;
}

RunSummary run_experiment(const ExperimentConfig& config, bool parallel) {
  config.validate();
  fs::create_directories(config.out_dir);
  RunSummary summary;
  summary.config = config;

  if (parallel && config.seeds.size() > 1) {
    std::vector<std::future<SeedRun>> jobs;
    for (std::uint64_t seed : config.seeds) {
      jobs.push_back(std::async(std::launch::async, [&config, seed] {
        return run_seed(config, seed, config.out_dir / seed_directory_name(config, seed));
      }));
    }
    for (auto& j : jobs) summary.runs.push_back(j.get());
  } else {
    for (std::uint64_t seed : config.seeds) {
      summary.runs.push_back(run_seed(config, seed, config.out_dir / seed_directory_name(config, seed)));
    }
  }

  auto out = open_out(config.out_dir / "summary.json");
  out << summary_json(summary) << '\n';
  auto cfg = open_out(config.out_dir / "config.txt");
  cfg << serialize_config(config);
  return summary;
}

std::vector<EvalMetrics> evaluate_checkpoint(const ExperimentConfig& config,
                                             const fs::path& seed_directory, std::uint64_t seed) {
  config.validate();
  const nn::MlpParams actor = nn::load_checkpoint(seed_directory / "actor.ckpt");
  std::vector<EvalMetrics> out;
  for (env::LeaderKind leader : evaluation_leaders(config)) {
    auto traj = open_out(seed_directory / ("eval_" + std::string(env::to_string(leader)) + ".csv"));
    out.push_back(evaluate_policy(actor, config, leader, seed, &traj));
  }
  auto js = open_out(seed_directory / "eval_summary.json");
  js << eval_json(out) << '\n';
  return out;
}

std::string summary_json(const RunSummary& summary) {
  json runs = json::array();
  for (const auto& r : summary.runs) runs.push_back(seed_to_json(r));
  return json{{"task", std::string(env::to_string(summary.config.task))},
              {"algo", std::string(rl::to_string(summary.config.algorithm))},
              {"episodes", summary.config.episodes},
              {"profile", std::string(to_string(summary.config.profile))},
              {"runs", runs}}
      .dump(2);
}

std::string eval_json(const std::vector<EvalMetrics>& evals) {
  json arr = json::array();
  for (const auto& e : evals) arr.push_back(eval_to_json(e));
  return arr.dump(2);
}

}  // namespace mpg::harness
