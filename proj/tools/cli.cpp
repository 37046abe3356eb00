#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "mpg/compare.hpp"
#include "mpg/config.hpp"
#include "mpg/csv.hpp"
#include "mpg/experiment.hpp"
#include "mpg/plot.hpp"
#include "mpg/tabular.hpp"

namespace mpg::cli {
namespace {

namespace fs = std::filesystem;
using harness::ExperimentConfig;

struct CommonOptions {
  std::string config;
  std::vector<std::uint64_t> seeds;
  std::string out;
  std::string algo;
  std::string task;
  std::optional<int> episodes;
  std::string profile;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "flat key = value config file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seeds, "master seed (repeat or comma-separate for several)")
      ->delimiter(',');
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--algo", o.algo, "mpg|td3|ddpg");
  cmd->add_option("--task", o.task, "tracking|unison|consensus|obstacle");
  cmd->add_option("--episodes", o.episodes, "training episodes per seed");
  cmd->add_option("--profile", o.profile, "network size preset: paper|desk");
}

ExperimentConfig build_config(const CommonOptions& o, const std::optional<fs::path>& fallback = {}) {
  ExperimentConfig c;
  if (!o.config.empty()) {
    c = harness::load_config(o.config);
  } else if (fallback && fs::exists(*fallback)) {
    c = harness::load_config(*fallback);
  }
  if (!o.seeds.empty()) c.seeds = o.seeds;
  if (!o.out.empty()) c.out_dir = o.out;
  if (!o.algo.empty()) c.algorithm = rl::parse_target_kind(o.algo);
  if (!o.task.empty()) c.task = env::parse_task(o.task);
  if (o.episodes) c.episodes = *o.episodes;
  if (!o.profile.empty()) c.profile = harness::parse_profile(o.profile);
  c.validate();
  return c;
}

void print_eval(std::ostream& out, std::uint64_t seed, const harness::EvalMetrics& e) {
  out << "seed " << seed << " leader=" << env::to_string(e.leader)
      << " mean_distance=" << harness::format_double(e.mean_distance)
      << " mean_reward=" << harness::format_double(e.mean_reward) << " collisions=" << e.collisions
      << " obstacle_contacts=" << e.obstacle_contacts << " bound_breaches=" << e.bound_breaches
      << " mean_episode_length=" << harness::format_double(e.mean_episode_length) << '\n';
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + p.string() + " for writing");
  f << text;
}

int cmd_train(const CommonOptions& o, std::ostream& out) {
  const ExperimentConfig c = build_config(o);
  const auto summary = harness::run_experiment(c);
  for (const auto& run : summary.runs) {
    for (const auto& e : run.evaluations) print_eval(out, run.seed, e);
  }
  out << "wrote " << c.out_dir.string() << '\n';
  return 0;
}

int cmd_eval(const CommonOptions& o, std::ostream& out) {
  if (o.out.empty()) throw std::invalid_argument("eval needs --out pointing at a training output directory");
  const ExperimentConfig c = build_config(o, fs::path(o.out) / "config.txt");
  for (std::uint64_t seed : c.seeds) {
    const fs::path dir = c.out_dir / harness::seed_directory_name(c, seed);
    if (!fs::exists(dir / "actor.ckpt")) {
      throw std::runtime_error("no checkpoint at " + (dir / "actor.ckpt").string());
    }
    for (const auto& e : harness::evaluate_checkpoint(c, dir, seed)) print_eval(out, seed, e);
  }
  return 0;
}

int cmd_compare(const CommonOptions& o, const std::vector<std::string>& runs,
                const std::string& against, int window, int final_window, std::ostream& out) {
  harness::AlgorithmRuns first, second;
  fs::path report_dir;
  if (!runs.empty()) {
    if (runs.size() != 2) throw std::invalid_argument("--runs takes exactly two directories");
    first = harness::load_runs(runs[0]);
    second = harness::load_runs(runs[1]);
    report_dir = o.out.empty() ? fs::path(runs[0]).parent_path() : fs::path(o.out);
    if (report_dir.empty()) report_dir = ".";
  } else {
    ExperimentConfig base = build_config(o);
    if (o.algo.empty()) base.algorithm = rl::TargetKind::Mpg;
    ExperimentConfig other = base;
    other.algorithm = rl::parse_target_kind(against);
    if (other.algorithm == base.algorithm) {
      throw std::invalid_argument("compare needs two different algorithms");
    }
    report_dir = base.out_dir;
    base.out_dir = report_dir / std::string(rl::to_string(base.algorithm));
    other.out_dir = report_dir / std::string(rl::to_string(other.algorithm));
    if (base.seeds.size() < 2) throw std::invalid_argument("compare needs at least two seeds");
    first = harness::runs_from_summary(harness::run_experiment(base));
    second = harness::runs_from_summary(harness::run_experiment(other));
  }
  const auto report = harness::compare_runs(first, second, window, final_window);
  fs::create_directories(report_dir);
  write_text(report_dir / "comparison.csv", harness::comparison_csv(report));
  const std::string md = harness::comparison_markdown(report);
  write_text(report_dir / "comparison.md", md);
  out << md;
  return 0;
}

int cmd_plot(const std::string& run_dir, const std::string& trajectory, const std::string& metrics,
             const std::string& out_dir, int episode, int window, std::ostream& out,
             std::ostream& err) {
  harness::PlotRequest req;
  req.episode = episode;
  req.window = window;
  if (!run_dir.empty()) {
    const fs::path dir(run_dir);
    std::vector<fs::path> candidates;
    for (const auto& entry : fs::directory_iterator(dir)) {
      const std::string name = entry.path().filename().string();
      if (name.rfind("trajectory_", 0) == 0 && entry.path().extension() == ".csv") {
        candidates.push_back(entry.path());
      }
    }
    std::sort(candidates.begin(), candidates.end());
    if (!candidates.empty()) req.trajectory_csv = candidates.front();
    if (fs::exists(dir / "metrics.csv")) req.metrics_csv = dir / "metrics.csv";
    req.out_dir = dir;
  }
  if (!trajectory.empty()) req.trajectory_csv = fs::path(trajectory);
  if (!metrics.empty()) req.metrics_csv = fs::path(metrics);
  if (!out_dir.empty()) req.out_dir = out_dir;
  if (!req.trajectory_csv && !req.metrics_csv) {
    throw std::invalid_argument("plot needs --run, --trajectory or --metrics");
  }
  if (req.out_dir.empty()) req.out_dir = ".";
  for (const auto* p : {&req.trajectory_csv, &req.metrics_csv}) {
    if (*p && !fs::exists(**p)) throw std::runtime_error("no such file: " + (*p)->string());
  }
  const auto result = harness::render_plots(req);
  for (const auto& n : result.notices) err << "notice: " << n << '\n';
  for (const auto& f : result.files) out << "wrote " << f.string() << '\n';
  return 0;
}

int cmd_tabular(const CommonOptions& o, int mdps, std::int64_t steps, const std::string& mode,
                double exponent, double spread, std::ostream& out) {
  tabular::ConvergenceConfig cfg;
  cfg.n_steps = steps;
  cfg.lr_exponent = exponent;
  cfg.init_spread = spread;
  if (mode == "shared") {
    cfg.mode = tabular::UpdateMode::SharedTarget;
  } else if (mode == "alternating") {
    cfg.mode = tabular::UpdateMode::Alternating;
  } else {
    throw std::invalid_argument("unknown mode '" + mode + "' (shared|alternating)");
  }
  if (steps < 1) throw std::invalid_argument("--steps must be >= 1");
  if (exponent <= 0.0) throw std::invalid_argument("--lr-exponent must be > 0");
  const std::uint64_t seed = o.seeds.empty() ? 1 : o.seeds.front();
  const auto suite = tabular::convergence_suite(seed, mdps, cfg);
  if (!o.out.empty()) {
    fs::create_directories(o.out);
    for (std::size_t i = 0; i < suite.runs.size(); ++i) {
      std::ofstream f(fs::path(o.out) / ("tabular_mdp" + std::to_string(i) + ".csv"),
                      std::ios::binary | std::ios::trunc);
      if (!f) throw std::runtime_error("cannot write into " + o.out);
      tabular::write_trace_csv(f, suite.runs[i].trace);
    }
  }
  for (std::size_t i = 0; i < suite.runs.size(); ++i) {
    out << "mdp " << i << " states=" << suite.mdps[i].n_states
        << " actions=" << suite.mdps[i].n_actions
        << " sup_error=" << harness::format_double(suite.runs[i].terminal_error)
        << " q_minus_qprime_sup=" << harness::format_double(suite.runs[i].terminal_gap) << '\n';
  }
  out << "median sup_error=" << harness::format_double(suite.median_error)
      << " max q_minus_qprime_sup=" << harness::format_double(suite.max_terminal_gap) << '\n';
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Momentum policy gradient experiments"};
  app.name("mpg");
  app.require_subcommand(1);

  CommonOptions train_o, eval_o, compare_o, tab_o;
  auto* train = app.add_subcommand("train", "train and evaluate one or more seeds");
  add_common(train, train_o);

  auto* eval = app.add_subcommand("eval", "re-evaluate checkpoints in a training directory");
  add_common(eval, eval_o);

  auto* compare = app.add_subcommand("compare", "train or load two algorithms and compare them");
  add_common(compare, compare_o);
  std::vector<std::string> runs;
  std::string against = "td3";
  int window = 200, final_window = 50;
  compare->add_option("--runs", runs, "two existing training directories")->expected(2);
  compare->add_option("--against", against, "second algorithm when training (default td3)");
  compare->add_option("--window", window, "reward smoothing window");
  compare->add_option("--final-window", final_window, "episodes in the final window");

  auto* plot = app.add_subcommand("plot", "render SVG trajectory and reward plots");
  std::string run_dir, trajectory, metrics, plot_out;
  int episode = 1, plot_window = 200;
  plot->add_option("--run", run_dir, "seed directory written by train");
  plot->add_option("--trajectory", trajectory, "trajectory CSV");
  plot->add_option("--metrics", metrics, "metrics CSV");
  plot->add_option("--out", plot_out, "output directory");
  plot->add_option("--episode", episode, "trajectory episode to draw");
  plot->add_option("--window", plot_window, "reward smoothing window");

  auto* tab = app.add_subcommand("tabular", "tabular convergence experiment on random MDPs");
  tab->add_option("--seed", tab_o.seeds, "master seed")->expected(1);
  tab->add_option("--out", tab_o.out, "directory for per-MDP trace CSVs");
  int mdps = 20;
  std::int64_t steps = 200000;
  std::string mode = "shared";
  double exponent = 1.0, spread = 1.0;
  tab->add_option("--mdps", mdps, "number of random MDPs");
  tab->add_option("--steps", steps, "updates per MDP");
  tab->add_option("--mode", mode, "shared|alternating");
  tab->add_option("--lr-exponent", exponent, "alpha = 1/(1+n)^exponent");
  tab->add_option("--init-spread", spread, "Q' starts at Q + U(0, spread)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*train) return cmd_train(train_o, out);
    if (*eval) return cmd_eval(eval_o, out);
    if (*compare) return cmd_compare(compare_o, runs, against, window, final_window, out);
    if (*plot) return cmd_plot(run_dir, trajectory, metrics, plot_out, episode, plot_window, out, err);
    if (*tab) return cmd_tabular(tab_o, mdps, steps, mode, exponent, spread, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace mpg::cli
