#include "mpg/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace mpg::harness {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_double(std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw std::invalid_argument("expected a number, got '" + std::string(v) + "'");
  }
  return out;
}

template <typename Int>
Int to_int(std::string_view v) {
  Int out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw std::invalid_argument("expected an integer, got '" + std::string(v) + "'");
  }
  return out;
}

bool to_bool(std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::invalid_argument("expected true or false, got '" + std::string(v) + "'");
}

std::string fmt(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::vector<env::Point> to_points(std::string_view v) {
  std::vector<env::Point> pts;
  if (trim(v).empty()) return pts;
  for (auto item : split(v, ';')) {
    const auto xy = split(item, ':');
    if (xy.size() != 2) throw std::invalid_argument("points are written x:y;x:y");
    pts.push_back({to_double(xy[0]), to_double(xy[1])});
  }
  return pts;
}

std::string fmt_points(const std::vector<env::Point>& pts) {
  std::string out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out += ';';
    out += fmt(pts[i].x) + ':' + fmt(pts[i].y);
  }
  return out;
}

struct Field {
  const char* key;
  std::function<void(ExperimentConfig&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define MPG_DOUBLE(KEY, MEMBER)                                                   \
  Field {                                                                         \
    KEY, [](ExperimentConfig& c, std::string_view v) { c.MEMBER = to_double(v); }, \
        [](const ExperimentConfig& c) { return fmt(c.MEMBER); }                   \
  }
#define MPG_INT(KEY, MEMBER, TYPE)                                                    \
  Field {                                                                             \
    KEY, [](ExperimentConfig& c, std::string_view v) { c.MEMBER = to_int<TYPE>(v); }, \
        [](const ExperimentConfig& c) { return std::to_string(c.MEMBER); }            \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"task", [](ExperimentConfig& c, std::string_view v) { c.task = env::parse_task(v); },
       [](const ExperimentConfig& c) { return std::string(env::to_string(c.task)); }},
      {"algo",
       [](ExperimentConfig& c, std::string_view v) { c.algorithm = rl::parse_target_kind(v); },
       [](const ExperimentConfig& c) { return std::string(rl::to_string(c.algorithm)); }},
      {"leader",
       [](ExperimentConfig& c, std::string_view v) {
         if (v == "auto") {
           c.leader.reset();
         } else {
           c.leader = env::parse_leader_kind(v);
         }
       },
       [](const ExperimentConfig& c) {
         return c.leader ? std::string(env::to_string(*c.leader)) : std::string("auto");
       }},
      MPG_INT("episodes", episodes, int),
      {"seeds",
       [](ExperimentConfig& c, std::string_view v) {
         c.seeds.clear();
         for (auto s : split(v, ',')) c.seeds.push_back(to_int<std::uint64_t>(s));
       },
       [](const ExperimentConfig& c) {
         std::string out;
         for (std::size_t i = 0; i < c.seeds.size(); ++i) {
           if (i) out += ',';
           out += std::to_string(c.seeds[i]);
         }
         return out;
       }},
      {"profile", [](ExperimentConfig& c, std::string_view v) { c.profile = parse_profile(v); },
       [](const ExperimentConfig& c) { return std::string(to_string(c.profile)); }},
      MPG_INT("eval_episodes", eval_episodes, int),
      {"out", [](ExperimentConfig& c, std::string_view v) { c.out_dir = std::string(v); },
       [](const ExperimentConfig& c) { return c.out_dir.generic_string(); }},
      // trainer
      MPG_DOUBLE("gamma", trainer.gamma),
      MPG_INT("batch_size", trainer.batch_size, int),
      MPG_DOUBLE("actor_lr", trainer.actor_lr),
      MPG_DOUBLE("critic_lr", trainer.critic_lr),
      MPG_INT("inner_iters", trainer.inner_iters, int),
      MPG_INT("policy_delay", trainer.policy_delay, int),
      MPG_DOUBLE("tau", trainer.tau),
      MPG_INT("replay_capacity", trainer.replay_capacity, std::size_t),
      MPG_DOUBLE("v_explore", trainer.noise.v_explore),
      MPG_DOUBLE("v_min", trainer.noise.v_min),
      MPG_DOUBLE("noise_decay", trainer.noise.lambda),
      MPG_DOUBLE("v_train", trainer.noise.v_train),
      MPG_DOUBLE("target_noise_clip", trainer.target_noise_clip),
      // environment
      MPG_DOUBLE("dt", env.dt),
      MPG_INT("episode_len", env.episode_len, int),
      MPG_DOUBLE("k_b", env.k_b),
      MPG_DOUBLE("k_c", env.k_c),
      MPG_DOUBLE("k_o", env.k_o),
      MPG_DOUBLE("safety_distance", env.safety_distance),
      MPG_DOUBLE("spawn_half_width", env.spawn_half_width),
      MPG_DOUBLE("circle_radius", env.path.circle_radius),
      MPG_DOUBLE("circle_speed", env.path.circle_speed),
      MPG_DOUBLE("square_half_side", env.path.square_half_side),
      MPG_DOUBLE("square_speed", env.path.square_speed),
      MPG_DOUBLE("line_speed", env.path.line_speed),
      MPG_DOUBLE("random_start_half", env.path.random_start_half),
      {"unison_offsets",
       [](ExperimentConfig& c, std::string_view v) { c.env.unison_offsets = to_points(v); },
       [](const ExperimentConfig& c) { return fmt_points(c.env.unison_offsets); }},
      MPG_INT("consensus_followers", env.consensus_followers, int),
      MPG_DOUBLE("consensus_distance", env.consensus_distance),
      {"fixed_obstacles",
       [](ExperimentConfig& c, std::string_view v) { c.env.fixed_obstacles = to_points(v); },
       [](const ExperimentConfig& c) { return fmt_points(c.env.fixed_obstacles); }},
      {"moving_obstacle",
       [](ExperimentConfig& c, std::string_view v) { c.env.moving_obstacle = to_bool(v); },
       [](const ExperimentConfig& c) {
         return std::string(c.env.moving_obstacle ? "true" : "false");
       }},
      {"absorbing_resets",
       [](ExperimentConfig& c, std::string_view v) { c.env.absorbing_resets = to_bool(v); },
       [](const ExperimentConfig& c) {
         return std::string(c.env.absorbing_resets ? "true" : "false");
       }},
  };
  return table;
}

#undef MPG_DOUBLE
#undef MPG_INT

}  // namespace

std::string_view to_string(Profile p) { return p == Profile::Paper ? "paper" : "desk"; }

Profile parse_profile(std::string_view text) {
  if (text == "paper") return Profile::Paper;
  if (text == "desk") return Profile::Desk;
  throw std::invalid_argument("unknown profile '" + std::string(text) + "' (paper|desk)");
}

std::vector<int> hidden_layers(Profile p) {
  return p == Profile::Paper ? std::vector<int>{400, 300} : std::vector<int>{64, 64};
}

env::LeaderKind ExperimentConfig::resolved_leader() const {
  if (leader) return *leader;
  return task == env::Task::Obstacle ? env::LeaderKind::Line : env::LeaderKind::Random;
}

env::EnvConfig ExperimentConfig::env_config() const {
  env::EnvConfig e = env;
  e.leader = resolved_leader();
  return e;
}

rl::TrainerConfig ExperimentConfig::trainer_config() const {
  rl::TrainerConfig t = trainer;
  t.hidden = hidden_layers(profile);
  t.rule = algorithm;
  return t;
}

void ExperimentConfig::validate() const {
  if (episodes < 0) throw std::invalid_argument("episodes must be >= 0");
  if (eval_episodes < 1) throw std::invalid_argument("eval_episodes must be >= 1");
  if (seeds.empty()) throw std::invalid_argument("at least one seed is required");
  if (out_dir.empty()) throw std::invalid_argument("output directory must be set");
  trainer_config().validate();
  env_config().validate(task);
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig c;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? text.npos : end - start);
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    bool known = false;
    for (const auto& f : fields()) {
      if (key == f.key) {
        try {
          f.set(c, value);
        } catch (const std::exception& e) {
          throw std::invalid_argument("config line " + std::to_string(line_no) + " (" +
                                      std::string(key) + "): " + e.what());
        }
        known = true;
        break;
      }
    }
    if (!known) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": unknown key '" +
                                  std::string(key) + "'");
    }
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& config) {
  std::string out;
  for (const auto& f : fields()) out += std::string(f.key) + " = " + f.get(config) + '\n';
  return out;
}

}  // namespace mpg::harness
