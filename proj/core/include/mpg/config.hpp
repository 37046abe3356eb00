#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mpg/tasks.hpp"
#include "mpg/trainer.hpp"

namespace mpg::harness {

/// Network size presets: "paper" is 400/300 hidden units, "desk" is 64/64.
enum class Profile { Paper, Desk };

std::string_view to_string(Profile p);
Profile parse_profile(std::string_view text);
std::vector<int> hidden_layers(Profile p);

struct ExperimentConfig {
  env::Task task = env::Task::Tracking;
  rl::TargetKind algorithm = rl::TargetKind::Mpg;
  /// Unset means the task default: line for obstacle avoidance, random otherwise.
  std::optional<env::LeaderKind> leader;
  int episodes = 100;
  std::vector<std::uint64_t> seeds{1};
  Profile profile = Profile::Paper;
  int eval_episodes = 10;
  std::filesystem::path out_dir = "runs";
  rl::TrainerConfig trainer;  // `hidden` is derived from `profile`
  env::EnvConfig env;

  env::LeaderKind resolved_leader() const;
  /// Environment settings with the resolved leader filled in.
  env::EnvConfig env_config() const;
  /// Trainer settings with the profile's hidden layers filled in.
  rl::TrainerConfig trainer_config() const;

  /// Throws std::invalid_argument describing the first offending field.
  void validate() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Parses the flat `key = value` format. Blank lines and `#` comments are
/// ignored; unknown keys and malformed values are rejected with the line number.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Writes every key, so parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

}  // namespace mpg::harness
