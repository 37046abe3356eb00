#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mpg::harness {

struct PlotRequest {
  std::optional<std::filesystem::path> trajectory_csv;
  std::optional<std::filesystem::path> metrics_csv;
  std::filesystem::path out_dir;
  int episode = 1;      // trajectory episode to draw
  int window = 200;     // reward smoothing
};

struct PlotResult {
  std::vector<std::filesystem::path> files;
  std::vector<std::string> notices;
};

/// Writes trajectory.svg and rewards.svg under out_dir. A metrics file with no
/// rows yields no reward plot and a notice instead. Malformed input throws
/// CsvError carrying the offending line.
PlotResult render_plots(const PlotRequest& request);

/// SVG text for the trajectory and reward figures.
std::string trajectory_svg(const std::filesystem::path& trajectory_csv, int episode);
std::string rewards_svg(const std::vector<double>& rewards, int window);

}  // namespace mpg::harness
