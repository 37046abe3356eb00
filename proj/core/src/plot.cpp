#include "mpg/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "mpg/csv.hpp"
#include "mpg/smoothing.hpp"

namespace mpg::harness {
namespace {

namespace fs = std::filesystem;

constexpr double kSize = 520.0;
constexpr double kMargin = 40.0;

struct Track {
  std::string role;
  std::vector<std::pair<double, double>> points;
};

const char* colour(const std::string& role, int index) {
  if (role == "leader") return "#d62728";
  if (role == "obstacle") return "#444444";
  static const char* palette[] = {"#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};
  return palette[index % 5];
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + p.string() + " for writing");
  out << text;
}

std::string header(double w, double h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(w) + "\" height=\"" + fmt(h) +
         "\" viewBox=\"0 0 " + fmt(w) + " " + fmt(h) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

}  // namespace

std::string trajectory_svg(const fs::path& trajectory_csv, int episode) {
  const CsvTable t = read_csv(trajectory_csv);
  const auto c_ep = t.column("episode"), c_id = t.column("agent_id"), c_role = t.column("role");
  const auto c_x = t.column("x"), c_y = t.column("y");

  std::map<long long, Track> tracks;
  double lo = -1.0, hi = 1.0;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const double x = t.number(i, c_x), y = t.number(i, c_y);
    const long long id = t.integer(i, c_id);
    if (t.integer(i, c_ep) != episode) continue;
    auto& tr = tracks[id];
    tr.role = t.rows[i][c_role];
    tr.points.emplace_back(x, y);
    lo = std::min({lo, x, y});
    hi = std::max({hi, x, y});
  }
  if (tracks.empty()) {
    throw std::invalid_argument(trajectory_csv.string() + ": no rows for episode " +
                                std::to_string(episode));
  }
  const double span = hi - lo;
  auto px = [&](double x) { return kMargin + (x - lo) / span * (kSize - 2 * kMargin); };
  auto py = [&](double y) { return kSize - kMargin - (y - lo) / span * (kSize - 2 * kMargin); };

  std::string svg = header(kSize, kSize);
  svg += "<rect x=\"" + fmt(kMargin) + "\" y=\"" + fmt(kMargin) + "\" width=\"" +
         fmt(kSize - 2 * kMargin) + "\" height=\"" + fmt(kSize - 2 * kMargin) +
         "\" fill=\"none\" stroke=\"#bbbbbb\"/>\n";
  int follower = 0;
  double legend_x = kMargin;
  for (const auto& [id, tr] : tracks) {
    const char* c = colour(tr.role, tr.role == "follower" ? follower++ : 0);
    svg += "<polyline class=\"" + tr.role + "\" fill=\"none\" stroke=\"" + c +
           "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : tr.points) svg += fmt(px(x)) + "," + fmt(py(y)) + " ";
    svg += "\"/>\n";
    const auto& [sx, sy] = tr.points.front();
    const auto& [ex, ey] = tr.points.back();
    if (tr.role == "obstacle") {
      svg += "<circle class=\"obstacle-mark\" cx=\"" + fmt(px(ex)) + "\" cy=\"" + fmt(py(ey)) +
             "\" r=\"6\" fill=\"" + c + "\"/>\n";
    } else {
      svg += "<circle cx=\"" + fmt(px(sx)) + "\" cy=\"" + fmt(py(sy)) + "\" r=\"3\" fill=\"none\" stroke=\"" + c +
             "\"/>\n";
    }
    svg += "<text x=\"" + fmt(legend_x) + "\" y=\"20\" font-size=\"11\" fill=\"" + c + "\">" +
           tr.role + " " + std::to_string(id) + "</text>\n";
    legend_x += 80.0;
  }
  svg += "</svg>\n";
  return svg;
}

std::string rewards_svg(const std::vector<double>& rewards, int window) {
  const auto smooth = smooth_rewards(rewards, window);
  const double w = 720.0, h = 360.0;
  double lo = *std::min_element(smooth.begin(), smooth.end());
  double hi = *std::max_element(smooth.begin(), smooth.end());
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double n = std::max<double>(1.0, static_cast<double>(smooth.size() - 1));
  auto px = [&](double i) { return kMargin + i / n * (w - 2 * kMargin); };
  auto py = [&](double v) { return h - kMargin - (v - lo) / (hi - lo) * (h - 2 * kMargin); };

  std::string svg = header(w, h);
  svg += "<polyline class=\"reward\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.2\" points=\"";
  // Thin the polyline to at most ~2000 vertices.
  const std::size_t stride = std::max<std::size_t>(1, smooth.size() / 2000);
  for (std::size_t i = 0; i < smooth.size(); i += stride) {
    svg += fmt(px(static_cast<double>(i))) + "," + fmt(py(smooth[i])) + " ";
  }
  svg += "\"/>\n";
  svg += "<text x=\"" + fmt(kMargin) + "\" y=\"20\" font-size=\"12\">reward per step, box filter " +
         std::to_string(window) + " (min " + fmt(lo) + ", max " + fmt(hi) + ")</text>\n";
  svg += "</svg>\n";
  return svg;
}

PlotResult render_plots(const PlotRequest& request) {
  PlotResult result;
  fs::create_directories(request.out_dir);
  if (request.trajectory_csv) {
    const fs::path out = request.out_dir / "trajectory.svg";
    write_file(out, trajectory_svg(*request.trajectory_csv, request.episode));
    result.files.push_back(out);
  }
  if (request.metrics_csv) {
    std::vector<double> rewards;
    if (fs::file_size(*request.metrics_csv) > 0) {
      const CsvTable t = read_csv(*request.metrics_csv);
      const auto c = t.column("reward");
      for (std::size_t i = 0; i < t.rows.size(); ++i) rewards.push_back(t.number(i, c));
    }
    if (rewards.empty()) {
      result.notices.push_back(request.metrics_csv->string() +
                               ": no metric rows, reward plot skipped");
    } else {
      const fs::path out = request.out_dir / "rewards.svg";
      write_file(out, rewards_svg(rewards, request.window));
      result.files.push_back(out);
    }
  }
  return result;
}

}  // namespace mpg::harness
