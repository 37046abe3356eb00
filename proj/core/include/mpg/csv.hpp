#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mpg/trainer.hpp"

namespace mpg::harness {

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

class CsvError : public std::runtime_error {
 public:
  CsvError(const std::string& file, int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

struct CsvTable {
  std::string source;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> line_numbers;  // 1-based file line of each row

  /// Column index by name; throws CsvError when absent.
  std::size_t column(std::string_view name) const;
  double number(std::size_t row, std::size_t col) const;
  long long integer(std::size_t row, std::size_t col) const;
};

/// Reads a header plus rows with a fixed column count. Quoting is not
/// supported; every file this project writes is plain numeric/identifier CSV.
CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(std::string_view text, const std::string& source = "<memory>");

inline constexpr std::string_view kMetricsHeader =
    "episode,step,reward,q1_mean,q2_mean,delta_adj_mean,v_explore,loss_critic,loss_actor";
inline constexpr std::string_view kTrajectoryHeader = "episode,step,agent_id,role,x,y,theta,reward";
inline constexpr std::string_view kEpisodesHeader = "episode,total_reward,steps,terminated,v_explore";

void write_metrics_row(std::ostream& out, const rl::StepMetrics& m);

}  // namespace mpg::harness
