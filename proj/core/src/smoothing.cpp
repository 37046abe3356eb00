#include "mpg/smoothing.hpp"

#include <algorithm>
#include <stdexcept>

namespace mpg::harness {

std::vector<double> smooth_rewards(std::span<const double> series, int window) {
  if (window < 1) throw std::invalid_argument("smoothing window must be >= 1");
  const auto n = static_cast<std::ptrdiff_t>(series.size());
  // Window [i - left, i + right]; for even widths the extra sample sits on the left.
  const std::ptrdiff_t left = window / 2;
  const std::ptrdiff_t right = window - 1 - left;
  std::vector<double> out(series.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - left);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 1, i + right);
    double sum = 0.0;
    for (std::ptrdiff_t j = lo; j <= hi; ++j) sum += series[j];
    out[i] = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

}  // namespace mpg::harness
