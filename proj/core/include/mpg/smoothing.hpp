#pragma once

#include <span>
#include <vector>

namespace mpg::harness {

/// Centered box filter. Near the ends the window is truncated and the mean is
/// taken over the samples that remain, so the output has the input's length.
/// Throws std::invalid_argument when window < 1.
std::vector<double> smooth_rewards(std::span<const double> series, int window);

}  // namespace mpg::harness
