#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace mpg {

using Rng = std::mt19937_64;

/// Independent random streams derived from one master seed. Changing how
/// much one stream is consumed never shifts the draws of another.
enum class Stream : std::uint64_t {
  ActorInit = 1,
  Critic1Init = 2,
  Critic2Init = 3,
  Exploration = 4,
  Replay = 5,
  TargetNoise = 6,
  Environment = 7,
  Evaluation = 8,
  Tabular = 9,
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index = 0);
inline Rng make_rng(std::uint64_t master, Stream stream, std::uint64_t index = 0) {
  return Rng{derive_seed(master, stream, index)};
}

}  // namespace mpg
