#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <utility>

namespace dsh {

/// splitmix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t x) noexcept;

/// Replayable Bin(trials, p) draws, one generator per (row, column) key so
/// that the draws for one key do not depend on how often others were used.
class BinomialStreams {
 public:
  explicit BinomialStreams(std::uint64_t root_seed) : root_(root_seed) {}

  /// One draw from Bin(trials, p) on stream (row, col).
  std::int64_t draw(std::uint32_t row, std::uint32_t col, std::int64_t trials, double p);

 private:
  struct Stream {
    std::mt19937_64 engine;
    std::binomial_distribution<std::int64_t> dist;
  };

  std::uint64_t root_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, Stream> streams_;
};

}  // namespace dsh
