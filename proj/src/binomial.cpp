#include "dsh/binomial.hpp"

#include "dsh/core.hpp"

namespace dsh {

std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::int64_t BinomialStreams::draw(std::uint32_t row, std::uint32_t col, std::int64_t trials, double p) {
  if (trials < 0 || !(p >= 0.0 && p <= 1.0)) throw UsageError("binomial parameters out of range");
  if (p == 0.0 || trials == 0) return 0;
  if (p == 1.0) return trials;
  auto it = streams_.find({row, col});
  if (it == streams_.end()) {
    const std::uint64_t key = (static_cast<std::uint64_t>(row) << 32) | col;
    Stream s{std::mt19937_64(mix_seed(root_ ^ mix_seed(key))), std::binomial_distribution<std::int64_t>(trials, p)};
    it = streams_.emplace(std::pair{row, col}, std::move(s)).first;
  }
  Stream& s = it->second;
  if (s.dist.t() != trials || s.dist.p() != p) s.dist = std::binomial_distribution<std::int64_t>(trials, p);
  return s.dist(s.engine);
}

}  // namespace dsh
