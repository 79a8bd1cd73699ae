#include "dsh/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>

namespace dsh {

namespace {

struct MaskedGraph {
  std::vector<VertexId> support;
  std::vector<std::pair<std::uint32_t, Weight>> edges;  // merged by vertex set
};

MaskedGraph to_masks(const WeightedHypergraph& g) {
  if (g.empty()) throw DomainError("densest subset of an empty hypergraph is undefined");
  MaskedGraph out;
  out.support = g.support();
  if (out.support.size() > kOracleMaxSupport) {
    throw UsageError("exhaustive oracle: support of " + std::to_string(out.support.size()) + " vertices exceeds " +
                     std::to_string(kOracleMaxSupport));
  }
  std::unordered_map<VertexId, unsigned> bit;
  for (unsigned k = 0; k < out.support.size(); ++k) bit.emplace(out.support[k], k);
  std::unordered_map<std::uint32_t, Weight> merged;
  for (const auto& [h, entry] : g.edges()) {
    std::uint32_t mask = 0;
    for (VertexId v : entry.edge) mask |= std::uint32_t{1} << bit.at(v);
    merged[mask] += entry.weight;
  }
  out.edges.assign(merged.begin(), merged.end());
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

std::vector<VertexId> members(const MaskedGraph& mg, std::uint32_t mask) {
  std::vector<VertexId> out;
  for (unsigned k = 0; k < mg.support.size(); ++k) {
    if (mask >> k & 1U) out.push_back(mg.support[k]);
  }
  return out;
}

// Keeps the best (density, lexicographically smallest set) seen so far.
class Best {
 public:
  explicit Best(const MaskedGraph& mg) : mg_(mg) {}

  void offer(std::uint32_t mask, Weight induced) {
    const auto size = static_cast<std::int64_t>(std::popcount(mask));
    if (mask_ == 0) {
      take(mask, induced, size);
      return;
    }
    const __int128 lhs = static_cast<__int128>(induced) * size_;
    const __int128 rhs = static_cast<__int128>(weight_) * size;
    if (lhs > rhs || (lhs == rhs && members(mg_, mask) < members(mg_, mask_))) take(mask, induced, size);
  }

  OracleResult result() const { return {members(mg_, mask_), Rational(weight_, size_)}; }

 private:
  void take(std::uint32_t mask, Weight induced, std::int64_t size) {
    mask_ = mask;
    weight_ = induced;
    size_ = size;
  }

  const MaskedGraph& mg_;
  std::uint32_t mask_ = 0;
  Weight weight_ = 0;
  std::int64_t size_ = 1;
};

}  // namespace

OracleResult exact_densest_bruteforce(const WeightedHypergraph& g) {
  const MaskedGraph mg = to_masks(g);
  const unsigned s = static_cast<unsigned>(mg.support.size());
  const std::uint32_t total = std::uint32_t{1} << s;
  // induced[S] = sum of weights of edges whose mask is a subset of S
  std::vector<Weight> induced(total, 0);
  for (const auto& [mask, w] : mg.edges) induced[mask] += w;
  for (unsigned b = 0; b < s; ++b) {
    for (std::uint32_t m = 0; m < total; ++m) {
      if (m >> b & 1U) induced[m] += induced[m ^ (std::uint32_t{1} << b)];
    }
  }
  Best best(mg);
  for (std::uint32_t m = 1; m < total; ++m) best.offer(m, induced[m]);
  return best.result();
}

OracleResult exact_densest_graycode(const WeightedHypergraph& g) {
  const MaskedGraph mg = to_masks(g);
  const unsigned s = static_cast<unsigned>(mg.support.size());
  std::vector<std::vector<std::pair<std::uint32_t, Weight>>> incident(s);
  for (const auto& [mask, w] : mg.edges) {
    for (unsigned k = 0; k < s; ++k) {
      if (mask >> k & 1U) incident[k].emplace_back(mask, w);
    }
  }
  Best best(mg);
  std::uint32_t current = 0;
  Weight induced = 0;
  const std::uint32_t total = std::uint32_t{1} << s;
  for (std::uint32_t i = 1; i < total; ++i) {
    const auto b = static_cast<unsigned>(std::countr_zero(i));
    const std::uint32_t bit = std::uint32_t{1} << b;
    if (current & bit) {
      for (const auto& [mask, w] : incident[b]) {
        if ((mask & current) == mask) induced -= w;
      }
      current ^= bit;
    } else {
      current ^= bit;
      for (const auto& [mask, w] : incident[b]) {
        if ((mask & current) == mask) induced += w;
      }
    }
    best.offer(current, induced);
  }
  return best.result();
}

OracleResult greedy_peel(const WeightedHypergraph& g) {
  if (g.empty()) throw DomainError("densest subset of an empty hypergraph is undefined");
  std::vector<VertexId> support = g.support();
  std::unordered_map<VertexId, Weight> degree;
  std::unordered_map<VertexId, std::vector<const WeightedHypergraph::Entry*>> incident;
  for (const auto& [h, entry] : g.edges()) {
    for (VertexId v : entry.edge) {
      degree[v] += entry.weight;
      incident[v].push_back(&entry);
    }
  }
  std::set<std::pair<Weight, VertexId>> queue;
  for (VertexId v : support) queue.emplace(degree[v], v);

  std::unordered_map<const WeightedHypergraph::Entry*, bool> dead;
  Weight remaining_weight = g.total_weight();
  std::int64_t remaining = static_cast<std::int64_t>(support.size());
  Rational best(remaining_weight, remaining);
  std::size_t best_removed = 0;
  std::vector<VertexId> order;
  order.reserve(support.size());

  while (remaining > 1) {
    const auto [deg, v] = *queue.begin();
    queue.erase(queue.begin());
    order.push_back(v);
    for (const auto* entry : incident[v]) {
      if (dead[entry]) continue;
      dead[entry] = true;
      remaining_weight -= entry->weight;
      for (VertexId u : entry->edge) {
        if (u == v) continue;
        queue.erase({degree[u], u});
        degree[u] -= entry->weight;
        queue.emplace(degree[u], u);
      }
    }
    --remaining;
    const Rational candidate(remaining_weight, remaining);
    if (candidate > best) {
      best = candidate;
      best_removed = order.size();
    }
  }

  std::set<VertexId> removed(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(best_removed));
  OracleResult out;
  for (VertexId v : support) {
    if (!removed.contains(v)) out.best_set.push_back(v);
  }
  out.best_density = best;
  return out;
}

}  // namespace dsh
