#include "dsh/indegree_index.hpp"

#include <limits>

namespace dsh {

IndegreeIndex::IndegreeIndex(std::size_t n) {
  for (std::size_t v = 0; v < n; ++v) tree_.insert({0, static_cast<VertexId>(v)});
}

void IndegreeIndex::update(VertexId v, std::int64_t old_load, std::int64_t new_load) {
  tree_.erase({old_load, v});
  tree_.insert({new_load, v});
}

std::size_t IndegreeIndex::count_at_least(std::int64_t threshold) const {
  // Keys ordered before (threshold, max id) are exactly those with load < threshold.
  const Key below{threshold, std::numeric_limits<VertexId>::max()};
  return tree_.size() - tree_.order_of_key(below);
}

std::vector<VertexId> IndegreeIndex::at_least(std::int64_t threshold) const {
  std::vector<VertexId> out;
  for (auto it = tree_.rbegin(); it != tree_.rend() && it->first >= threshold; ++it) out.push_back(it->second);
  return out;
}

}  // namespace dsh
