#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <ext/pb_ds/assoc_container.hpp>
#include <ext/pb_ds/tree_policy.hpp>

#include "dsh/core.hpp"

namespace dsh {

/// Ordered multiset of (load, vertex) pairs with rank queries.
///
/// Backs max-load lookup, |{v : load(v) >= x}| counting and enumeration of
/// the vertices above a threshold in decreasing load order.
class IndegreeIndex {
 public:
  explicit IndegreeIndex(std::size_t n);

  void update(VertexId v, std::int64_t old_load, std::int64_t new_load);

  std::int64_t max() const { return tree_.empty() ? 0 : tree_.rbegin()->first; }
  std::size_t count_at_least(std::int64_t threshold) const;

  /// Vertices with load >= threshold, highest load first (ties by id).
  std::vector<VertexId> at_least(std::int64_t threshold) const;

  /// All (load, vertex) pairs in decreasing load order.
  template <class F>
  void for_each_descending(F&& f) const {
    for (auto it = tree_.rbegin(); it != tree_.rend(); ++it) {
      if (!f(it->first, it->second)) break;
    }
  }

  std::size_t size() const { return tree_.size(); }

 private:
  using Key = std::pair<std::int64_t, VertexId>;
  struct LoadThenReverseId {
    bool operator()(const Key& a, const Key& b) const {
      return a.first != b.first ? a.first < b.first : a.second > b.second;
    }
  };
  using Tree = __gnu_pbds::tree<Key, __gnu_pbds::null_type, LoadThenReverseId, __gnu_pbds::rb_tree_tag,
                                __gnu_pbds::tree_order_statistics_node_update>;
  Tree tree_;
};

}  // namespace dsh
