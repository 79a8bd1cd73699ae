#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dsh/core.hpp"
#include "dsh/indegree_index.hpp"

namespace dsh {

struct HopConfig {
  std::size_t n = 0;
  /// Estimate of the maximum load this copy is tuned for.
  double d_tilde = 1.0;
  double epsilon = 0.5;
  /// Replaces the derived slack. Intended for tests that need an exact eta.
  std::optional<double> eta_override;
  /// When false, inserting with eta < 1 is a configuration error. Ensembles
  /// that keep copies tuned for small loads set this.
  bool allow_sub_unit_eta = false;

  /// eps^2 * d_tilde / (32 log n), or the override.
  double eta() const;
};

enum class SubsetMode {
  /// Stop at the first level set whose growth ratio falls below 1 + gamma.
  theory,
  /// Evaluate every level set exactly and keep the densest.
  best_of_levels,
};

/// Result of a full consistency scan; every counter is zero on a healthy
/// structure.
struct HopAudit {
  std::size_t slack_violations = 0;      // d_in(h(e)) > d_in(u) + slack
  std::size_t eta_violations = 0;        // d_in(h(e)) > d_in(u) + eta, same as above once eta >= 1
  std::size_t staleness_violations = 0;  // |d_in(h(e)) - mirror| > eta / 4
  std::size_t structure_violations = 0;  // In/Out/index bookkeeping mismatches
  std::int64_t max_staleness = 0;

  bool ok() const { return slack_violations == 0 && staleness_violations == 0 && structure_violations == 0; }
};

/// Maintains an orientation of an unweighted multi-hypergraph (one head per
/// edge) such that no edge's head is loaded more than `slack()` above any
/// other member, using lazy round-robin propagation of loads to neighbours.
///
/// Loads d_in(v) are the number of edges whose head is v. The max load D
/// certifies density: with D_tilde <= D the value D * (1 - eps/2) is a
/// (1+eps)-approximation of the maximum density and one of the level sets
/// {v : d_in(v) >= D - i*eta} is a (1+eps)-approximate densest subset.
class Hop {
 public:
  explicit Hop(HopConfig config);

  void insert(EdgeHandle handle, const Hyperedge& edge);
  void erase(EdgeHandle handle);

  bool contains(EdgeHandle handle) const { return slot_of_.contains(handle); }
  std::size_t edge_count() const noexcept { return slot_of_.size(); }
  std::size_t vertex_count() const noexcept { return config_.n; }
  bool empty() const noexcept { return slot_of_.empty(); }

  double eta() const noexcept { return eta_; }
  /// Slack the orientation actually maintains: eta, or 1 when eta < 1
  /// (loads are integral, so a sub-unit slack degenerates to 1).
  double slack() const noexcept { return eta_ < 1.0 ? 1.0 : eta_; }
  const HopConfig& config() const noexcept { return config_; }

  std::int64_t load(VertexId v) const { return vertices_.at(v).d_in; }
  std::int64_t max_load() const { return indegrees_.max(); }
  std::size_t count_at_least(std::int64_t threshold) const { return indegrees_.count_at_least(threshold); }
  VertexId head(EdgeHandle handle) const;
  const Hyperedge& edge(EdgeHandle handle) const;
  std::vector<EdgeHandle> handles() const;

  /// max_load() * (1 - eps/2); zero when empty.
  double query_density() const;
  /// Throws DomainError when empty.
  std::vector<VertexId> query_subset(SubsetMode mode) const;

  /// Rotations performed by the most recent insert or erase.
  std::size_t last_rotations() const noexcept { return last_rotations_; }
  std::uint64_t total_rotations() const noexcept { return total_rotations_; }

  HopAudit audit() const;

 private:
  friend struct HopInspector;

  static constexpr std::uint32_t npos = ~std::uint32_t{0};

  struct Ref {
    std::uint32_t slot = npos;
    std::uint32_t member = 0;
    bool valid() const { return slot != npos; }
    bool operator==(const Ref&) const = default;
  };

  // Per member k of an edge: the head's load as last seen by
  // edge.vertices()[k], and the links of k's entry in its Out bucket list.
  struct Member {
    std::int64_t mirror = 0;
    Ref out_prev;
    Ref out_next;
  };

  struct Slot {
    EdgeHandle handle{};
    Hyperedge edge;
    VertexId head = 0;
    std::uint32_t prev = npos;  // circular In(head) links
    std::uint32_t next = npos;
    std::vector<Member> members;
  };

  // Out(v) is bucketed by mirror key; each bucket is an intrusive list with
  // the most recent entry first, so ties at the max key go to it.
  struct VertexState {
    std::int64_t d_in = 0;
    std::uint32_t cursor = npos;       // next In(v) slot to inform
    std::uint32_t scan_cursor = npos;  // next In(v) slot to test for tightness
    std::uint32_t in_size = 0;
    std::vector<Ref> buckets;
    std::int64_t top = -1;  // largest nonempty bucket
    std::size_t out_size = 0;
  };

  std::uint32_t allocate(EdgeHandle handle, const Hyperedge& edge);
  void release(std::uint32_t slot);

  VertexId argmin_load(const Hyperedge& edge) const;
  std::size_t member_index(const Slot& s, VertexId v) const;

  void attach(std::uint32_t slot, VertexId head);
  void detach(std::uint32_t slot);
  void link_in(std::uint32_t slot, VertexId v);
  void unlink_in(std::uint32_t slot, VertexId v);

  void out_insert(Ref ref, std::int64_t key);
  void out_erase(Ref ref);
  void out_move(Ref ref, std::int64_t key);

  void rotate(std::uint32_t slot, VertexId new_head);
  std::optional<std::uint32_t> tight_in_edge(VertexId v);
  std::optional<std::uint32_t> tight_out_edge(VertexId v) const;
  void increment(VertexId v);
  void decrement(VertexId v);
  void inform(VertexId v);
  std::size_t scan_budget(VertexId v) const;

  HopConfig config_;
  double eta_;
  std::vector<Slot> slots_;
  std::vector<std::uint32_t> free_slots_;
  std::unordered_map<EdgeHandle, std::uint32_t> slot_of_;
  std::vector<VertexState> vertices_;
  IndegreeIndex indegrees_;
  std::size_t last_rotations_ = 0;
  std::uint64_t total_rotations_ = 0;
};

}  // namespace dsh
