#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "dsh/core.hpp"
#include "dsh/hop.hpp"

namespace dsh {

struct UdshpConfig {
  std::size_t n = 0;
  /// Upper bound on live logical edges at any time.
  std::size_t m_bound = 0;
  std::size_t rank = 2;
  double epsilon = 0.5;
  /// Lower bound on the maximum multiplicity of the input (>= 1).
  double w_star = 1.0;
  /// Constant in the duplication factor ceil(C * r * eps^-2 * log n / w_star).
  double duplication_constant = 64.0;
  /// Replaces the derived duplication factor.
  std::optional<std::size_t> duplication_override;
  SubsetMode subset_mode = SubsetMode::best_of_levels;

  std::size_t duplication() const;
  std::size_t copy_count() const;
};

/// Per-copy view for tests and diagnostics.
struct UdshpCopyStats {
  double d_tilde = 0;
  std::int64_t max_load = 0;
  std::size_t inserted = 0;
  std::size_t pending = 0;
};

/// Fully dynamic (1+eps)-approximate densest subhypergraph for unweighted
/// multi-hypergraphs. Each logical edge is stored `duplication()` times in a
/// ladder of HOP copies tuned for loads 1, 2, 4, ...; queries are answered by
/// the copy whose load range brackets the current maximum load.
class Udshp {
 public:
  explicit Udshp(UdshpConfig config);

  EdgeHandle insert(const Hyperedge& edge);
  void erase(EdgeHandle handle);

  bool contains(EdgeHandle handle) const { return logical_.contains(handle); }
  std::size_t edge_count() const noexcept { return logical_.size(); }
  bool empty() const noexcept { return logical_.empty(); }

  /// Density estimate of the logical hypergraph; zero when empty.
  double max_density() const;
  /// Throws DomainError when empty.
  std::vector<VertexId> densest_subset() const;

  const UdshpConfig& config() const noexcept { return config_; }
  std::size_t duplication() const noexcept { return dup_; }
  std::size_t copy_count() const noexcept { return copies_.size(); }
  /// 0 while empty, otherwise the 1-based index of the copy answering queries.
  std::size_t active() const noexcept { return active_; }
  const Hop& copy(std::size_t index) const { return copies_.at(index - 1).hop; }
  UdshpCopyStats copy_stats(std::size_t index) const;

  /// Rotations summed over all copies since construction.
  std::uint64_t total_rotations() const;

  /// Number of violated structural invariants (copy contents, pending
  /// bookkeeping, active bracket, per-copy HOP audits).
  std::size_t audit() const;

 private:
  struct Copy {
    explicit Copy(HopConfig cfg) : hop(cfg) {}
    Hop hop;
    std::uint64_t next_seq = 0;
    std::map<std::uint64_t, std::uint64_t> pending;               // seq -> internal id
    std::unordered_map<std::uint64_t, std::uint64_t> pending_seq;  // internal id -> seq
    std::unordered_map<VertexId, std::set<std::uint64_t>> pending_at;
  };

  double lower(std::size_t index) const;  // d_tilde of the copy
  bool full(std::size_t index) const;
  void normalize();
  void flush(std::size_t index);

  void add_pending(Copy& c, std::uint64_t id);
  void drop_pending(Copy& c, std::uint64_t id);
  bool is_pending(const Copy& c, std::uint64_t id) const { return c.pending_seq.contains(id); }

  void insert_internal(std::uint64_t id);
  void erase_internal(std::uint64_t id);

  UdshpConfig config_;
  std::size_t dup_;
  std::vector<Copy> copies_;
  std::size_t active_ = 0;
  std::uint64_t next_public_ = 0;
  std::uint64_t next_internal_ = 0;
  std::unordered_map<std::uint64_t, Hyperedge> internal_;
  std::unordered_map<EdgeHandle, std::vector<std::uint64_t>> logical_;
};

}  // namespace dsh
