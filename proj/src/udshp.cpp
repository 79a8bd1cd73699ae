#include "dsh/udshp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dsh {

std::size_t UdshpConfig::duplication() const {
  if (duplication_override) return std::max<std::size_t>(*duplication_override, 1);
  const double raw = duplication_constant * static_cast<double>(rank) * log2_clamped(static_cast<double>(n)) /
                     (epsilon * epsilon * w_star);
  return std::max<std::size_t>(static_cast<std::size_t>(std::ceil(raw)), 1);
}

std::size_t UdshpConfig::copy_count() const {
  const double internal = static_cast<double>(m_bound) * static_cast<double>(duplication());
  return std::max<std::size_t>(static_cast<std::size_t>(std::ceil(std::log2(std::max(internal, 1.0)))), 1);
}

Udshp::Udshp(UdshpConfig config) : config_(config) {
  if (config_.n == 0) throw ConfigError("UDSHP needs a nonempty vertex universe");
  if (config_.m_bound == 0) throw ConfigError("UDSHP needs m_bound >= 1");
  if (config_.rank == 0) throw ConfigError("UDSHP needs rank >= 1");
  if (!(config_.epsilon > 0.0 && config_.epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
  if (!(config_.w_star >= 1.0)) throw ConfigError("w_star must be at least 1");
  if (!(config_.duplication_constant > 0.0)) throw ConfigError("duplication constant must be positive");
  dup_ = config_.duplication();
  const std::size_t k = config_.copy_count();
  copies_.reserve(k);
  for (std::size_t i = 1; i <= k; ++i) {
    HopConfig hc;
    hc.n = config_.n;
    hc.d_tilde = std::ldexp(1.0, static_cast<int>(i) - 1);
    hc.epsilon = config_.epsilon;
    hc.allow_sub_unit_eta = true;
    copies_.emplace_back(hc);
  }
}

double Udshp::lower(std::size_t index) const { return copies_[index - 1].hop.config().d_tilde; }

bool Udshp::full(std::size_t index) const {
  if (index == 0) return true;
  return static_cast<double>(copies_[index - 1].hop.max_load()) >= 2.0 * lower(index);
}

void Udshp::normalize() {
  const std::size_t k = copies_.size();
  for (bool moved = true; moved;) {
    moved = false;
    while (active_ < k && full(active_) &&
           static_cast<double>(copies_[active_].hop.max_load()) >= lower(active_ + 1)) {
      ++active_;
      moved = true;
    }
    while (active_ >= 1 && static_cast<double>(copies_[active_ - 1].hop.max_load()) < lower(active_)) {
      // The old active copy now sits above the active index and must hold
      // every edge; the new one answers queries and must as well.
      flush(active_);
      --active_;
      if (active_ >= 1) flush(active_);
      moved = true;
    }
  }
}

void Udshp::flush(std::size_t index) {
  Copy& c = copies_[index - 1];
  while (!c.pending.empty()) {
    const std::uint64_t id = c.pending.begin()->second;
    drop_pending(c, id);
    c.hop.insert(EdgeHandle{id}, internal_.at(id));
  }
}

void Udshp::add_pending(Copy& c, std::uint64_t id) {
  const std::uint64_t seq = c.next_seq++;
  c.pending.emplace(seq, id);
  c.pending_seq.emplace(id, seq);
  for (VertexId v : internal_.at(id)) c.pending_at[v].insert(seq);
}

void Udshp::drop_pending(Copy& c, std::uint64_t id) {
  auto it = c.pending_seq.find(id);
  const std::uint64_t seq = it->second;
  c.pending_seq.erase(it);
  c.pending.erase(seq);
  for (VertexId v : internal_.at(id)) {
    auto at = c.pending_at.find(v);
    at->second.erase(seq);
    if (at->second.empty()) c.pending_at.erase(at);
  }
}

void Udshp::insert_internal(std::uint64_t id) {
  normalize();
  const Hyperedge& e = internal_.at(id);
  for (std::size_t j = 1; j <= copies_.size(); ++j) {
    Copy& c = copies_[j - 1];
    if (j > active_) {
      c.hop.insert(EdgeHandle{id}, e);
      continue;
    }
    std::int64_t min_load = std::numeric_limits<std::int64_t>::max();
    for (VertexId v : e) min_load = std::min(min_load, c.hop.load(v));
    if (static_cast<double>(min_load) < 2.0 * lower(j)) {
      c.hop.insert(EdgeHandle{id}, e);
    } else {
      add_pending(c, id);
    }
  }
  normalize();
}

void Udshp::erase_internal(std::uint64_t id) {
  normalize();
  for (std::size_t j = 1; j <= copies_.size(); ++j) {
    Copy& c = copies_[j - 1];
    if (j > active_) {
      c.hop.erase(EdgeHandle{id});
      continue;
    }
    if (is_pending(c, id)) {
      drop_pending(c, id);
      continue;
    }
    const VertexId h = c.hop.head(EdgeHandle{id});
    c.hop.erase(EdgeHandle{id});
    auto at = c.pending_at.find(h);
    if (at != c.pending_at.end()) {
      const std::uint64_t waiting = c.pending.at(*at->second.begin());
      drop_pending(c, waiting);
      c.hop.insert(EdgeHandle{waiting}, internal_.at(waiting));
    }
  }
  internal_.erase(id);
  normalize();
}

EdgeHandle Udshp::insert(const Hyperedge& edge) {
  if (edge.size() == 0 || edge.size() > config_.rank) throw UsageError("UDSHP: edge size outside [1, rank]");
  if (edge.vertices().back() >= config_.n) throw UsageError("UDSHP: edge outside vertex universe");
  if (logical_.size() + 1 > config_.m_bound) throw UsageError("UDSHP: capacity m_bound exceeded");
  const EdgeHandle handle{next_public_++};
  std::vector<std::uint64_t> ids;
  ids.reserve(dup_);
  for (std::size_t k = 0; k < dup_; ++k) {
    const std::uint64_t id = next_internal_++;
    internal_.emplace(id, edge);
    ids.push_back(id);
    insert_internal(id);
  }
  logical_.emplace(handle, std::move(ids));
  return handle;
}

void Udshp::erase(EdgeHandle handle) {
  auto it = logical_.find(handle);
  if (it == logical_.end()) throw UsageError("UDSHP: unknown edge handle");
  const std::vector<std::uint64_t> ids = std::move(it->second);
  logical_.erase(it);
  for (std::uint64_t id : ids) erase_internal(id);
}

double Udshp::max_density() const {
  if (active_ == 0) return 0.0;
  return copies_[active_ - 1].hop.query_density() / static_cast<double>(dup_);
}

std::vector<VertexId> Udshp::densest_subset() const {
  if (empty() || active_ == 0) throw DomainError("densest subset of an empty hypergraph is undefined");
  return copies_[active_ - 1].hop.query_subset(config_.subset_mode);
}

UdshpCopyStats Udshp::copy_stats(std::size_t index) const {
  const Copy& c = copies_.at(index - 1);
  return {c.hop.config().d_tilde, c.hop.max_load(), c.hop.edge_count(), c.pending.size()};
}

std::uint64_t Udshp::total_rotations() const {
  std::uint64_t total = 0;
  for (const Copy& c : copies_) total += c.hop.total_rotations();
  return total;
}

std::size_t Udshp::audit() const {
  std::size_t violations = 0;
  for (std::size_t j = 1; j <= copies_.size(); ++j) {
    const Copy& c = copies_[j - 1];
    const HopAudit a = c.hop.audit();
    violations += a.slack_violations + a.staleness_violations + a.structure_violations;
    if (c.hop.edge_count() + c.pending.size() != internal_.size()) ++violations;
    if (j > active_ && !c.pending.empty()) ++violations;
    for (const auto& [id, edge] : internal_) {
      const bool inserted = c.hop.contains(EdgeHandle{id});
      if (inserted == is_pending(c, id)) ++violations;
    }
    if (c.pending.size() != c.pending_seq.size()) ++violations;
  }
  if (active_ >= 1 && static_cast<double>(copies_[active_ - 1].hop.max_load()) < lower(active_)) ++violations;
  if (active_ == 0 && !internal_.empty()) ++violations;
  return violations;
}

}  // namespace dsh
