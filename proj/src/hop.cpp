#include "dsh/hop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dsh {

namespace {

// Absorbs floating noise in eta-derived thresholds so that integral loads
// compare exactly when eta is a small rational such as 2 or 0.5.
constexpr double kTol = 1e-9;

std::int64_t ceil_threshold(double x) { return static_cast<std::int64_t>(std::ceil(x - kTol)); }

}  // namespace

double HopConfig::eta() const {
  if (eta_override) return *eta_override;
  return epsilon * epsilon * d_tilde / (32.0 * log2_clamped(static_cast<double>(n)));
}

Hop::Hop(HopConfig config) : config_(config), eta_(config.eta()), vertices_(config.n), indegrees_(config.n) {
  if (config_.n == 0) throw ConfigError("HOP needs a nonempty vertex universe");
  if (!(config_.epsilon > 0.0 && config_.epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
  if (!(eta_ > 0.0)) throw ConfigError("eta must be positive");
}

std::uint32_t Hop::allocate(EdgeHandle handle, const Hyperedge& edge) {
  std::uint32_t slot;
  if (!free_slots_.empty()) {
    slot = free_slots_.back();
    free_slots_.pop_back();
  } else {
    slot = static_cast<std::uint32_t>(slots_.size());
    slots_.emplace_back();
  }
  Slot& s = slots_[slot];
  s.handle = handle;
  s.edge = edge;
  s.members.assign(edge.size(), Member{});
  slot_of_.emplace(handle, slot);
  return slot;
}

void Hop::release(std::uint32_t slot) {
  slot_of_.erase(slots_[slot].handle);
  slots_[slot].edge = Hyperedge{};
  slots_[slot].members.clear();
  free_slots_.push_back(slot);
}

VertexId Hop::argmin_load(const Hyperedge& edge) const {
  VertexId best = edge.vertices().front();
  for (VertexId z : edge) {
    if (vertices_[z].d_in < vertices_[best].d_in) best = z;
  }
  return best;
}

std::size_t Hop::member_index(const Slot& s, VertexId v) const {
  auto vs = s.edge.vertices();
  return static_cast<std::size_t>(std::lower_bound(vs.begin(), vs.end(), v) - vs.begin());
}

void Hop::link_in(std::uint32_t slot, VertexId v) {
  VertexState& st = vertices_[v];
  Slot& s = slots_[slot];
  if (st.in_size == 0) {
    s.prev = s.next = slot;
    st.cursor = st.scan_cursor = slot;
  } else {
    // New entries join just behind the cursor: last in the current round.
    const std::uint32_t c = st.cursor;
    const std::uint32_t p = slots_[c].prev;
    s.prev = p;
    s.next = c;
    slots_[p].next = slot;
    slots_[c].prev = slot;
  }
  ++st.in_size;
}

void Hop::unlink_in(std::uint32_t slot, VertexId v) {
  VertexState& st = vertices_[v];
  Slot& s = slots_[slot];
  if (st.in_size == 1) {
    st.cursor = st.scan_cursor = npos;
  } else {
    if (st.cursor == slot) st.cursor = s.next;
    if (st.scan_cursor == slot) st.scan_cursor = s.next;
    slots_[s.prev].next = s.next;
    slots_[s.next].prev = s.prev;
  }
  s.prev = s.next = npos;
  --st.in_size;
}

void Hop::attach(std::uint32_t slot, VertexId head) {
  Slot& s = slots_[slot];
  s.head = head;
  link_in(slot, head);
  const std::int64_t head_load = vertices_[head].d_in;
  const auto members = s.edge.vertices();
  for (std::size_t k = 0; k < members.size(); ++k) {
    if (members[k] == head) continue;
    out_insert({slot, static_cast<std::uint32_t>(k)}, head_load);
  }
}

void Hop::detach(std::uint32_t slot) {
  Slot& s = slots_[slot];
  unlink_in(slot, s.head);
  const auto members = s.edge.vertices();
  for (std::size_t k = 0; k < members.size(); ++k) {
    if (members[k] == s.head) continue;
    out_erase({slot, static_cast<std::uint32_t>(k)});
  }
}

void Hop::out_insert(Ref ref, std::int64_t key) {
  Slot& s = slots_[ref.slot];
  VertexState& st = vertices_[s.edge.vertices()[ref.member]];
  const auto bucket = static_cast<std::size_t>(key);
  if (st.buckets.size() <= bucket) st.buckets.resize(bucket + 1);
  const Ref first = st.buckets[bucket];
  s.members[ref.member].out_prev = Ref{};
  s.members[ref.member].out_next = first;
  if (first.valid()) slots_[first.slot].members[first.member].out_prev = ref;
  st.buckets[bucket] = ref;
  s.members[ref.member].mirror = key;
  st.top = std::max(st.top, key);
  ++st.out_size;
}

void Hop::out_erase(Ref ref) {
  Slot& s = slots_[ref.slot];
  VertexState& st = vertices_[s.edge.vertices()[ref.member]];
  const Ref prev = s.members[ref.member].out_prev;
  const Ref next = s.members[ref.member].out_next;
  if (prev.valid()) {
    slots_[prev.slot].members[prev.member].out_next = next;
  } else {
    st.buckets[static_cast<std::size_t>(s.members[ref.member].mirror)] = next;
  }
  if (next.valid()) slots_[next.slot].members[next.member].out_prev = prev;
  s.members[ref.member].out_prev = s.members[ref.member].out_next = Ref{};
  --st.out_size;
  if (st.out_size == 0) {
    st.top = -1;
  } else {
    while (!st.buckets[static_cast<std::size_t>(st.top)].valid()) --st.top;
  }
}

void Hop::out_move(Ref ref, std::int64_t key) {
  // Insert first so that the top pointer never scans past the new key.
  Slot& s = slots_[ref.slot];
  VertexState& st = vertices_[s.edge.vertices()[ref.member]];
  const Ref prev = s.members[ref.member].out_prev;
  const Ref next = s.members[ref.member].out_next;
  if (prev.valid()) {
    slots_[prev.slot].members[prev.member].out_next = next;
  } else {
    st.buckets[static_cast<std::size_t>(s.members[ref.member].mirror)] = next;
  }
  if (next.valid()) slots_[next.slot].members[next.member].out_prev = prev;
  --st.out_size;
  out_insert(ref, key);
  while (!st.buckets[static_cast<std::size_t>(st.top)].valid()) --st.top;
}

void Hop::rotate(std::uint32_t slot, VertexId new_head) {
  detach(slot);
  attach(slot, new_head);
  ++last_rotations_;
  ++total_rotations_;
}

std::size_t Hop::scan_budget(VertexId v) const {
  const VertexState& st = vertices_[v];
  if (st.in_size == 0 || st.d_in <= 0) return 0;
  const double want = std::ceil(4.0 * static_cast<double>(st.d_in) / eta_ - kTol);
  if (want >= static_cast<double>(st.in_size)) return st.in_size;
  return static_cast<std::size_t>(want);
}

std::optional<std::uint32_t> Hop::tight_in_edge(VertexId v) {
  VertexState& st = vertices_[v];
  const std::size_t budget = scan_budget(v);
  const double threshold = static_cast<double>(st.d_in) - eta_ / 2.0;
  for (std::size_t i = 0; i < budget; ++i) {
    const std::uint32_t slot = st.scan_cursor;
    st.scan_cursor = slots_[slot].next;
    const VertexId u = argmin_load(slots_[slot].edge);
    if (static_cast<double>(vertices_[u].d_in) <= threshold + kTol) return slot;
  }
  return std::nullopt;
}

std::optional<std::uint32_t> Hop::tight_out_edge(VertexId v) const {
  const VertexState& st = vertices_[v];
  if (st.out_size == 0) return std::nullopt;
  if (static_cast<double>(st.top) + kTol >= static_cast<double>(st.d_in) + eta_ / 2.0) {
    return st.buckets[static_cast<std::size_t>(st.top)].slot;
  }
  return std::nullopt;
}

void Hop::inform(VertexId v) {
  VertexState& st = vertices_[v];
  const std::size_t budget = scan_budget(v);
  for (std::size_t i = 0; i < budget; ++i) {
    const std::uint32_t slot = st.cursor;
    st.cursor = slots_[slot].next;
    Slot& s = slots_[slot];
    const auto members = s.edge.vertices();
    for (std::size_t k = 0; k < members.size(); ++k) {
      if (members[k] == v || s.members[k].mirror == st.d_in) continue;
      out_move({slot, static_cast<std::uint32_t>(k)}, st.d_in);
    }
  }
}

void Hop::increment(VertexId v) {
  VertexState& st = vertices_[v];
  indegrees_.update(v, st.d_in, st.d_in + 1);
  ++st.d_in;
  inform(v);
}

void Hop::decrement(VertexId v) {
  VertexState& st = vertices_[v];
  if (st.d_in <= 0) throw std::logic_error("HOP decrement below zero");
  indegrees_.update(v, st.d_in, st.d_in - 1);
  --st.d_in;
  inform(v);
}

void Hop::insert(EdgeHandle handle, const Hyperedge& edge) {
  if (eta_ < 1.0 && !config_.allow_sub_unit_eta) {
    throw ConfigError("HOP requires eta >= 1 for integral loads (eta = " + std::to_string(eta_) + ")");
  }
  if (slot_of_.contains(handle)) throw UsageError("HOP: duplicate edge handle");
  if (edge.size() == 0 || edge.vertices().back() >= config_.n) throw UsageError("HOP: edge outside vertex universe");

  last_rotations_ = 0;
  const std::uint32_t slot = allocate(handle, edge);
  VertexId v = argmin_load(edge);
  attach(slot, v);
  while (auto f = tight_in_edge(v)) {
    const VertexId u = argmin_load(slots_[*f].edge);
    rotate(*f, u);
    v = u;
  }
  increment(v);
}

void Hop::erase(EdgeHandle handle) {
  auto it = slot_of_.find(handle);
  if (it == slot_of_.end()) throw UsageError("HOP: unknown edge handle");
  last_rotations_ = 0;
  const std::uint32_t slot = it->second;
  VertexId v = slots_[slot].head;
  detach(slot);
  release(slot);
  while (auto f = tight_out_edge(v)) {
    const VertexId w = slots_[*f].head;
    rotate(*f, v);
    v = w;
  }
  decrement(v);
}

VertexId Hop::head(EdgeHandle handle) const {
  auto it = slot_of_.find(handle);
  if (it == slot_of_.end()) throw UsageError("HOP: unknown edge handle");
  return slots_[it->second].head;
}

const Hyperedge& Hop::edge(EdgeHandle handle) const {
  auto it = slot_of_.find(handle);
  if (it == slot_of_.end()) throw UsageError("HOP: unknown edge handle");
  return slots_[it->second].edge;
}

std::vector<EdgeHandle> Hop::handles() const {
  std::vector<EdgeHandle> out;
  out.reserve(slot_of_.size());
  for (const auto& [h, slot] : slot_of_) out.push_back(h);
  std::sort(out.begin(), out.end());
  return out;
}

double Hop::query_density() const {
  return static_cast<double>(max_load()) * (1.0 - config_.epsilon / 2.0);
}

std::vector<VertexId> Hop::query_subset(SubsetMode mode) const {
  if (empty()) throw DomainError("densest subset of an empty hypergraph is undefined");
  const std::int64_t top = max_load();
  const double step = slack();

  if (mode == SubsetMode::theory) {
    const double gamma = std::sqrt(2.0 * step * log2_clamped(static_cast<double>(config_.n)) / static_cast<double>(top));
    double level = static_cast<double>(top);
    std::size_t a = count_at_least(ceil_threshold(level));
    std::size_t b = count_at_least(ceil_threshold(level - step));
    while (static_cast<double>(b) >= (1.0 + gamma) * static_cast<double>(a)) {
      level -= step;
      a = b;
      b = count_at_least(ceil_threshold(level - step));
    }
    return indegrees_.at_least(ceil_threshold(level - step));
  }

  // Level sets are prefixes of the vertices sorted by decreasing load; sweep
  // once, counting edges whose members have all been admitted.
  std::vector<std::pair<std::int64_t, VertexId>> order;
  order.reserve(config_.n);
  indegrees_.for_each_descending([&](std::int64_t load, VertexId v) {
    order.emplace_back(load, v);
    return true;
  });

  std::vector<std::uint32_t> admitted_members(slots_.size(), 0);
  std::int64_t induced = 0;
  std::size_t taken = 0;
  std::int64_t best_induced = -1;
  std::size_t best_size = 1;
  auto admit = [&](std::uint32_t slot) {
    if (++admitted_members[slot] == slots_[slot].edge.size()) ++induced;
  };

  const auto levels = static_cast<std::int64_t>(std::ceil(static_cast<double>(top) / step - kTol));
  for (std::int64_t i = 0; i <= levels; ++i) {
    const std::int64_t threshold = ceil_threshold(static_cast<double>(top) - step * static_cast<double>(i));
    while (taken < order.size() && order[taken].first >= threshold) {
      const VertexId v = order[taken].second;
      const VertexState& st = vertices_[v];
      std::uint32_t slot = st.cursor;
      for (std::uint32_t k = 0; k < st.in_size; ++k, slot = slots_[slot].next) admit(slot);
      for (const Ref& first : st.buckets) {
        for (Ref r = first; r.valid(); r = slots_[r.slot].members[r.member].out_next) admit(r.slot);
      }
      ++taken;
    }
    // induced / taken > best_induced / best_size
    if (static_cast<__int128>(induced) * best_size > static_cast<__int128>(best_induced) * taken) {
      best_induced = induced;
      best_size = taken;
    }
  }

  std::vector<VertexId> out;
  out.reserve(best_size);
  for (std::size_t i = 0; i < best_size; ++i) out.push_back(order[i].second);
  std::sort(out.begin(), out.end());
  return out;
}

HopAudit Hop::audit() const {
  HopAudit report;
  std::vector<std::int64_t> heads(config_.n, 0);
  std::vector<bool> live(slots_.size(), false);
  std::size_t expected_out = 0;

  for (const auto& [handle, slot] : slot_of_) live[slot] = slots_[slot].handle == handle;
  for (std::uint32_t slot = 0; slot < slots_.size(); ++slot) {
    if (!live[slot]) continue;
    const Slot& s = slots_[slot];
    if (!s.edge.contains(s.head)) ++report.structure_violations;
    ++heads[s.head];
    const std::int64_t head_load = vertices_[s.head].d_in;
    const auto members = s.edge.vertices();
    for (std::size_t k = 0; k < members.size(); ++k) {
      const VertexId u = members[k];
      if (u == s.head) continue;
      ++expected_out;
      const double gap = static_cast<double>(head_load - vertices_[u].d_in);
      if (gap > slack() + kTol) ++report.slack_violations;
      if (gap > eta_ + kTol) ++report.eta_violations;
      const std::int64_t stale = std::abs(head_load - s.members[k].mirror);
      report.max_staleness = std::max(report.max_staleness, stale);
      if (static_cast<double>(stale) > eta_ / 4.0 + kTol) ++report.staleness_violations;
    }
  }

  std::size_t actual_out = 0;
  std::vector<std::pair<std::int64_t, VertexId>> expected_index;
  for (VertexId v = 0; v < config_.n; ++v) {
    const VertexState& st = vertices_[v];
    std::int64_t top = -1;
    std::size_t listed = 0;
    for (std::size_t key = 0; key < st.buckets.size(); ++key) {
      Ref prev{};
      for (Ref r = st.buckets[key]; r.valid(); prev = r, r = slots_[r.slot].members[r.member].out_next) {
        const Slot& s = slots_[r.slot];
        if (r.member >= s.edge.size() || s.edge.vertices()[r.member] != v || s.head == v ||
            s.members[r.member].mirror != static_cast<std::int64_t>(key) || !(s.members[r.member].out_prev == prev) ||
            !live[r.slot]) {
          ++report.structure_violations;
          break;
        }
        ++listed;
        top = static_cast<std::int64_t>(key);
      }
    }
    if (listed != st.out_size || top != st.top) ++report.structure_violations;
    actual_out += listed;
    expected_index.emplace_back(st.d_in, v);
    if (st.d_in != heads[v] || st.in_size != static_cast<std::uint32_t>(heads[v])) ++report.structure_violations;
    std::uint32_t slot = st.cursor;
    bool scan_seen = st.in_size == 0 && st.scan_cursor == npos;
    for (std::uint32_t k = 0; k < st.in_size; ++k) {
      if (slot == npos || slots_[slot].head != v) {
        ++report.structure_violations;
        break;
      }
      scan_seen = scan_seen || slot == st.scan_cursor;
      slot = slots_[slot].next;
    }
    if (st.in_size > 0 && slot != st.cursor) ++report.structure_violations;
    if (!scan_seen) ++report.structure_violations;
  }
  if (actual_out != expected_out) ++report.structure_violations;

  std::sort(expected_index.begin(), expected_index.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::size_t pos = 0;
  bool index_ok = indegrees_.size() == expected_index.size();
  indegrees_.for_each_descending([&](std::int64_t load, VertexId v) {
    if (pos >= expected_index.size() || expected_index[pos] != std::pair{load, v}) {
      index_ok = false;
      return false;
    }
    ++pos;
    return true;
  });
  if (!index_ok) ++report.structure_violations;
  return report;
}

}  // namespace dsh
