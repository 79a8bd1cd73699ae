#include "dsh/wdshp.hpp"

#include <algorithm>
#include <cmath>

namespace dsh {

double epsilon_for_delta(double delta) {
  if (!(delta > 0.0)) throw ConfigError("delta must be positive");
  const auto ok = [delta](double e) { return (1.0 - 2.0 * e) / std::pow(1.0 + e, 3) >= 1.0 / (1.0 + delta); };
  double lo = 0.0;
  double hi = std::min(delta / 5.0, 0.49);
  if (ok(hi)) return hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return lo > 0.0 ? lo : delta / 8.0;
}

Wdshp::Wdshp(WdshpConfig config) : config_(config), eps_(config.eps()), streams_(config.rng_seed) {
  if (config_.n == 0) throw ConfigError("WDSHP needs a nonempty vertex universe");
  if (config_.m_bound == 0) throw ConfigError("WDSHP needs m_bound >= 1");
  if (config_.rank == 0) throw ConfigError("WDSHP needs rank >= 1");
  if (config_.w_max < 1) throw ConfigError("w_max must be at least 1");
  if (!(config_.c > 0.0)) throw ConfigError("sampling constant must be positive");
  if (!(eps_ > 0.0 && eps_ < 0.5)) throw ConfigError("epsilon must lie in (0, 1/2)");

  log_n_ = log2_clamped(static_cast<double>(config_.n));
  const double scale = config_.c * log_n_ / (eps_ * eps_);
  threshold_ = (1.0 - eps_) * scale;

  const double base = 1.0 + eps_;
  const double span = static_cast<double>(config_.rank) * static_cast<double>(config_.m_bound);
  const auto last = static_cast<std::size_t>(std::ceil(std::log(span) / std::log(base) - 1e-9));
  const std::int64_t max_copies = class_weight(weight_class(config_.w_max));

  std::optional<std::size_t> saturated;
  for (std::size_t i = 0; i <= last; ++i) {
    Guess g;
    g.rho = static_cast<double>(config_.w_max) / static_cast<double>(config_.rank) * std::pow(base, static_cast<double>(i));
    g.q = std::min(scale / g.rho, 1.0);
    if (g.q == 1.0 && saturated) {
      g.structure = *saturated;
    } else {
      UdshpConfig uc;
      uc.n = config_.n;
      uc.m_bound = config_.m_bound * static_cast<std::size_t>(max_copies);
      uc.rank = config_.rank;
      uc.epsilon = eps_;
      uc.w_star = std::max(static_cast<double>(config_.w_max) * g.q / 2.0, 1.0);
      uc.duplication_constant = config_.duplication_constant;
      uc.duplication_override = config_.duplication_override;
      uc.subset_mode = config_.subset_mode;
      g.structure = structures_.size();
      structures_.push_back(std::make_unique<Udshp>(uc));
      structure_guess_.push_back(i);
      if (g.q == 1.0) saturated = g.structure;
    }
    guesses_.push_back(g);
  }
}

std::uint32_t Wdshp::weight_class(Weight w) const {
  if (w < 1) throw UsageError("weights must be positive");
  const double base = 1.0 + eps_;
  auto j = static_cast<std::int64_t>(std::ceil(std::log(static_cast<double>(w)) / std::log(base)));
  j = std::max<std::int64_t>(j, 0);
  while (std::pow(base, static_cast<double>(j)) < static_cast<double>(w)) ++j;
  while (j > 0 && std::pow(base, static_cast<double>(j - 1)) >= static_cast<double>(w)) --j;
  return static_cast<std::uint32_t>(j);
}

std::int64_t Wdshp::class_weight(std::uint32_t j) const {
  return static_cast<std::int64_t>(std::floor(std::pow(1.0 + eps_, static_cast<double>(j))));
}

std::int64_t Wdshp::sample_count(std::size_t i, std::uint32_t j) {
  if (i >= guesses_.size() || j > weight_class(config_.w_max)) throw UsageError("sample_count: index out of range");
  return streams_.draw(static_cast<std::uint32_t>(i), j, class_weight(j), guesses_[i].q);
}

EdgeHandle Wdshp::insert(const Hyperedge& edge, Weight weight) {
  if (weight < 1 || weight > config_.w_max) throw UsageError("WDSHP: weight outside [1, w_max]");
  if (edge.size() == 0 || edge.size() > config_.rank) throw UsageError("WDSHP: edge size outside [1, rank]");
  if (edge.vertices().back() >= config_.n) throw UsageError("WDSHP: edge outside vertex universe");
  if (registry_.size() + 1 > config_.m_bound) throw UsageError("WDSHP: capacity m_bound exceeded");

  const std::uint32_t j = weight_class(weight);
  std::vector<Placement> placements;
  placements.reserve(structures_.size());
  for (std::size_t s = 0; s < structures_.size(); ++s) {
    const std::int64_t count = sample_count(structure_guess_[s], j);
    Placement p{s, {}};
    p.copies.reserve(static_cast<std::size_t>(count));
    for (std::int64_t k = 0; k < count; ++k) p.copies.push_back(structures_[s]->insert(edge));
    placements.push_back(std::move(p));
  }
  const EdgeHandle handle{next_handle_++};
  registry_.emplace(handle, std::move(placements));
  return handle;
}

void Wdshp::erase(EdgeHandle handle) {
  auto it = registry_.find(handle);
  if (it == registry_.end()) throw UsageError("WDSHP: unknown edge handle");
  for (const Placement& p : it->second) {
    for (EdgeHandle h : p.copies) structures_[p.structure]->erase(h);
  }
  registry_.erase(it);
}

double Wdshp::guess_density(std::size_t i) const { return structures_[guesses_.at(i).structure]->max_density(); }

std::size_t Wdshp::guess_edge_count(std::size_t i) const {
  return structures_[guesses_.at(i).structure]->edge_count();
}

const Udshp& Wdshp::guess_structure(std::size_t i) const { return *structures_[guesses_.at(i).structure]; }

std::optional<std::size_t> Wdshp::selected_guess() const {
  const auto qualifies = [this](std::size_t i) { return guess_density(i) >= threshold_; };
  if (guesses_.empty() || !qualifies(0)) return std::nullopt;
  std::size_t lo = 0;  // qualifies
  std::size_t hi = guesses_.size();
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    (qualifies(mid) ? lo : hi) = mid;
  }
#ifndef NDEBUG
  // Monotonicity only holds with high probability; fall back to a scan.
  for (std::size_t i = guesses_.size(); i-- > 0;) {
    if (qualifies(i)) return i;
  }
#endif
  return lo;
}

double Wdshp::max_density() const {
  if (empty()) return 0.0;
  if (const auto i = selected_guess()) {
    return (1.0 - 2.0 * eps_) / (1.0 + eps_) * guesses_[*i].rho;
  }
  // No guess is dense enough to certify; the unsampled structure, when
  // there is one, still holds the rounded graph exactly.
  if (guesses_.front().q == 1.0) return guess_density(0) / (1.0 + eps_);
  return 0.0;
}

std::vector<VertexId> Wdshp::densest_subset() const {
  if (empty()) throw DomainError("densest subset of an empty hypergraph is undefined");
  if (const auto i = selected_guess()) return structures_[guesses_[*i].structure]->densest_subset();
  if (guesses_.front().q == 1.0) return structures_[guesses_.front().structure]->densest_subset();
  throw DomainError("no density guess qualifies");
}

}  // namespace dsh
