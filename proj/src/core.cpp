#include "dsh/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace dsh {

double log2_clamped(double x) noexcept { return x < 2.0 ? 1.0 : std::log2(x); }

Hyperedge::Hyperedge(std::vector<VertexId> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw UsageError("hyperedge must contain at least one vertex");
  std::sort(vertices_.begin(), vertices_.end());
  if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end()) {
    throw UsageError("hyperedge contains a repeated vertex");
  }
}

bool Hyperedge::contains(VertexId v) const noexcept {
  return std::binary_search(vertices_.begin(), vertices_.end(), v);
}

std::string to_string(const Hyperedge& e) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < e.size(); ++i) os << (i ? "," : "") << e.vertices()[i];
  os << '}';
  return os.str();
}

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw DomainError("rational denominator must be positive");
  if (num < 0) throw DomainError("density is nonnegative");
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

std::string to_string(const Rational& r) {
  return std::to_string(r.num()) + "/" + std::to_string(r.den());
}

WeightedHypergraph::WeightedHypergraph(std::size_t n, std::size_t rank) : n_(n), rank_(rank) {
  if (n == 0) throw ConfigError("vertex universe must be nonempty");
  if (rank == 0) throw ConfigError("rank bound must be positive");
}

void WeightedHypergraph::validate(const Hyperedge& e, Weight w) const {
  if (w < 1) throw UsageError("edge weight must be a positive integer");
  if (e.size() > rank_) throw UsageError("edge " + to_string(e) + " exceeds rank bound");
  if (e.vertices().back() >= n_) throw UsageError("edge " + to_string(e) + " leaves the vertex universe");
}

EdgeHandle WeightedHypergraph::add(Hyperedge e, Weight w) {
  EdgeHandle h{next_handle_};
  add(h, std::move(e), w);
  return h;
}

void WeightedHypergraph::add(EdgeHandle h, Hyperedge e, Weight w) {
  validate(e, w);
  if (edges_.contains(h)) throw UsageError("duplicate edge handle");
  edges_.emplace(h, Entry{std::move(e), w});
  total_weight_ += w;
  next_handle_ = std::max(next_handle_, to_underlying(h) + 1);
}

void WeightedHypergraph::remove(EdgeHandle h) {
  auto it = edges_.find(h);
  if (it == edges_.end()) throw UsageError("unknown edge handle");
  total_weight_ -= it->second.weight;
  edges_.erase(it);
}

const WeightedHypergraph::Entry& WeightedHypergraph::at(EdgeHandle h) const {
  auto it = edges_.find(h);
  if (it == edges_.end()) throw UsageError("unknown edge handle");
  return it->second;
}

Weight WeightedHypergraph::max_weight() const {
  Weight best = 0;
  for (const auto& [h, entry] : edges_) best = std::max(best, entry.weight);
  return best;
}

std::vector<VertexId> WeightedHypergraph::support() const {
  std::vector<VertexId> out;
  for (const auto& [h, entry] : edges_) out.insert(out.end(), entry.edge.begin(), entry.edge.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Rational density(const WeightedHypergraph& g, std::span<const VertexId> subset) {
  if (subset.empty()) throw DomainError("density of an empty vertex set is undefined");
  std::vector<char> member(g.vertex_count(), 0);
  std::size_t distinct = 0;
  for (VertexId v : subset) {
    if (v >= g.vertex_count()) throw DomainError("vertex outside the universe");
    if (!member[v]) ++distinct;
    member[v] = 1;
  }
  Weight induced = 0;
  for (const auto& [h, entry] : g.edges()) {
    if (std::all_of(entry.edge.begin(), entry.edge.end(), [&](VertexId v) { return member[v] != 0; })) {
      induced += entry.weight;
    }
  }
  return Rational(induced, static_cast<std::int64_t>(distinct));
}

Weight max_multiplicity(const WeightedHypergraph& g) {
  std::map<Hyperedge, Weight> copies;
  Weight best = 0;
  for (const auto& [h, entry] : g.edges()) best = std::max(best, copies[entry.edge] += entry.weight);
  return best;
}

}  // namespace dsh
