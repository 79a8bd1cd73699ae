#pragma once

#include <compare>
#include <functional>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dsh {

using VertexId = std::uint32_t;
using Weight = std::int64_t;

/// Opaque identity of a live hyperedge. Never reused within one structure.
enum class EdgeHandle : std::uint64_t {};

constexpr std::uint64_t to_underlying(EdgeHandle h) noexcept { return static_cast<std::uint64_t>(h); }

/// Raised when a caller violates an operation contract (unknown handle,
/// capacity, out-of-range weight).
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised for invalid construction parameters.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a query is undefined for the current state (e.g. empty graph).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Base-2 logarithm with values below 2 clamped to 1.
double log2_clamped(double x) noexcept;

/// A hyperedge in canonical form: strictly increasing vertex ids.
class Hyperedge {
 public:
  Hyperedge() = default;

  /// Sorts the input. Throws UsageError on an empty list or repeated vertices.
  explicit Hyperedge(std::vector<VertexId> vertices);
  Hyperedge(std::initializer_list<VertexId> vertices) : Hyperedge(std::vector<VertexId>(vertices)) {}

  std::span<const VertexId> vertices() const noexcept { return vertices_; }
  std::size_t size() const noexcept { return vertices_.size(); }
  bool contains(VertexId v) const noexcept;

  auto begin() const noexcept { return vertices_.begin(); }
  auto end() const noexcept { return vertices_.end(); }

  friend auto operator<=>(const Hyperedge&, const Hyperedge&) = default;

 private:
  std::vector<VertexId> vertices_;
};

std::string to_string(const Hyperedge& e);

/// Exact nonnegative rational with 64-bit numerator and denominator.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend bool operator==(const Rational& a, const Rational& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    return lhs <=> rhs;
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::string to_string(const Rational& r);

/// Mutable weighted multi-hypergraph on the vertex universe [0, n) with rank
/// bound r. Edges are keyed by handles so identical vertex sets may coexist.
class WeightedHypergraph {
 public:
  struct Entry {
    Hyperedge edge;
    Weight weight = 0;
  };

  WeightedHypergraph(std::size_t n, std::size_t rank);

  EdgeHandle add(Hyperedge e, Weight w);
  /// Inserts under a caller-chosen handle; the handle must not be live.
  void add(EdgeHandle h, Hyperedge e, Weight w);
  void remove(EdgeHandle h);
  bool contains(EdgeHandle h) const { return edges_.contains(h); }
  const Entry& at(EdgeHandle h) const;

  std::size_t vertex_count() const noexcept { return n_; }
  std::size_t rank() const noexcept { return rank_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return edges_.empty(); }
  Weight total_weight() const noexcept { return total_weight_; }
  Weight max_weight() const;

  const std::map<EdgeHandle, Entry>& edges() const noexcept { return edges_; }

  /// Sorted list of vertices touched by at least one edge.
  std::vector<VertexId> support() const;

 private:
  void validate(const Hyperedge& e, Weight w) const;

  std::size_t n_;
  std::size_t rank_;
  std::uint64_t next_handle_ = 0;
  Weight total_weight_ = 0;
  std::map<EdgeHandle, Entry> edges_;
};

/// Sum of weights of edges fully inside `subset`, divided by |subset|.
Rational density(const WeightedHypergraph& g, std::span<const VertexId> subset);

/// Largest total weight carried by one vertex set (multiplicity in the
/// unweighted expansion). Zero on an empty graph.
Weight max_multiplicity(const WeightedHypergraph& g);

}  // namespace dsh

template <>
struct std::hash<dsh::EdgeHandle> {
  std::size_t operator()(dsh::EdgeHandle h) const noexcept { return std::hash<std::uint64_t>{}(dsh::to_underlying(h)); }
};
