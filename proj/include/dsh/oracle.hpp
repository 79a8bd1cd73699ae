#pragma once

#include <vector>

#include "dsh/core.hpp"

namespace dsh {

struct OracleResult {
  std::vector<VertexId> best_set;  // sorted
  Rational best_density;
};

/// Largest support the exhaustive oracle accepts.
inline constexpr std::size_t kOracleMaxSupport = 24;

/// Exact densest subset by enumerating every nonempty subset of the support
/// (vertices touched by some edge). Ties go to the lexicographically smallest
/// vertex list. Throws DomainError when the graph is empty and UsageError
/// when the support exceeds kOracleMaxSupport.
OracleResult exact_densest_bruteforce(const WeightedHypergraph& g);

/// Same contract, computed by walking subsets in Gray-code order with an
/// incrementally maintained induced weight. Independent of the bitmask path.
OracleResult exact_densest_graycode(const WeightedHypergraph& g);

/// Peels the vertex of minimum weighted degree (ties by id) until none remain
/// and returns the densest intermediate set. Throws DomainError when empty.
OracleResult greedy_peel(const WeightedHypergraph& g);

}  // namespace dsh
