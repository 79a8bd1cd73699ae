#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "dsh/binomial.hpp"
#include "dsh/core.hpp"
#include "dsh/udshp.hpp"

namespace dsh {

/// Largest eps <= delta/5 with (1-2eps)/(1+eps)^3 >= 1/(1+delta), by
/// bisection; delta/8 if none is found.
double epsilon_for_delta(double delta);

struct WdshpConfig {
  std::size_t n = 0;
  /// Upper bound on live weighted edges at any time.
  std::size_t m_bound = 0;
  std::size_t rank = 2;
  double delta = 0.5;
  /// Derived from delta when unset.
  std::optional<double> epsilon;
  Weight w_max = 1;
  double c = 8.0;
  std::uint64_t rng_seed = 0;
  /// Forwarded to every per-guess unweighted structure.
  double duplication_constant = 64.0;
  std::optional<std::size_t> duplication_override;
  SubsetMode subset_mode = SubsetMode::best_of_levels;

  double eps() const { return epsilon ? *epsilon : epsilon_for_delta(delta); }
};

/// Fully dynamic approximate densest subhypergraph for integer-weighted
/// hypergraphs. Every guess rho_i of the optimum gets an unweighted structure
/// fed with binomially sampled copies of each edge; the answer comes from
/// the largest guess whose sample still looks dense.
class Wdshp {
 public:
  explicit Wdshp(WdshpConfig config);

  EdgeHandle insert(const Hyperedge& edge, Weight weight);
  void erase(EdgeHandle handle);

  bool contains(EdgeHandle handle) const { return registry_.contains(handle); }
  std::size_t edge_count() const noexcept { return registry_.size(); }
  bool empty() const noexcept { return registry_.empty(); }

  /// Zero when empty.
  double max_density() const;
  /// Throws DomainError when empty or when no guess can answer.
  std::vector<VertexId> densest_subset() const;

  double epsilon() const noexcept { return eps_; }
  std::size_t guess_count() const noexcept { return guesses_.size(); }
  double guess(std::size_t i) const { return guesses_.at(i).rho; }
  double sampling_probability(std::size_t i) const { return guesses_.at(i).q; }
  /// Density reported by the unweighted structure behind guess i.
  double guess_density(std::size_t i) const;
  /// Unweighted copies currently stored for guess i.
  std::size_t guess_edge_count(std::size_t i) const;
  const Udshp& guess_structure(std::size_t i) const;
  /// Threshold a sampled density must reach for its guess to qualify.
  double threshold() const noexcept { return threshold_; }
  /// Largest qualifying guess, if any.
  std::optional<std::size_t> selected_guess() const;
  /// Structures are shared between guesses whose sampling probability is 1.
  std::size_t structure_count() const noexcept { return structures_.size(); }

  /// Weight class ceil(log_{1+eps} w) and its rounded weight floor((1+eps)^j).
  std::uint32_t weight_class(Weight w) const;
  std::int64_t class_weight(std::uint32_t j) const;

  /// One draw of the number of copies of a class-j edge for guess i.
  std::int64_t sample_count(std::size_t i, std::uint32_t j);

 private:
  struct Guess {
    double rho = 0;
    double q = 0;
    std::size_t structure = 0;
  };
  struct Placement {
    std::size_t structure;
    std::vector<EdgeHandle> copies;
  };

  WdshpConfig config_;
  double eps_;
  double log_n_;
  double threshold_;
  std::vector<Guess> guesses_;
  std::vector<std::unique_ptr<Udshp>> structures_;
  std::vector<std::size_t> structure_guess_;  // a representative guess per structure
  BinomialStreams streams_;
  std::uint64_t next_handle_ = 0;
  std::unordered_map<EdgeHandle, std::vector<Placement>> registry_;
};

}  // namespace dsh
