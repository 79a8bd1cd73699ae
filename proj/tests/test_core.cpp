#include <doctest.h>

#include <vector>

#include "dsh/core.hpp"

using namespace dsh;

TEST_CASE("hyperedge is canonical") {
  Hyperedge e{5, 1, 3};
  CHECK(std::vector<VertexId>(e.begin(), e.end()) == std::vector<VertexId>{1, 3, 5});
  CHECK(e.size() == 3);
  CHECK(e.contains(3));
  CHECK_FALSE(e.contains(2));
  CHECK(Hyperedge{2, 1} == Hyperedge{1, 2});
  CHECK(to_string(e) == "{1,3,5}");
  CHECK_THROWS_AS(Hyperedge(std::vector<VertexId>{}), UsageError);
  CHECK_THROWS_AS((Hyperedge{1, 2, 1}), UsageError);
}

TEST_CASE("rational arithmetic") {
  const Rational a(6, 4);
  CHECK(a.num() == 3);
  CHECK(a.den() == 2);
  CHECK(to_string(a) == "3/2");
  CHECK(Rational(4, 3) > Rational(5, 4));
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(0, 7) == Rational(0, 1));
  CHECK(a.to_double() == doctest::Approx(1.5));
  CHECK_THROWS_AS(Rational(1, 0), DomainError);
  CHECK_THROWS_AS(Rational(-1, 2), DomainError);
}

TEST_CASE("log2 clamp") {
  CHECK(log2_clamped(1.0) == 1.0);
  CHECK(log2_clamped(0.0) == 1.0);
  CHECK(log2_clamped(2.0) == 1.0);
  CHECK(log2_clamped(1024.0) == doctest::Approx(10.0));
}

TEST_CASE("weighted hypergraph bookkeeping") {
  WeightedHypergraph g(6, 3);
  const EdgeHandle a = g.add({0, 1}, 4);
  const EdgeHandle b = g.add({0, 1}, 2);
  const EdgeHandle c = g.add({2, 3, 4}, 1);
  CHECK(a != b);
  CHECK(g.edge_count() == 3);
  CHECK(g.total_weight() == 7);
  CHECK(g.max_weight() == 4);
  CHECK(g.support() == std::vector<VertexId>{0, 1, 2, 3, 4});
  CHECK(max_multiplicity(g) == 6);

  g.remove(b);
  CHECK(g.total_weight() == 5);
  CHECK(max_multiplicity(g) == 4);
  CHECK_FALSE(g.contains(b));
  CHECK(g.at(c).weight == 1);

  CHECK_THROWS_AS(g.add({0, 6}, 1), UsageError);
  CHECK_THROWS_AS(g.add({0, 1, 2, 3}, 1), UsageError);
  CHECK_THROWS_AS(g.add({0, 1}, 0), UsageError);
  CHECK_THROWS_AS(g.remove(b), UsageError);
  CHECK_THROWS_AS(g.add(a, Hyperedge{0, 2}, 1), UsageError);

  g.add(EdgeHandle{99}, Hyperedge{3, 4}, 2);
  CHECK(g.at(EdgeHandle{99}).edge == Hyperedge{3, 4});
}

TEST_CASE("density of a vertex set") {
  WeightedHypergraph g(5, 3);
  g.add({0, 1}, 1);
  g.add({1, 2}, 1);
  g.add({0, 2}, 1);
  g.add({0, 1, 2}, 1);
  g.add({2, 3}, 7);
  const std::vector<VertexId> tri{0, 1, 2};
  CHECK(density(g, tri) == Rational(4, 3));
  const std::vector<VertexId> with_dups{2, 1, 0, 1};
  CHECK(density(g, with_dups) == Rational(4, 3));
  const std::vector<VertexId> lone{4};
  CHECK(density(g, lone) == Rational(0, 1));
  CHECK_THROWS_AS(density(g, std::vector<VertexId>{}), DomainError);
  CHECK_THROWS_AS(density(g, std::vector<VertexId>{9}), DomainError);
  CHECK(max_multiplicity(WeightedHypergraph(3, 2)) == 0);
}
