#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "localecd/embedding.hpp"

using namespace localecd;

namespace {

SparseVector dense_topk(std::vector<double> q, int k) { return topk_plus(std::span<const double>(q), k); }

void check_unit_feasible(std::span<const Entry> v, int k) {
  CHECK(v.size() <= static_cast<std::size_t>(k));
  CHECK_FALSE(v.empty());
  for (std::size_t p = 0; p < v.size(); ++p) {
    CHECK(v[p].value > 0.0);
    if (p > 0) CHECK(v[p - 1].index < v[p].index);
  }
  CHECK(std::abs(squared_norm(v) - 1.0) <= 1e-9);
}

void check_z(const Embedding& e) {
  std::vector<double> fresh(e.dimension(), 0.0);
  std::vector<Index> occupied(e.dimension(), 0);
  for (Index i = 0; i < e.size(); ++i) {
    for (const Entry& entry : e[i]) {
      fresh[entry.index] += e.degree(i) * entry.value;
      ++occupied[entry.index];
    }
  }
  for (Index t = 0; t < e.dimension(); ++t) {
    CHECK(std::abs(fresh[t] - e.z(t)) <= 1e-8);
    CHECK(occupied[t] == e.occupancy(t));
  }
}

}  // namespace

TEST_CASE("topk_plus golden values") {
  CHECK(dense_topk({-1, 3}, 2) == SparseVector{{1, 3.0}});
  CHECK(dense_topk({-1, -2}, 1).empty());
  CHECK(dense_topk({5, 1, 3, 2}, 2) == SparseVector{{0, 5.0}, {2, 3.0}});
  CHECK(dense_topk({2, 2, 1}, 1) == SparseVector{{0, 2.0}});
}

TEST_CASE("topk_plus sparse input matches dense input") {
  const SparseVector q = {{1, 0.5}, {4, -2.0}, {6, 0.5}, {9, 3.0}};
  CHECK(topk_plus(q, 2) == SparseVector{{1, 0.5}, {9, 3.0}});
  CHECK(topk_plus(q, 8) == SparseVector{{1, 0.5}, {6, 0.5}, {9, 3.0}});
  CHECK_THROWS_AS(topk_plus(q, 0), std::invalid_argument);
}

TEST_CASE("topk_plus properties on random vectors") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 500; ++trial) {
    const int k = 1 + static_cast<int>(rng() % 6);
    std::vector<double> q(1 + rng() % 12);
    for (double& x : q) x = normal(rng);
    const SparseVector top = dense_topk(q, k);
    CHECK(topk_plus(top, k) == top);
    CHECK(top.size() <= static_cast<std::size_t>(k));
    double kept = 0.0, positive = 0.0;
    for (const Entry& e : top) {
      CHECK(e.value > 0.0);
      CHECK(e.value == q[e.index]);
      kept += e.value;
    }
    for (double x : q) positive += std::max(0.0, x);
    CHECK(kept <= positive);
    if (!top.empty()) check_unit_feasible(normalized(top), k);
  }
}

TEST_CASE("basis vectors") {
  CHECK(basis(0, 3) == SparseVector{{0, 1.0}});
  CHECK(squared_norm(basis(2, 3)) == 1.0);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j) CHECK(dot(basis(i, 4), basis(j, 4)) == (i == j ? 1.0 : 0.0));
  CHECK_THROWS_AS(basis(3, 3), std::domain_error);
}

TEST_CASE("dot products") {
  const SparseVector u = {{0, 0.6}, {1, 0.8}};
  CHECK(dot(u, u) == doctest::Approx(1.0));
  CHECK(dot(basis(0, 3), basis(2, 3)) == 0.0);
  CHECK(dot(u, SparseVector{{1, 0.8}, {2, 0.6}}) == doctest::Approx(0.64));
}

TEST_CASE("normalization") {
  CHECK(normalized({{4, 7.5}}) == SparseVector{{4, 1.0}});
  const SparseVector v = normalized({{0, 3.0}, {2, 4.0}});
  CHECK(v[0].value == doctest::Approx(0.6));
  CHECK(v[1].value == doctest::Approx(0.8));
  CHECK_THROWS_AS(normalized({}), std::domain_error);
}

TEST_CASE("accumulator updates") {
  SparseVector acc;
  axpy_into_accumulator(acc, 2.0, basis(1, 3));
  CHECK(acc == SparseVector{{1, 2.0}});
  axpy_into_accumulator(acc, -2.0, basis(1, 3));
  CHECK(acc.empty());
  acc = {{0, 1.0}};
  axpy_into_accumulator(acc, 1.0, SparseVector{{0, 0.6}, {1, 0.8}});
  REQUIRE(acc.size() == 2);
  CHECK(acc[0].index == 0);
  CHECK(acc[0].value == doctest::Approx(1.6));
  CHECK(acc[1] == Entry{1, 0.8});
}

TEST_CASE("coordinate allocation reuses vacated coordinates first") {
  const std::vector<double> degrees(5, 1.0);
  Embedding e = Embedding::identity(degrees, 2);
  const SparseVector moved = {{4, 1.0}};
  e.assign(3, moved);
  CHECK(e.occupancy(3) == 0);
  CHECK(e.allocate_free_coordinate() == 3);
}

TEST_CASE("coordinate allocation grows the space when everything is occupied") {
  const std::vector<double> degrees(4, 2.0);
  Embedding e = Embedding::identity(degrees, 2);
  CHECK(e.dimension() == 4);
  CHECK(e.allocate_free_coordinate() == 4);
  CHECK(e.dimension() == 5);
}

TEST_CASE("coordinate allocation stops at n * k") {
  const std::vector<double> degrees(3, 1.0);
  Embedding e = Embedding::identity(degrees, 1);
  CHECK_THROWS_AS(e.allocate_free_coordinate(), std::logic_error);
}

TEST_CASE("initial coordinates from a partition") {
  const std::vector<double> degrees = {1.0, 2.0, 3.0};
  const Index initial[] = {0, 0, 2};
  Embedding e(degrees, 4, initial);
  CHECK(e.z(0) == 3.0);
  CHECK(e.z(1) == 0.0);
  CHECK(e.z(2) == 3.0);
  CHECK(e.occupancy(0) == 2);
  CHECK(e.allocate_free_coordinate() == 1);
  const Index too_far[] = {0, 0, 12};
  CHECK_THROWS_AS(Embedding(degrees, 4, too_far), std::invalid_argument);
}

TEST_CASE("assign rejects infeasible vectors") {
  const std::vector<double> degrees(3, 1.0);
  Embedding e = Embedding::identity(degrees, 2);
  const SparseVector too_many = {{0, 0.5}, {1, 0.5}, {2, 0.5}};
  const SparseVector unsorted = {{1, 0.6}, {0, 0.8}};
  const SparseVector outside = {{7, 1.0}};
  const SparseVector zero = {{0, 0.0}};
  CHECK_THROWS_AS(e.assign(0, too_many), std::invalid_argument);
  CHECK_THROWS_AS(e.assign(0, unsorted), std::invalid_argument);
  CHECK_THROWS_AS(e.assign(0, outside), std::out_of_range);
  CHECK_THROWS_AS(e.assign(0, zero), std::invalid_argument);
  CHECK_THROWS_AS(e.assign(0, SparseVector{}), std::invalid_argument);
}

TEST_CASE("z and occupancy stay consistent under random updates") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  for (int k : {1, 2, 4, 8}) {
    std::vector<double> degrees(20);
    for (double& d : degrees) d = std::floor(10 * unit(rng));
    Embedding e = Embedding::identity(degrees, k);
    for (int step = 0; step < 2000; ++step) {
      const auto i = static_cast<Index>(rng() % e.size());
      std::vector<double> dense(e.dimension(), 0.0);
      const std::size_t card = 1 + rng() % k;
      for (std::size_t p = 0; p < card; ++p) dense[rng() % e.dimension()] = unit(rng);
      if (rng() % 5 == 0) {
        try {
          const Index t = e.allocate_free_coordinate();
          if (t >= dense.size()) dense.resize(t + 1, 0.0);
          dense[t] = unit(rng);
        } catch (const std::logic_error&) {
          CHECK(e.dimension() == e.size() * static_cast<Index>(k));
        }
      }
      SparseVector v = normalized(topk_plus(std::span<const double>(dense), k));
      check_unit_feasible(v, k);
      e.assign(i, v);
      CHECK(e.dimension() <= e.size() * static_cast<Index>(k));
    }
    check_z(e);
    CHECK(e.refresh_z() <= 1e-8);
    check_z(e);
  }
}

TEST_CASE("embedding dump format") {
  const auto f = fixtures::single_edge();
  Embedding e = Embedding::identity(f.graph.degrees(), 2);
  const SparseVector v = {{0, 0.6}, {1, 0.8}};
  e.assign(1, v);
  std::ostringstream out;
  write_embedding(out, f.graph, e);
  CHECK(out.str() == "0 0:1\n1 0:0.59999999999999998 1:0.80000000000000004\n");
}
