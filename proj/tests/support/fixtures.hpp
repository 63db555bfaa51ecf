#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "localecd/embedding.hpp"
#include "localecd/graph.hpp"
#include "localecd/partition.hpp"

namespace fixtures {

using localecd::Edge;
using localecd::Graph;
using localecd::Index;

/// A graph together with the edge list it was built from, so test oracles can
/// work from the edges without going through Graph.
struct Fixture {
  Index n = 0;
  std::vector<Edge> edges;
  Graph graph;
};

inline Fixture make(Index n, std::vector<Edge> edges) {
  Fixture f;
  f.n = n;
  f.edges = std::move(edges);
  f.graph = Graph::from_edges(n, f.edges);
  return f;
}

inline Fixture single_edge() { return make(2, {{0, 1}}); }
inline Fixture triangle() { return make(3, {{0, 1}, {1, 2}, {0, 2}}); }
inline Fixture path3() { return make(3, {{0, 1}, {1, 2}}); }
/// Two triangles {0,1,2} and {3,4,5} joined by the edge 2-3.
inline Fixture barbell() { return make(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}}); }

/// G(n, p) with optional integer weights in [1, max_weight]; resamples until
/// at least one edge exists.
inline Fixture erdos_renyi(Index n, double p, std::uint64_t seed, int max_weight = 1) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> weight(1, max_weight);
  for (;;) {
    std::vector<Edge> edges;
    for (Index u = 0; u < n; ++u)
      for (Index v = u + 1; v < n; ++v)
        if (coin(rng) < p) edges.push_back({u, v, static_cast<double>(weight(rng))});
    if (!edges.empty()) return make(n, std::move(edges));
  }
}

/// Sparse random graph with about n * avg_degree / 2 edges, built without the
/// quadratic pair loop.
inline Fixture sparse_random(Index n, double avg_degree, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Index> node(0, n - 1);
  const auto m = static_cast<std::size_t>(n * avg_degree / 2.0);
  std::vector<Edge> edges;
  edges.reserve(m);
  while (edges.size() < m) {
    const Index u = node(rng), v = node(rng);
    if (u != v) edges.push_back({u, v, 1.0});
  }
  return make(n, std::move(edges));
}

inline std::string data_path(const std::string& file) { return std::string(LOCALECD_TEST_DATA) + "/" + file; }

inline Graph zachary() { return localecd::load_edge_list(data_path("zachary.txt"), false); }

/// Dense adjacency from the raw edge list; a self-loop adds w to a_uu once.
inline std::vector<std::vector<double>> dense_adjacency(const Fixture& f) {
  std::vector<std::vector<double>> a(f.n, std::vector<double>(f.n, 0.0));
  for (const Edge& e : f.edges) {
    a[e.u][e.v] += e.weight;
    if (e.u != e.v) a[e.v][e.u] += e.weight;
  }
  return a;
}

/// Sum over all ordered pairs of [a_ij - d_i d_j / 2m] * s(i, j) / 2m.
template <typename Similarity>
double naive_quadratic_form(const std::vector<std::vector<double>>& a, Similarity&& s) {
  const std::size_t n = a.size();
  std::vector<double> d(n, 0.0);
  double two_m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (double w : a[i]) d[i] += w;
    two_m += d[i];
  }
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) q += (a[i][j] - d[i] * d[j] / two_m) * s(i, j);
  return q / two_m;
}

inline double naive_modularity(const Fixture& f, const std::vector<Index>& labels) {
  return naive_quadratic_form(dense_adjacency(f),
                              [&](std::size_t i, std::size_t j) { return labels[i] == labels[j] ? 1.0 : 0.0; });
}

inline double naive_objective(const std::vector<std::vector<double>>& a, const localecd::Embedding& e) {
  std::vector<std::vector<double>> dense(e.size(), std::vector<double>(e.dimension(), 0.0));
  for (Index i = 0; i < e.size(); ++i)
    for (const auto& entry : e[i]) dense[i][entry.index] = entry.value;
  return naive_quadratic_form(a, [&](std::size_t i, std::size_t j) {
    double s = 0.0;
    for (std::size_t t = 0; t < dense[i].size(); ++t) s += dense[i][t] * dense[j][t];
    return s;
  });
}

inline std::vector<Index> random_labels(Index n, Index communities, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Index> pick(0, communities - 1);
  std::vector<Index> out(n);
  for (auto& c : out) c = pick(rng);
  return out;
}

}  // namespace fixtures
