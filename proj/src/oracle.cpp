#include "localecd/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace localecd {

SetPartitionEnumerator::SetPartitionEnumerator(Index n) : labels_(n, 0), prefix_max_(n, 0) {}

bool SetPartitionEnumerator::next() {
  const Index n = static_cast<Index>(labels_.size());
  // Rightmost position that can still grow: label[i] <= max(label[0..i-1]).
  for (Index i = n; i-- > 1;) {
    if (labels_[i] <= prefix_max_[i - 1]) {
      ++labels_[i];
      prefix_max_[i] = std::max(prefix_max_[i - 1], labels_[i]);
      for (Index j = i + 1; j < n; ++j) {
        labels_[j] = 0;
        prefix_max_[j] = prefix_max_[i];
      }
      return true;
    }
  }
  return false;
}

namespace {

struct Search {
  Index n;
  std::vector<double> b;  // row-major modularity matrix a_ij - d_i d_j / 2m
  std::vector<Index> labels;
  std::vector<Index> best_labels;
  double best = -std::numeric_limits<double>::infinity();
  std::uint64_t visited = 0;

  void dfs(Index i, Index used, double value) {
    if (i == n) {
      ++visited;
      if (value > best) {
        best = value;
        best_labels = labels;
      }
      return;
    }
    for (Index c = 0; c <= used && c < n; ++c) {
      labels[i] = c;
      double delta = b[static_cast<std::size_t>(i) * n + i];
      for (Index j = 0; j < i; ++j)
        if (labels[j] == c) delta += 2.0 * b[static_cast<std::size_t>(i) * n + j];
      dfs(i + 1, c == used ? used + 1 : used, value + delta);
    }
  }
};

}  // namespace

OracleResult brute_force_max_modularity(const Graph& g, Index max_n) {
  const Index n = g.size();
  if (n > max_n)
    throw std::invalid_argument("oracle limited to " + std::to_string(max_n) + " nodes, graph has " +
                                std::to_string(n));
  const double two_m = g.two_m();
  if (!(two_m > 0.0)) throw std::domain_error("modularity is undefined for a graph without edges");

  Search s;
  s.n = n;
  s.b.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j)
      s.b[static_cast<std::size_t>(i) * n + j] = -g.degree(i) * g.degree(j) / two_m;
    auto nbr = g.neighbors(i);
    auto w = g.weights(i);
    for (std::size_t p = 0; p < nbr.size(); ++p) s.b[static_cast<std::size_t>(i) * n + nbr[p]] += w[p];
  }
  s.labels.assign(n, 0);
  if (n == 0) {
    return {0.0, Partition(), 1};
  }
  s.labels[0] = 0;
  s.dfs(1, 1, s.b[0]);

  OracleResult result;
  result.partition = Partition(s.best_labels);
  result.modularity = modularity(g, result.partition);
  result.partitions_visited = s.visited;
  return result;
}

namespace {

double best_on_support(std::span<const double> q, std::span<const Index> support) {
  double positive_sq = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (Index t : support) {
    if (q[t] > 0.0) positive_sq += q[t] * q[t];
    best = std::max(best, q[t]);
  }
  return positive_sq > 0.0 ? std::sqrt(positive_sq) : best;
}

void for_each_support(Index dim, int k, std::vector<Index>& chosen, Index start,
                      std::span<const double> q, double& best) {
  if (!chosen.empty()) best = std::max(best, best_on_support(q, chosen));
  if (chosen.size() == static_cast<std::size_t>(k)) return;
  for (Index t = start; t < dim; ++t) {
    chosen.push_back(t);
    for_each_support(dim, k, chosen, t + 1, q, best);
    chosen.pop_back();
  }
}

}  // namespace

bool verify_subproblem_optimum(std::span<const double> q, int k, std::span<const Entry> claim,
                               double tolerance, std::size_t samples, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  const auto dim = static_cast<Index>(q.size());
  if (claim.empty() || claim.size() > static_cast<std::size_t>(k)) return false;
  double norm_sq = 0.0;
  double claimed = 0.0;
  for (std::size_t p = 0; p < claim.size(); ++p) {
    if (claim[p].index >= dim || !(claim[p].value > 0.0)) return false;
    if (p > 0 && claim[p].index <= claim[p - 1].index) return false;
    norm_sq += claim[p].value * claim[p].value;
    claimed += q[claim[p].index] * claim[p].value;
  }
  if (std::abs(norm_sq - 1.0) > 1e-9) return false;

  double best = -std::numeric_limits<double>::infinity();
  for (Index t = 0; t < dim; ++t) best = std::max(best, q[t]);
  if (dim <= 12) {
    std::vector<Index> chosen;
    for_each_support(dim, k, chosen, 0, q, best);
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Index> coords(dim);
  for (Index t = 0; t < dim; ++t) coords[t] = t;
  for (std::size_t s = 0; s < samples && dim > 0; ++s) {
    std::shuffle(coords.begin(), coords.end(), rng);
    const std::size_t card = 1 + rng() % std::min<std::size_t>(static_cast<std::size_t>(k), dim);
    double value = 0.0;
    double sq = 0.0;
    std::vector<double> u(card);
    for (double& x : u) {
      x = unit(rng) + 1e-12;
      sq += x * x;
    }
    for (std::size_t p = 0; p < card; ++p) value += q[coords[p]] * u[p] / std::sqrt(sq);
    best = std::max(best, value);
  }
  return claimed >= best - tolerance;
}

}  // namespace localecd
