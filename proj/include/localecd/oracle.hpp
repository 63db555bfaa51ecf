#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "localecd/graph.hpp"
#include "localecd/partition.hpp"
#include "localecd/types.hpp"

namespace localecd {

inline constexpr Index kDefaultOracleMaxNodes = 12;

/// Visits every set partition of {0..n-1} once as a restricted growth string:
/// label[0] = 0 and label[i] <= 1 + max(label[0..i-1]).
class SetPartitionEnumerator {
 public:
  explicit SetPartitionEnumerator(Index n);

  std::span<const Index> current() const noexcept { return labels_; }
  /// Advances to the next string; false once all have been visited.
  bool next();

 private:
  std::vector<Index> labels_;
  std::vector<Index> prefix_max_;
};

struct OracleResult {
  double modularity = 0.0;
  Partition partition;
  std::uint64_t partitions_visited = 0;
};

/// Exhaustive modularity maximization. Throws std::invalid_argument when
/// g.size() > max_n. Among equal optima the first in enumeration order wins;
/// the reported value is recomputed with modularity().
OracleResult brute_force_max_modularity(const Graph& g, Index max_n = kDefaultOracleMaxNodes);

/// Whether `claim` (a nonnegative unit vector with at most k nonzeros)
/// attains max q . u over that set, within `tolerance`. Compares against
/// every basis vector, every support of size <= k when dim(q) <= 12, and
/// `samples` random feasible vectors.
bool verify_subproblem_optimum(std::span<const double> q, int k, std::span<const Entry> claim,
                               double tolerance = 1e-12, std::size_t samples = 1000,
                               std::uint64_t seed = 1);

}  // namespace localecd
