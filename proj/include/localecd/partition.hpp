#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "localecd/graph.hpp"
#include "localecd/types.hpp"

namespace localecd {

/// Node-to-community assignment with dense community ids.
///
/// Ids are always compacted to [0, community_count()) in order of first
/// appearance, so two partitions inducing the same grouping in the same node
/// order compare equal.
class Partition {
 public:
  Partition() = default;
  /// Accepts arbitrary labels and compacts them.
  explicit Partition(std::span<const Index> labels);

  static Partition singletons(Index n);
  static Partition single_community(Index n);

  Index size() const noexcept { return static_cast<Index>(assignment_.size()); }
  Index community_count() const noexcept { return count_; }
  Index operator[](Index i) const { return assignment_[i]; }
  std::span<const Index> assignment() const noexcept { return assignment_; }

  /// Member lists, each sorted by node index.
  std::vector<std::vector<Index>> members() const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<Index> assignment_;
  Index count_ = 0;
};

/// Newman modularity over ordered pairs, diagonal entries included.
/// Throws std::domain_error when the graph carries no weight.
double modularity(const Graph& g, const Partition& p);

/// Contracts each community to one node. Intra-community weight (ordered
/// pairs) becomes the diagonal, so degrees and two_m are preserved and
/// modularity(g, p) == modularity(aggregate(g, p), singletons).
Graph aggregate(const Graph& g, const Partition& p);

/// Whether the subgraph induced by community c is connected.
bool community_is_connected(const Graph& g, const Partition& p, Index c);

/// Splits every community into its connected components. Never lowers
/// modularity: components share no edges, so only null-model terms vanish.
Partition split_disconnected(const Graph& g, const Partition& p);

/// "label community" per line. Every node of g must be covered.
Partition read_partition(std::istream& in, const Graph& g);
/// One "label community" line per node, sorted by label.
void write_partition(std::ostream& out, const Graph& g, const Partition& p);

}  // namespace localecd
