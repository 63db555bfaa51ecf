#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "localecd/embedding.hpp"
#include "localecd/graph.hpp"
#include "localecd/partition.hpp"
#include "localecd/types.hpp"

namespace localecd {

/// Objective increases below this, measured in modularity units, count toward
/// the stagnation stop.
inline constexpr double kStagnationThreshold = 1e-8;
/// An update is applied only when its unscaled gain exceeds this times d_i.
inline constexpr double kRelativeGainTolerance = 1e-12;
/// Slack allowed in the per-update descent inequality.
inline constexpr double kDescentSlack = 1e-9;

/// Result of maximizing x . u over nonnegative unit vectors u with at most k
/// nonzeros, where x is given on a candidate set and every other coordinate is
/// known to be <= 0. `free` means the maximizer is an unoccupied coordinate.
struct Choice {
  SparseVector v;
  bool free = false;
};

/// Closed-form maximizer. With a positive entry: normalized topk_plus(x, k).
/// Otherwise the best candidate wins; a strictly negative maximum yields a free
/// coordinate (value 0); zero ties go to the largest previous weight, then the
/// lowest index.
Choice closed_form_maximizer(std::span<const Entry> x, int k, std::span<const Entry> previous);

/// One node visit of the optimizer.
struct UpdateResult {
  Index node = 0;
  SparseVector before;
  SparseVector after;
  /// Unscaled gradient over the candidate coordinates.
  SparseVector gradient;
  /// g . (after - before) with the unscaled gradient.
  double gain = 0.0;
  bool accepted = false;
  /// The node held more than k entries, so the update was applied regardless of gain.
  bool forced = false;
  /// Modularity change implied by the update: 2 gain / 2m.
  double delta_q = 0.0;
};

struct DescentCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
};

/// ||P(v + q) - v||^2 <= 2 dQ + slack with q = gradient / 2m, for a
/// non-forced update. An unoccupied maximizer contributes ||e_free - v||^2 = 2.
DescentCheck descent_inequality_check(const Graph& g, const UpdateResult& u, int k);

struct ValidationStats {
  std::size_t checks = 0;
  std::size_t failures = 0;
  /// Smallest rhs + slack - lhs observed; negative means a failure.
  double worst_margin = 0.0;
  /// Sum over updates of ||P(v_i + q_i) - v_i||^2.
  double projected_sq_sum = 0.0;
};

struct RunStats {
  std::size_t pops = 0;
  std::size_t accepted = 0;
  std::size_t sweeps = 0;
  /// Stopped on an empty queue or on stagnation rather than the sweep limit.
  bool converged = false;
  ValidationStats validation;
};

struct Move {
  Index node;
  SparseVector from;
  SparseVector to;
  double gain;
};

struct RunOptions {
  /// Shuffles the initial queue order when set.
  std::optional<std::uint64_t> seed;
  /// Runs the descent inequality on every non-forced update.
  bool validated = false;
  /// Receives every applied update in order.
  std::vector<Move>* trace = nullptr;
  /// Called after each completed sweep of n pops.
  std::function<void(std::size_t sweep, const Embedding&)> on_sweep;
};

/// Block coordinate ascent over an embedding. Holds the ring queue, the
/// stagnation counter and scratch space; the embedding is updated in place.
///
/// With `restrict_to`, gradients sum only over neighbors in the same community
/// of that partition while z stays global. With `singleton_only`, a node moves
/// only while it is the sole occupant of its coordinate (k must be 1).
class LocaleOptimizer {
 public:
  LocaleOptimizer(const Graph& g, Embedding& e, int k, const Partition* restrict_to = nullptr,
                  bool singleton_only = false);

  /// (sum_{j != i} a_ij v_j) - (d_i / 2m)(z - d_i v_i) on the coordinates held by
  /// i or its (restricted) neighbors, sorted by index. Omitted coordinates are
  /// either free (value 0) or occupied only by non-neighbors (value <= 0).
  SparseVector gradient(Index i);

  /// Applies the closed-form update to node i when it raises the objective.
  UpdateResult update(Index i, bool validated = false, ValidationStats* stats = nullptr);

  /// Runs the queue until it empties, `max_sweeps` sweeps pass, or n
  /// consecutive pops stagnate. std::nullopt means no sweep limit.
  RunStats run(std::optional<std::size_t> max_sweeps, const RunOptions& options = {});

 private:
  bool same_group(Index i, Index j) const {
    return restrict_ == nullptr || (*restrict_)[i] == (*restrict_)[j];
  }

  const Graph& g_;
  Embedding& e_;
  int k_;
  const Partition* restrict_;
  bool singleton_only_;
  std::vector<double> acc_;
  std::vector<char> mark_;
  std::vector<Index> touched_;
};

/// Unscaled gradient of node i; see LocaleOptimizer::gradient.
SparseVector gradient(const Graph& g, Embedding& e, Index i, const Partition* restrict_to = nullptr);

/// One closed-form update of node i with cardinality bound k.
UpdateResult locale_update(const Graph& g, Embedding& e, Index i, int k,
                           const Partition* restrict_to = nullptr);

/// v_i = e(init[i]), then the queue loop. `rounds` = std::nullopt runs to convergence.
Embedding locale_embeddings(const Graph& g, const Partition& init, int k,
                            std::optional<std::size_t> rounds, const RunOptions& options = {},
                            RunStats* stats = nullptr);

/// The k = 1 loop started from `e`, run to convergence. Every vector is
/// collapsed to one coordinate; the result groups nodes by that coordinate.
Partition locale_rounding(const Graph& g, const Embedding& e, const RunOptions& options = {},
                          RunStats* stats = nullptr);

/// k = 1 loop from singletons in which nodes join only neighbors of their own
/// community in p and never leave a non-singleton group. The result refines p
/// and every group induces a connected subgraph.
Partition restricted_rounding(const Graph& g, const Partition& p, const RunOptions& options = {},
                              RunStats* stats = nullptr);

/// Partition formed by the single support index of every vector.
Partition partition_of_supports(const Embedding& e);

/// (1/2m) sum_ij [a_ij - d_i d_j / 2m] v_i . v_j with z recomputed from scratch.
double embedding_objective(const Graph& g, const Embedding& e);

/// sqrt(sum_i ||P(v_i + q_i) - v_i||^2) with q_i the scaled gradient.
double projected_gradient_norm(const Graph& g, const Embedding& e, int k);

}  // namespace localecd
