#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "localecd/graph.hpp"
#include "localecd/locale.hpp"
#include "localecd/partition.hpp"

namespace localecd {

enum class Algorithm { louvain, leiden, locale };

std::string to_string(Algorithm a);
/// Throws std::invalid_argument on an unknown name.
Algorithm parse_algorithm(const std::string& name);

struct RunConfig {
  Algorithm algorithm = Algorithm::locale;
  int k = 8;
  /// Sweeps of the embedding phase per level; std::nullopt runs to convergence.
  std::optional<std::size_t> inner_rounds = 2;
  int iterations = 1;
  std::optional<std::uint64_t> seed;
  bool validated = false;
};

struct LevelRecord {
  Index nodes = 0;
  Index communities = 0;
  Index refined_communities = 0;
  /// Modularity of the flattened partition on the input graph.
  double modularity = 0.0;
  double seconds = 0.0;
};

struct IterationRecord {
  std::vector<LevelRecord> levels;
  double modularity = 0.0;
  double seconds = 0.0;
};

struct LevelTrace {
  std::vector<IterationRecord> iterations;
  ValidationStats validation;
};

struct DetectResult {
  Partition partition;
  double modularity = 0.0;
  LevelTrace trace;
};

/// Discrete local move: each popped node joins the neighboring community with
/// the largest modularity gain, or an empty community when every option is a
/// loss. Shares queue order, tie rules, acceptance tolerance and coordinate
/// recycling with the k = 1 embedding loop, so trajectories can be compared
/// move for move. Returns the compacted partition.
Partition greedy_local_move(const Graph& g, const Partition& init, const RunOptions& options = {},
                            RunStats* stats = nullptr, std::optional<std::size_t> max_sweeps = {});

struct RefineResult {
  Partition refined;
  Graph aggregated;
  /// p expressed on the aggregated nodes.
  Partition lifted;
  bool done = false;
};

/// Refines p by restricted rounding and contracts the refined groups. `done`
/// holds when nothing was merged, i.e. the aggregated graph has as many nodes
/// as g.
RefineResult refine_and_aggregate(const Graph& g, const Partition& p, const RunOptions& options = {});

/// Composes aggregation maps: node i goes to last[maps.back()[...maps[0][i]]].
Partition flatten(std::span<const Partition> maps, const Partition& last);

/// Multi-level driver. Iterations after the first start from the previous
/// flat partition.
DetectResult leiden_locale(const Graph& g, const RunConfig& cfg);

}  // namespace localecd
