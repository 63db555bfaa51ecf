#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <tuple>
#include <vector>

#include "localecd/types.hpp"

namespace localecd {

/// Undirected weighted edge. `u == v` denotes a self-loop.
struct Edge {
  Index u;
  Index v;
  double weight = 1.0;
};

/// Immutable symmetric weighted adjacency in compressed sparse row layout.
///
/// Row i holds (neighbor, weight) pairs sorted by neighbor id, with a diagonal
/// entry a_ii when node i has a self-loop. Degrees are plain row sums, so a
/// diagonal entry is counted once, and two_m() is the sum of all stored
/// entries (every ordered pair). Each node also carries its original label from
/// the input file so partitions can be reported in the caller's ids.
class Graph {
 public:
  Graph() = default;

  /// Builds from undirected edges over nodes [0, n). Duplicate edges are
  /// summed; a self-loop (u, u, w) stores a_uu = w.
  static Graph from_edges(Index n, std::span<const Edge> edges,
                          std::vector<std::int64_t> labels = {});

  /// Builds from a symmetric CSR. Rows must be sorted and duplicate-free.
  static Graph from_csr(std::vector<std::size_t> offsets, std::vector<Index> targets,
                        std::vector<double> weights, std::vector<std::int64_t> labels = {});

  Index size() const noexcept { return static_cast<Index>(degrees_.size()); }

  std::span<const Index> neighbors(Index i) const {
    return {targets_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::span<const double> weights(Index i) const {
    return {weights_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }

  double degree(Index i) const { return degrees_[i]; }
  std::span<const double> degrees() const noexcept { return degrees_; }
  double self_loop(Index i) const { return loops_[i]; }
  double two_m() const noexcept { return two_m_; }

  /// card(A): number of stored ordered entries, diagonal included.
  std::size_t entry_count() const noexcept { return targets_.size(); }
  /// Number of undirected edges, self-loops included.
  std::size_t edge_count() const noexcept;

  std::int64_t label(Index i) const { return labels_[i]; }
  std::span<const std::int64_t> labels() const noexcept { return labels_; }

 private:
  void finalize();

  std::vector<std::size_t> offsets_{0};
  std::vector<Index> targets_;
  std::vector<double> weights_;
  std::vector<double> degrees_;
  std::vector<double> loops_;
  std::vector<std::int64_t> labels_;
  double two_m_ = 0.0;
};

/// Reads a whitespace-separated edge list ("u v" or "u v w", '#' comments).
/// Node ids are remapped to 0..n-1 in order of first appearance. With
/// `weighted == false` any third column is ignored and every edge weighs 1.
Graph load_edge_list(std::istream& in, bool weighted);
Graph load_edge_list(const std::filesystem::path& path, bool weighted);

/// Writes each undirected edge once as "label_u label_v weight".
void write_edge_list(std::ostream& out, const Graph& g);

/// Edges as (label_u <= label_v, weight), sorted. Two graphs with equal
/// canonical edge lists are the same graph up to internal node numbering.
std::vector<std::tuple<std::int64_t, std::int64_t, double>> canonical_edges(const Graph& g);

}  // namespace localecd
