#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "localecd/graph.hpp"
#include "localecd/types.hpp"

namespace localecd {

/// Entries of the accumulator whose magnitude falls below this are dropped.
inline constexpr double kAccumulatorDropTolerance = 1e-13;

/// Keeps the k largest strictly positive coordinates of q and zeroes the rest.
/// Ties go to the lower coordinate index. The result is not normalized and is
/// empty when q has no positive coordinate. Runs a partial selection, so the
/// cost is O(card(q) log k).
SparseVector topk_plus(std::span<const Entry> q, int k);
SparseVector topk_plus(std::span<const double> q, int k);

/// e(t) in a space of dimension r. Throws std::domain_error when t >= r.
SparseVector basis(Index t, Index r);

/// Inner product by sorted merge.
double dot(std::span<const Entry> u, std::span<const Entry> v);
double squared_norm(std::span<const Entry> v);

/// v / ||v||. A single-entry vector normalizes to exactly 1.0.
SparseVector normalized(SparseVector v);

/// acc <- acc + scale * v, dropping entries whose magnitude falls below
/// kAccumulatorDropTolerance.
void axpy_into_accumulator(SparseVector& acc, double scale, std::span<const Entry> v);

/// Per-node nonnegative unit vectors with at most k nonzeros, living in a
/// growable community space of dimension r, together with
/// z = sum_j d_j v_j and a per-coordinate occupancy count.
///
/// Coordinates vacated by every node go on a LIFO free list and are handed
/// out again before the space grows. The space never exceeds n * k.
class Embedding {
 public:
  /// v_i = e(initial[i]); r starts at max(n, max initial + 1).
  Embedding(std::span<const double> degrees, int k, std::span<const Index> initial);
  /// v_i = e(i).
  static Embedding identity(std::span<const double> degrees, int k);

  Index size() const noexcept { return static_cast<Index>(sizes_.size()); }
  int k() const noexcept { return k_; }
  Index dimension() const noexcept { return static_cast<Index>(z_.size()); }

  std::span<const Entry> operator[](Index i) const {
    return {entries_.data() + static_cast<std::size_t>(i) * k_, sizes_[i]};
  }

  /// Replaces v_i and updates z and occupancy. `v` must be sorted, hold at
  /// most k entries, and stay inside the current dimension.
  void assign(Index i, std::span<const Entry> v);

  /// A coordinate nobody occupies. Reuses vacated coordinates first and grows
  /// the space by one otherwise; throws std::logic_error at the n * k bound.
  Index allocate_free_coordinate();

  double z(Index t) const { return z_[t]; }
  std::span<const double> z() const noexcept { return z_; }
  Index occupancy(Index t) const { return occupancy_[t]; }
  double degree(Index i) const { return degrees_[i]; }

  /// Recomputes z from scratch, returning the largest per-coordinate change.
  double refresh_z();

 private:
  void add_to_z(Index t, double delta);

  int k_;
  std::vector<double> degrees_;
  std::vector<Entry> entries_;
  std::vector<std::uint32_t> sizes_;
  std::vector<double> z_;
  std::vector<Index> occupancy_;
  std::vector<Index> free_;
};

/// One line per node: "label idx:val idx:val ...".
void write_embedding(std::ostream& out, const Graph& g, const Embedding& e);

}  // namespace localecd
