#include "localecd/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace localecd {

namespace {

bool by_value_then_index(const Entry& a, const Entry& b) {
  return a.value != b.value ? a.value > b.value : a.index < b.index;
}

SparseVector select_top(SparseVector positives, int k) {
  const auto keep = static_cast<std::size_t>(k);
  if (positives.size() > keep) {
    std::partial_sort(positives.begin(), positives.begin() + static_cast<std::ptrdiff_t>(keep),
                      positives.end(), by_value_then_index);
    positives.resize(keep);
  }
  std::sort(positives.begin(), positives.end(),
            [](const Entry& a, const Entry& b) { return a.index < b.index; });
  return positives;
}

}  // namespace

SparseVector topk_plus(std::span<const Entry> q, int k) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  SparseVector positives;
  for (const Entry& e : q)
    if (e.value > 0.0) positives.push_back(e);
  return select_top(std::move(positives), k);
}

SparseVector topk_plus(std::span<const double> q, int k) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  SparseVector positives;
  for (std::size_t t = 0; t < q.size(); ++t)
    if (q[t] > 0.0) positives.push_back({static_cast<Index>(t), q[t]});
  return select_top(std::move(positives), k);
}

SparseVector basis(Index t, Index r) {
  if (t >= r) throw std::domain_error("basis coordinate outside the community space");
  return {{t, 1.0}};
}

double dot(std::span<const Entry> u, std::span<const Entry> v) {
  double s = 0.0;
  std::size_t a = 0, b = 0;
  while (a < u.size() && b < v.size()) {
    if (u[a].index < v[b].index) {
      ++a;
    } else if (v[b].index < u[a].index) {
      ++b;
    } else {
      s += u[a++].value * v[b++].value;
    }
  }
  return s;
}

double squared_norm(std::span<const Entry> v) {
  double s = 0.0;
  for (const Entry& e : v) s += e.value * e.value;
  return s;
}

SparseVector normalized(SparseVector v) {
  if (v.empty()) throw std::domain_error("cannot normalize the zero vector");
  if (v.size() == 1) {
    v.front().value = 1.0;
    return v;
  }
  // Scaling by the largest entry first keeps the norm finite and nonzero.
  double largest = 0.0;
  for (const Entry& e : v) largest = std::max(largest, e.value);
  for (Entry& e : v) e.value /= largest;
  const double norm = std::sqrt(squared_norm(v));
  for (Entry& e : v) e.value /= norm;
  // Entries that underflow to zero leave the support.
  std::erase_if(v, [](const Entry& e) { return !(e.value > 0.0); });
  return v;
}

void axpy_into_accumulator(SparseVector& acc, double scale, std::span<const Entry> v) {
  SparseVector out;
  out.reserve(acc.size() + v.size());
  auto emit = [&](Index t, double value) {
    if (std::abs(value) >= kAccumulatorDropTolerance) out.push_back({t, value});
  };
  std::size_t a = 0, b = 0;
  while (a < acc.size() || b < v.size()) {
    if (b == v.size() || (a < acc.size() && acc[a].index < v[b].index)) {
      emit(acc[a].index, acc[a].value);
      ++a;
    } else if (a == acc.size() || v[b].index < acc[a].index) {
      emit(v[b].index, scale * v[b].value);
      ++b;
    } else {
      emit(acc[a].index, acc[a].value + scale * v[b].value);
      ++a;
      ++b;
    }
  }
  acc = std::move(out);
}

Embedding::Embedding(std::span<const double> degrees, int k, std::span<const Index> initial)
    : k_(k), degrees_(degrees.begin(), degrees.end()) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  if (initial.size() != degrees.size()) throw std::invalid_argument("one initial coordinate per node");
  const std::size_t n = degrees.size();
  std::size_t r = n;
  for (Index t : initial) r = std::max<std::size_t>(r, static_cast<std::size_t>(t) + 1);
  if (n > 0 && r > n * static_cast<std::size_t>(k))
    throw std::invalid_argument("initial coordinates exceed the n * k bound");

  entries_.assign(n * static_cast<std::size_t>(k), Entry{0, 0.0});
  sizes_.assign(n, 1);
  z_.assign(r, 0.0);
  occupancy_.assign(r, 0);
  for (std::size_t i = 0; i < n; ++i) {
    entries_[i * static_cast<std::size_t>(k)] = {initial[i], 1.0};
    ++occupancy_[initial[i]];
    add_to_z(initial[i], degrees_[i]);
  }
  for (std::size_t t = r; t-- > 0;)
    if (occupancy_[t] == 0) free_.push_back(static_cast<Index>(t));
}

Embedding Embedding::identity(std::span<const double> degrees, int k) {
  std::vector<Index> initial(degrees.size());
  for (std::size_t i = 0; i < initial.size(); ++i) initial[i] = static_cast<Index>(i);
  return Embedding(degrees, k, initial);
}

void Embedding::add_to_z(Index t, double delta) {
  double& value = z_[t];
  value += delta;
  if (std::abs(value) < kAccumulatorDropTolerance) value = 0.0;
}

void Embedding::assign(Index i, std::span<const Entry> v) {
  if (v.empty() || v.size() > static_cast<std::size_t>(k_))
    throw std::invalid_argument("vector cardinality must lie in [1, k]");
  for (std::size_t p = 0; p < v.size(); ++p) {
    if (v[p].index >= dimension()) throw std::out_of_range("coordinate outside the community space");
    if (!(v[p].value > 0.0)) throw std::invalid_argument("stored values must be positive");
    if (p > 0 && v[p].index <= v[p - 1].index) throw std::invalid_argument("indices must increase");
  }
  const double d = degrees_[i];
  Entry* slot = entries_.data() + static_cast<std::size_t>(i) * k_;
  for (std::uint32_t p = 0; p < sizes_[i]; ++p) {
    const Index t = slot[p].index;
    add_to_z(t, -d * slot[p].value);
    if (--occupancy_[t] == 0) free_.push_back(t);
  }
  for (std::size_t p = 0; p < v.size(); ++p) {
    slot[p] = v[p];
    ++occupancy_[v[p].index];
    add_to_z(v[p].index, d * v[p].value);
  }
  sizes_[i] = static_cast<std::uint32_t>(v.size());
}

Index Embedding::allocate_free_coordinate() {
  while (!free_.empty()) {
    const Index t = free_.back();
    free_.pop_back();
    // Entries can go stale when a caller assigns directly onto a free coordinate.
    if (occupancy_[t] == 0) return t;
  }
  if (static_cast<std::size_t>(dimension()) >= static_cast<std::size_t>(size()) * k_)
    throw std::logic_error("community space exhausted: r would exceed n * k");
  z_.push_back(0.0);
  occupancy_.push_back(0);
  return dimension() - 1;
}

double Embedding::refresh_z() {
  std::vector<double> fresh(z_.size(), 0.0);
  for (Index i = 0; i < size(); ++i)
    for (const Entry& e : (*this)[i]) fresh[e.index] += degrees_[i] * e.value;
  double drift = 0.0;
  for (std::size_t t = 0; t < fresh.size(); ++t) {
    if (std::abs(fresh[t]) < kAccumulatorDropTolerance) fresh[t] = 0.0;
    drift = std::max(drift, std::abs(fresh[t] - z_[t]));
  }
  z_ = std::move(fresh);
  return drift;
}

void write_embedding(std::ostream& out, const Graph& g, const Embedding& e) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Index i = 0; i < e.size(); ++i) {
    out << g.label(i);
    for (const Entry& entry : e[i]) out << ' ' << entry.index << ':' << entry.value;
    out << '\n';
  }
}

}  // namespace localecd
