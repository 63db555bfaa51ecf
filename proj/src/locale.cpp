#include "localecd/locale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace localecd {

namespace {

struct Scratch {
  std::vector<double>& acc;
  std::vector<char>& mark;
  std::vector<Index>& touched;
};

double value_at(std::span<const Entry> v, Index t) {
  auto it = std::lower_bound(v.begin(), v.end(), t,
                             [](const Entry& e, Index index) { return e.index < index; });
  return it != v.end() && it->index == t ? it->value : 0.0;
}

SparseVector compute_gradient(const Graph& g, const Embedding& e, Index i, const Partition* restrict_to,
                              Scratch s) {
  if (s.acc.size() < e.dimension()) {
    s.acc.resize(e.dimension(), 0.0);
    s.mark.resize(e.dimension(), 0);
  }
  auto touch = [&](Index t) {
    if (!s.mark[t]) {
      s.mark[t] = 1;
      s.acc[t] = 0.0;
      s.touched.push_back(t);
    }
  };
  auto nbr = g.neighbors(i);
  auto w = g.weights(i);
  for (std::size_t p = 0; p < nbr.size(); ++p) {
    const Index j = nbr[p];
    if (j == i) continue;
    if (restrict_to != nullptr && (*restrict_to)[j] != (*restrict_to)[i]) continue;
    for (const Entry& entry : e[j]) {
      touch(entry.index);
      s.acc[entry.index] += w[p] * entry.value;
    }
  }
  const auto own = e[i];
  for (const Entry& entry : own) touch(entry.index);

  std::sort(s.touched.begin(), s.touched.end());
  const double d = g.degree(i);
  const double c = g.two_m() > 0.0 ? d / g.two_m() : 0.0;
  SparseVector out;
  out.reserve(s.touched.size());
  for (Index t : s.touched) {
    out.push_back({t, s.acc[t] - c * (e.z(t) - d * value_at(own, t))});
    s.mark[t] = 0;
  }
  s.touched.clear();
  return out;
}

double squared_distance(std::span<const Entry> a, std::span<const Entry> b) {
  return squared_norm(a) + squared_norm(b) - 2.0 * dot(a, b);
}

// ||P(v + q) - v||^2 for one node, q = gradient / 2m.
double projected_step_sq(const Graph& g, std::span<const Entry> v, std::span<const Entry> gradient,
                         int k) {
  const double scale = g.two_m() > 0.0 ? 1.0 / g.two_m() : 0.0;
  SparseVector x;
  x.reserve(gradient.size());
  for (const Entry& q : gradient) x.push_back({q.index, value_at(v, q.index) + scale * q.value});
  const Choice p = closed_form_maximizer(x, k, v);
  return p.free ? squared_norm(v) + 1.0 : squared_distance(p.v, v);
}

}  // namespace

Choice closed_form_maximizer(std::span<const Entry> x, int k, std::span<const Entry> previous) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  SparseVector top = topk_plus(x, k);
  if (!top.empty()) return {normalized(std::move(top)), false};

  double best = -std::numeric_limits<double>::infinity();
  for (const Entry& entry : x) best = std::max(best, entry.value);
  if (!(best >= 0.0)) return {{}, true};

  // best == 0: prefer the coordinate the node already weighted most.
  Index chosen = 0;
  double chosen_weight = -1.0;
  for (const Entry& entry : x) {
    if (entry.value != 0.0) continue;
    const double weight = value_at(previous, entry.index);
    if (weight > chosen_weight) {
      chosen = entry.index;
      chosen_weight = weight;
    }
  }
  return {{{chosen, 1.0}}, false};
}

DescentCheck descent_inequality_check(const Graph& g, const UpdateResult& u, int k) {
  DescentCheck check;
  check.lhs = projected_step_sq(g, u.before, u.gradient, k);
  check.rhs = 2.0 * (u.accepted ? u.delta_q : 0.0);
  check.holds = check.lhs <= check.rhs + kDescentSlack;
  return check;
}

LocaleOptimizer::LocaleOptimizer(const Graph& g, Embedding& e, int k, const Partition* restrict_to,
                                 bool singleton_only)
    : g_(g), e_(e), k_(k), restrict_(restrict_to), singleton_only_(singleton_only) {
  if (k < 1 || k > e.k()) throw std::invalid_argument("k must lie in [1, embedding k]");
  if (e.size() != g.size()) throw std::invalid_argument("embedding does not match the graph");
  if (restrict_to != nullptr && restrict_to->size() != g.size())
    throw std::invalid_argument("restriction partition does not cover the graph");
  if (singleton_only && k != 1) throw std::invalid_argument("singleton-only moves require k = 1");
}

SparseVector LocaleOptimizer::gradient(Index i) {
  return compute_gradient(g_, e_, i, restrict_, {acc_, mark_, touched_});
}

UpdateResult LocaleOptimizer::update(Index i, bool validated, ValidationStats* stats) {
  UpdateResult r;
  r.node = i;
  r.before.assign(e_[i].begin(), e_[i].end());
  r.forced = r.before.size() > static_cast<std::size_t>(k_);
  if (singleton_only_ && !r.forced && e_.occupancy(r.before.front().index) > 1) {
    r.after = r.before;
    return r;
  }

  r.gradient = gradient(i);
  Choice choice = closed_form_maximizer(r.gradient, k_, r.before);
  const double old_value = dot(r.gradient, r.before);
  r.gain = choice.free ? -old_value : dot(r.gradient, choice.v) - old_value;
  r.accepted = r.forced || r.gain > kRelativeGainTolerance * g_.degree(i);

  if (r.accepted) {
    // A free coordinate is requested only when the maximum is negative, which
    // needs a shared own coordinate, so the space is below n * k here.
    if (choice.free) choice.v = {{e_.allocate_free_coordinate(), 1.0}};
    e_.assign(i, choice.v);
    r.after = std::move(choice.v);
    r.delta_q = g_.two_m() > 0.0 ? 2.0 * r.gain / g_.two_m() : 0.0;
  } else {
    r.after = r.before;
  }

  if (validated && !r.forced && stats != nullptr) {
    const DescentCheck check = descent_inequality_check(g_, r, k_);
    const double margin = check.rhs + kDescentSlack - check.lhs;
    if (stats->checks == 0 || margin < stats->worst_margin) stats->worst_margin = margin;
    ++stats->checks;
    if (!check.holds) ++stats->failures;
    stats->projected_sq_sum += check.lhs;
  }
  return r;
}

RunStats LocaleOptimizer::run(std::optional<std::size_t> max_sweeps, const RunOptions& options) {
  RunStats stats;
  const Index n = g_.size();
  if (n == 0) {
    stats.converged = true;
    return stats;
  }

  std::vector<Index> ring(n);
  std::iota(ring.begin(), ring.end(), Index{0});
  if (options.seed) {
    std::mt19937_64 rng(*options.seed);
    std::shuffle(ring.begin(), ring.end(), rng);
  }
  std::vector<char> queued(n, 1);
  std::size_t head = 0;
  std::size_t count = n;

  const std::size_t max_pops =
      max_sweeps ? *max_sweeps * static_cast<std::size_t>(n) : std::numeric_limits<std::size_t>::max();
  std::size_t stagnant = 0;
  std::size_t since_refresh = 0;
  bool stagnated = false;

  while (count > 0 && stats.pops < max_pops) {
    const Index i = ring[head];
    head = head + 1 == n ? 0 : head + 1;
    --count;
    queued[i] = 0;
    ++stats.pops;

    UpdateResult r = update(i, options.validated, &stats.validation);
    if (r.accepted) {
      ++stats.accepted;
      auto nbr = g_.neighbors(i);
      for (Index j : nbr) {
        if (j == i || queued[j] || !same_group(i, j)) continue;
        queued[j] = 1;
        ring[(head + count) % n] = j;
        ++count;
      }
      if (options.trace != nullptr)
        options.trace->push_back({i, std::move(r.before), std::move(r.after), r.gain});
      if (++since_refresh == n) {
        e_.refresh_z();
        since_refresh = 0;
      }
    }

    if (r.forced || r.delta_q >= kStagnationThreshold) {
      stagnant = 0;
    } else if (++stagnant >= n) {
      stagnated = true;
    }
    if (stats.pops % n == 0) {
      ++stats.sweeps;
      if (options.on_sweep) options.on_sweep(stats.sweeps, e_);
    }
    if (stagnated) break;
  }
  if (stats.pops % n != 0) ++stats.sweeps;
  stats.converged = count == 0 || stagnated;
  return stats;
}

SparseVector gradient(const Graph& g, Embedding& e, Index i, const Partition* restrict_to) {
  return LocaleOptimizer(g, e, e.k(), restrict_to).gradient(i);
}

UpdateResult locale_update(const Graph& g, Embedding& e, Index i, int k, const Partition* restrict_to) {
  return LocaleOptimizer(g, e, k, restrict_to).update(i);
}

Embedding locale_embeddings(const Graph& g, const Partition& init, int k,
                            std::optional<std::size_t> rounds, const RunOptions& options,
                            RunStats* stats) {
  if (init.size() != g.size()) throw std::invalid_argument("partition does not cover the graph");
  if (rounds && *rounds == 0) throw std::invalid_argument("rounds must be positive");
  Embedding e(g.degrees(), k, init.assignment());
  RunStats s = LocaleOptimizer(g, e, k).run(rounds, options);
  if (stats != nullptr) *stats = s;
  return e;
}

Partition partition_of_supports(const Embedding& e) {
  std::vector<Index> labels(e.size());
  for (Index i = 0; i < e.size(); ++i) {
    if (e[i].size() != 1) throw std::logic_error("vector is not a single coordinate");
    labels[i] = e[i].front().index;
  }
  return Partition(labels);
}

Partition locale_rounding(const Graph& g, const Embedding& e, const RunOptions& options,
                          RunStats* stats) {
  Embedding work = e;
  RunStats s = LocaleOptimizer(g, work, 1).run(std::nullopt, options);
  if (stats != nullptr) *stats = s;
  return partition_of_supports(work);
}

Partition restricted_rounding(const Graph& g, const Partition& p, const RunOptions& options,
                              RunStats* stats) {
  Embedding work = Embedding::identity(g.degrees(), 1);
  RunStats s = LocaleOptimizer(g, work, 1, &p, true).run(std::nullopt, options);
  if (stats != nullptr) *stats = s;
  return partition_of_supports(work);
}

double embedding_objective(const Graph& g, const Embedding& e) {
  const double two_m = g.two_m();
  if (!(two_m > 0.0)) throw std::domain_error("objective is undefined for a graph without edges");
  double observed = 0.0;
  for (Index i = 0; i < g.size(); ++i) {
    auto nbr = g.neighbors(i);
    auto w = g.weights(i);
    for (std::size_t p = 0; p < nbr.size(); ++p) observed += w[p] * dot(e[i], e[nbr[p]]);
  }
  std::vector<double> dense(e.dimension(), 0.0);
  for (Index i = 0; i < g.size(); ++i)
    for (const Entry& entry : e[i]) dense[entry.index] += g.degree(i) * entry.value;
  double expected = 0.0;
  for (double value : dense) expected += value * value;
  return observed / two_m - expected / (two_m * two_m);
}

double projected_gradient_norm(const Graph& g, const Embedding& e, int k) {
  std::vector<double> acc;
  std::vector<char> mark;
  std::vector<Index> touched;
  double total = 0.0;
  for (Index i = 0; i < g.size(); ++i) {
    const SparseVector q = compute_gradient(g, e, i, nullptr, {acc, mark, touched});
    total += projected_step_sq(g, e[i], q, k);
  }
  return std::sqrt(total);
}

}  // namespace localecd
