#include "localecd/leiden.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace localecd {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::louvain: return "louvain";
    case Algorithm::leiden: return "leiden";
    case Algorithm::locale: return "locale";
  }
  return "unknown";
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "louvain") return Algorithm::louvain;
  if (name == "leiden") return Algorithm::leiden;
  if (name == "locale") return Algorithm::locale;
  throw std::invalid_argument("unknown algorithm '" + name + "'");
}

namespace {

// Community totals and membership for the discrete local move. Mirrors the
// coordinate bookkeeping of Embedding with k = 1: totals drop to exactly zero
// below the accumulator tolerance, and emptied communities are reused LIFO.
class GreedyState {
 public:
  GreedyState(const Graph& g, const Partition& init)
      : g_(g), community_(init.assignment().begin(), init.assignment().end()) {
    const Index n = g.size();
    Index r = n;
    for (Index c : community_) r = std::max(r, c + 1);
    total_.assign(r, 0.0);
    members_.assign(r, 0);
    for (Index i = 0; i < n; ++i) {
      ++members_[community_[i]];
      add(community_[i], g.degree(i));
    }
    for (Index t = r; t-- > 0;)
      if (members_[t] == 0) free_.push_back(t);
  }

  Index community(Index i) const { return community_[i]; }
  std::span<const Index> communities() const { return community_; }

  void move(Index i, Index to) {
    const Index from = community_[i];
    const double d = g_.degree(i);
    add(from, -d);
    if (--members_[from] == 0) free_.push_back(from);
    community_[i] = to;
    ++members_[to];
    add(to, d);
  }

  Index take_empty() {
    while (!free_.empty()) {
      const Index t = free_.back();
      free_.pop_back();
      if (members_[t] == 0) return t;
    }
    if (total_.size() >= g_.size()) throw std::logic_error("no empty community available");
    total_.push_back(0.0);
    members_.push_back(0);
    return static_cast<Index>(total_.size() - 1);
  }

  double total(Index c) const { return total_[c]; }
  Index dimension() const { return static_cast<Index>(total_.size()); }

  void refresh() {
    std::vector<double> fresh(total_.size(), 0.0);
    for (Index i = 0; i < g_.size(); ++i) fresh[community_[i]] += g_.degree(i) * 1.0;
    for (double& t : fresh)
      if (std::abs(t) < kAccumulatorDropTolerance) t = 0.0;
    total_ = std::move(fresh);
  }

 private:
  void add(Index c, double delta) {
    total_[c] += delta;
    if (std::abs(total_[c]) < kAccumulatorDropTolerance) total_[c] = 0.0;
  }

  const Graph& g_;
  std::vector<Index> community_;
  std::vector<double> total_;
  std::vector<Index> members_;
  std::vector<Index> free_;
};

std::optional<std::uint64_t> derive_seed(const std::optional<std::uint64_t>& seed, std::uint64_t a,
                                         std::uint64_t b) {
  if (!seed) return std::nullopt;
  std::seed_seq mix{static_cast<std::uint32_t>(*seed), static_cast<std::uint32_t>(*seed >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)};
  std::uint32_t out[2];
  mix.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

Partition greedy_local_move(const Graph& g, const Partition& init, const RunOptions& options,
                            RunStats* stats_out, std::optional<std::size_t> max_sweeps) {
  if (init.size() != g.size()) throw std::invalid_argument("partition does not cover the graph");
  const Index n = g.size();
  RunStats stats;
  GreedyState state(g, init);
  if (n == 0) {
    if (stats_out != nullptr) *stats_out = stats;
    return init;
  }

  std::vector<double> acc;
  std::vector<char> mark;
  std::vector<Index> touched;

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

    if (acc.size() < state.dimension()) {
      acc.resize(state.dimension(), 0.0);
      mark.resize(state.dimension(), 0);
    }
    const Index own = state.community(i);
    auto nbr = g.neighbors(i);
    auto w = g.weights(i);
    auto touch = [&](Index c) {
      if (!mark[c]) {
        mark[c] = 1;
        acc[c] = 0.0;
        touched.push_back(c);
      }
    };
    for (std::size_t p = 0; p < nbr.size(); ++p) {
      if (nbr[p] == i) continue;
      const Index c = state.community(nbr[p]);
      touch(c);
      acc[c] += w[p] * 1.0;
    }
    touch(own);

    // Gain of joining c, up to the common factor 1/m and the cost of leaving.
    const double d = g.degree(i);
    const double scale = g.two_m() > 0.0 ? d / g.two_m() : 0.0;
    double own_gain = 0.0;
    double best = -std::numeric_limits<double>::infinity();
    Index best_c = own;
    std::sort(touched.begin(), touched.end());
    for (Index c : touched) {
      const double gc = acc[c] - scale * (c == own ? state.total(c) - d : state.total(c));
      if (c == own) own_gain = gc;
      if (gc > best) {
        best = gc;
        best_c = c;
      }
      mark[c] = 0;
    }
    touched.clear();

    bool to_empty = false;
    Index target = best_c;
    if (best == 0.0) {
      target = own_gain == 0.0 ? own : best_c;
    } else if (best < 0.0) {
      to_empty = true;
    }
    const double gain = to_empty ? -own_gain : (target == own ? own_gain : best) - own_gain;
    const bool accepted = gain > kRelativeGainTolerance * d;
    double delta_q = 0.0;
    if (accepted) {
      if (to_empty) target = state.take_empty();
      state.move(i, target);
      delta_q = g.two_m() > 0.0 ? 2.0 * gain / g.two_m() : 0.0;
      ++stats.accepted;
      for (Index j : nbr) {
        if (j == i || queued[j]) continue;
        queued[j] = 1;
        ring[(head + count) % n] = j;
        ++count;
      }
      if (options.trace != nullptr) options.trace->push_back({i, {{own, 1.0}}, {{target, 1.0}}, gain});
      if (++since_refresh == n) {
        state.refresh();
        since_refresh = 0;
      }
    }

    if (delta_q >= kStagnationThreshold) {
      stagnant = 0;
    } else if (++stagnant >= n) {
      stagnated = true;
    }
    if (stats.pops % n == 0) ++stats.sweeps;
    if (stagnated) break;
  }
  if (stats.pops % n != 0) ++stats.sweeps;
  stats.converged = count == 0 || stagnated;
  if (stats_out != nullptr) *stats_out = stats;
  return Partition(state.communities());
}

RefineResult refine_and_aggregate(const Graph& g, const Partition& p, const RunOptions& options) {
  Partition refined = restricted_rounding(g, p, options);
  const bool done = refined.community_count() == g.size();
  std::vector<Index> lifted(refined.community_count(), 0);
  for (Index i = 0; i < g.size(); ++i) lifted[refined[i]] = p[i];
  Graph aggregated = aggregate(g, refined);
  return {std::move(refined), std::move(aggregated), Partition(lifted), done};
}

Partition flatten(std::span<const Partition> maps, const Partition& last) {
  const Index n = maps.empty() ? last.size() : maps.front().size();
  std::vector<Index> out(n);
  for (Index i = 0; i < n; ++i) {
    Index c = i;
    for (const Partition& m : maps) c = m[c];
    out[i] = last[c];
  }
  return Partition(out);
}

DetectResult leiden_locale(const Graph& g, const RunConfig& cfg) {
  if (cfg.k < 1) throw std::invalid_argument("k must be positive");
  if (cfg.iterations < 1) throw std::invalid_argument("iterations must be positive");
  if (cfg.inner_rounds && *cfg.inner_rounds == 0) throw std::invalid_argument("inner rounds must be positive");
  if (!(g.two_m() > 0.0)) throw std::domain_error("graph has no edges");

  DetectResult result;
  Partition flat = Partition::singletons(g.size());
  for (int iteration = 0; iteration < cfg.iterations; ++iteration) {
    const auto iteration_start = std::chrono::steady_clock::now();
    IterationRecord record;
    Graph current = g;
    Partition init = flat;
    std::vector<Partition> maps;
    Partition last;

    for (std::uint64_t level = 0;; ++level) {
      const auto level_start = std::chrono::steady_clock::now();
      RunOptions options;
      options.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(iteration), level);
      options.validated = cfg.validated;

      Partition p;
      if (cfg.algorithm == Algorithm::locale) {
        RunStats embed_stats;
        RunStats round_stats;
        Embedding e = locale_embeddings(current, init, cfg.k, cfg.inner_rounds, options, &embed_stats);
        RunOptions rounding_options = options;
        rounding_options.validated = false;
        p = locale_rounding(current, e, rounding_options, &round_stats);
        auto& v = result.trace.validation;
        const auto& s = embed_stats.validation;
        if (s.checks > 0) {
          v.worst_margin = v.checks == 0 ? s.worst_margin : std::min(v.worst_margin, s.worst_margin);
          v.checks += s.checks;
          v.failures += s.failures;
          v.projected_sq_sum += s.projected_sq_sum;
        }
      } else {
        p = greedy_local_move(current, init, options);
      }
      // The phase never returns a partition worse than the one it started from.
      if (modularity(current, p) < modularity(current, init)) p = init;

      Partition refined = p;
      Graph aggregated;
      Partition lifted;
      bool done = p.community_count() == current.size();
      if (cfg.algorithm != Algorithm::louvain) {
        RefineResult rr = refine_and_aggregate(current, p, options);
        done = rr.done;
        refined = std::move(rr.refined);
        aggregated = std::move(rr.aggregated);
        lifted = std::move(rr.lifted);
      } else if (!done) {
        aggregated = aggregate(current, p);
        lifted = Partition::singletons(p.community_count());
      }

      LevelRecord level_record;
      level_record.nodes = current.size();
      level_record.communities = p.community_count();
      level_record.refined_communities = refined.community_count();
      level_record.modularity = modularity(g, flatten(maps, p));
      level_record.seconds = seconds_since(level_start);
      record.levels.push_back(level_record);

      if (done) {
        last = std::move(p);
        break;
      }
      maps.push_back(std::move(refined));
      current = std::move(aggregated);
      init = std::move(lifted);
    }

    flat = flatten(maps, last);
    if (cfg.algorithm != Algorithm::louvain) flat = split_disconnected(g, flat);
    record.modularity = modularity(g, flat);
    record.seconds = seconds_since(iteration_start);
    result.trace.iterations.push_back(std::move(record));
  }
  result.modularity = modularity(g, flat);
  result.partition = std::move(flat);
  return result;
}

}  // namespace localecd
