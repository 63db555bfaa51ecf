#include "localecd/partition.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace localecd {

namespace {
constexpr Index kUnset = std::numeric_limits<Index>::max();
}

Partition::Partition(std::span<const Index> labels) : assignment_(labels.size()) {
  std::unordered_map<Index, Index> remap;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = remap.try_emplace(labels[i], count_);
    if (inserted) ++count_;
    assignment_[i] = it->second;
  }
}

Partition Partition::singletons(Index n) {
  std::vector<Index> ids(n);
  std::iota(ids.begin(), ids.end(), Index{0});
  return Partition(ids);
}

Partition Partition::single_community(Index n) {
  std::vector<Index> ids(n, 0);
  return Partition(ids);
}

std::vector<std::vector<Index>> Partition::members() const {
  std::vector<std::vector<Index>> out(count_);
  for (Index i = 0; i < size(); ++i) out[assignment_[i]].push_back(i);
  return out;
}

double modularity(const Graph& g, const Partition& p) {
  if (p.size() != g.size()) throw std::invalid_argument("partition does not cover the graph");
  const double two_m = g.two_m();
  if (!(two_m > 0.0)) throw std::domain_error("modularity is undefined for a graph without edges");
  std::vector<double> totals(p.community_count(), 0.0);
  double internal = 0.0;
  for (Index i = 0; i < g.size(); ++i) {
    const Index c = p[i];
    totals[c] += g.degree(i);
    auto nbr = g.neighbors(i);
    auto w = g.weights(i);
    for (std::size_t q = 0; q < nbr.size(); ++q)
      if (p[nbr[q]] == c) internal += w[q];
  }
  double expected = 0.0;
  for (double t : totals) expected += t * t;
  return internal / two_m - expected / (two_m * two_m);
}

Graph aggregate(const Graph& g, const Partition& p) {
  if (p.size() != g.size()) throw std::invalid_argument("partition does not cover the graph");
  const Index count = p.community_count();
  const auto groups = p.members();

  std::vector<std::size_t> offsets(static_cast<std::size_t>(count) + 1, 0);
  std::vector<Index> targets;
  std::vector<double> weights;
  targets.reserve(g.entry_count());
  weights.reserve(g.entry_count());

  std::vector<double> row(count, 0.0);
  std::vector<char> seen(count, 0);
  std::vector<Index> touched;
  for (Index c = 0; c < count; ++c) {
    for (Index i : groups[c]) {
      auto nbr = g.neighbors(i);
      auto w = g.weights(i);
      for (std::size_t q = 0; q < nbr.size(); ++q) {
        const Index d = p[nbr[q]];
        if (!seen[d]) {
          seen[d] = 1;
          touched.push_back(d);
        }
        row[d] += w[q];
      }
    }
    std::sort(touched.begin(), touched.end());
    for (Index d : touched) {
      targets.push_back(d);
      weights.push_back(row[d]);
      row[d] = 0.0;
      seen[d] = 0;
    }
    touched.clear();
    offsets[c + 1] = targets.size();
  }
  return Graph::from_csr(std::move(offsets), std::move(targets), std::move(weights));
}

bool community_is_connected(const Graph& g, const Partition& p, Index c) {
  if (c >= p.community_count()) throw std::domain_error("unknown community id");
  std::vector<Index> stack;
  std::vector<char> visited(g.size(), 0);
  Index members = 0;
  for (Index i = 0; i < g.size(); ++i) {
    if (p[i] != c) continue;
    if (members++ == 0) {
      stack.push_back(i);
      visited[i] = 1;
    }
  }
  Index reached = 0;
  while (!stack.empty()) {
    const Index i = stack.back();
    stack.pop_back();
    ++reached;
    auto nbr = g.neighbors(i);
    auto w = g.weights(i);
    for (std::size_t q = 0; q < nbr.size(); ++q) {
      const Index j = nbr[q];
      if (p[j] == c && w[q] > 0.0 && !visited[j]) {
        visited[j] = 1;
        stack.push_back(j);
      }
    }
  }
  return reached == members;
}

Partition split_disconnected(const Graph& g, const Partition& p) {
  std::vector<Index> component(g.size(), kUnset);
  std::vector<Index> stack;
  Index next = 0;
  for (Index s = 0; s < g.size(); ++s) {
    if (component[s] != kUnset) continue;
    component[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const Index i = stack.back();
      stack.pop_back();
      auto nbr = g.neighbors(i);
      auto w = g.weights(i);
      for (std::size_t q = 0; q < nbr.size(); ++q) {
        const Index j = nbr[q];
        if (component[j] == kUnset && p[j] == p[i] && w[q] > 0.0) {
          component[j] = next;
          stack.push_back(j);
        }
      }
    }
    ++next;
  }
  return Partition(component);
}

Partition read_partition(std::istream& in, const Graph& g) {
  std::unordered_map<std::int64_t, Index> node_of;
  for (Index i = 0; i < g.size(); ++i) node_of.emplace(g.label(i), i);

  std::vector<Index> labels(g.size(), kUnset);
  std::unordered_map<std::int64_t, Index> community_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first) || first.front() == '#') continue;
    std::int64_t node = 0, community = 0;
    std::string second, extra;
    auto parse = [&](const std::string& s, std::int64_t& v) {
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      return ec == std::errc{} && ptr == s.data() + s.size() && v >= 0;
    };
    if (!(fields >> second) || (fields >> extra) || !parse(first, node) || !parse(second, community))
      throw ParseError(line_no, "expected 'node community'");
    auto it = node_of.find(node);
    if (it == node_of.end()) throw ValidationError("partition names unknown node " + std::to_string(node));
    if (labels[it->second] != kUnset)
      throw ValidationError("node " + std::to_string(node) + " assigned twice");
    auto [cit, inserted] = community_ids.try_emplace(community, static_cast<Index>(community_ids.size()));
    labels[it->second] = cit->second;
  }
  for (Index i = 0; i < g.size(); ++i)
    if (labels[i] == kUnset)
      throw ValidationError("partition is missing node " + std::to_string(g.label(i)));
  return Partition(labels);
}

void write_partition(std::ostream& out, const Graph& g, const Partition& p) {
  std::vector<Index> order(g.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return g.label(a) < g.label(b); });
  for (Index i : order) out << g.label(i) << ' ' << p[i] << '\n';
}

}  // namespace localecd
