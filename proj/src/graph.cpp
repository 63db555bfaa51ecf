#include "localecd/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>

namespace localecd {

Graph Graph::from_edges(Index n, std::span<const Edge> edges, std::vector<std::int64_t> labels) {
  struct Directed {
    Index from;
    Index to;
    double weight;
  };
  std::vector<Directed> entries;
  entries.reserve(2 * edges.size());
  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n) throw std::out_of_range("edge endpoint outside [0, n)");
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight))
      throw ValidationError("edge weight must be finite and nonnegative");
    if (e.weight == 0.0) continue;
    entries.push_back({e.u, e.v, e.weight});
    if (e.u != e.v) entries.push_back({e.v, e.u, e.weight});
  }
  // Stable order makes both directions of a repeated edge sum in the same sequence.
  std::stable_sort(entries.begin(), entries.end(), [](const Directed& a, const Directed& b) {
    return a.from != b.from ? a.from < b.from : a.to < b.to;
  });

  Graph g;
  g.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (std::size_t p = 0; p < entries.size();) {
    std::size_t q = p;
    double w = 0.0;
    while (q < entries.size() && entries[q].from == entries[p].from && entries[q].to == entries[p].to)
      w += entries[q++].weight;
    g.targets_.push_back(entries[p].to);
    g.weights_.push_back(w);
    ++g.offsets_[entries[p].from + 1];
    p = q;
  }
  for (Index i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
  g.labels_ = std::move(labels);
  g.finalize();
  return g;
}

Graph Graph::from_csr(std::vector<std::size_t> offsets, std::vector<Index> targets,
                      std::vector<double> weights, std::vector<std::int64_t> labels) {
  if (offsets.empty() || offsets.back() != targets.size() || targets.size() != weights.size())
    throw std::invalid_argument("inconsistent CSR arrays");
  Graph g;
  g.offsets_ = std::move(offsets);
  g.targets_ = std::move(targets);
  g.weights_ = std::move(weights);
  g.labels_ = std::move(labels);
  g.finalize();
  return g;
}

void Graph::finalize() {
  const Index n = static_cast<Index>(offsets_.size() - 1);
  degrees_.assign(n, 0.0);
  loops_.assign(n, 0.0);
  two_m_ = 0.0;
  for (Index i = 0; i < n; ++i) {
    double d = 0.0;
    for (std::size_t p = offsets_[i]; p < offsets_[i + 1]; ++p) {
      if (!(weights_[p] >= 0.0)) throw ValidationError("negative edge weight");
      if (targets_[p] >= n) throw std::out_of_range("neighbor index outside [0, n)");
      if (p > offsets_[i] && targets_[p] <= targets_[p - 1])
        throw std::invalid_argument("CSR rows must be sorted and duplicate-free");
      if (targets_[p] == i) loops_[i] = weights_[p];
      d += weights_[p];
    }
    degrees_[i] = d;
    two_m_ += d;
  }
  if (labels_.empty()) {
    labels_.resize(n);
    for (Index i = 0; i < n; ++i) labels_[i] = i;
  } else if (labels_.size() != n) {
    throw std::invalid_argument("label count differs from node count");
  }
}

std::size_t Graph::edge_count() const noexcept {
  std::size_t count = 0;
  for (Index i = 0; i < size(); ++i)
    for (Index j : neighbors(i))
      if (i <= j) ++count;
  return count;
}

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t p = 0;
  while (p < line.size()) {
    while (p < line.size() && std::isspace(static_cast<unsigned char>(line[p]))) ++p;
    std::size_t q = p;
    while (q < line.size() && !std::isspace(static_cast<unsigned char>(line[q]))) ++q;
    if (q > p) tokens.push_back(line.substr(p, q - p));
    p = q;
  }
  return tokens;
}

std::int64_t parse_node_id(std::string_view token, std::size_t line) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || value < 0)
    throw ParseError(line, "expected a nonnegative integer node id, got '" + std::string(token) + "'");
  return value;
}

double parse_weight(std::string_view token, std::size_t line) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(value))
    throw ParseError(line, "expected a numeric weight, got '" + std::string(token) + "'");
  return value;
}

}  // namespace

Graph load_edge_list(std::istream& in, bool weighted) {
  std::unordered_map<std::int64_t, Index> ids;
  std::vector<std::int64_t> labels;
  std::vector<Edge> edges;
  auto intern = [&](std::int64_t label) {
    auto [it, inserted] = ids.try_emplace(label, static_cast<Index>(labels.size()));
    if (inserted) labels.push_back(label);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = tokenize(line);
    if (tokens.empty() || tokens.front().front() == '#') continue;
    if (tokens.size() < 2 || tokens.size() > 3)
      throw ParseError(line_no, "expected 'u v' or 'u v w'");
    const std::int64_t u = parse_node_id(tokens[0], line_no);
    const std::int64_t v = parse_node_id(tokens[1], line_no);
    double w = 1.0;
    if (weighted && tokens.size() == 3) {
      w = parse_weight(tokens[2], line_no);
      if (w < 0.0)
        throw ValidationError("line " + std::to_string(line_no) + ": negative weight " +
                              std::string(tokens[2]));
    }
    const Index a = intern(u);
    const Index b = intern(v);
    edges.push_back({a, b, w});
  }
  if (in.bad()) throw std::runtime_error("read error");
  const auto n = static_cast<Index>(labels.size());
  return Graph::from_edges(n, edges, std::move(labels));
}

Graph load_edge_list(const std::filesystem::path& path, bool weighted) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return load_edge_list(in, weighted);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Index i = 0; i < g.size(); ++i) {
    auto nbr = g.neighbors(i);
    auto w = g.weights(i);
    for (std::size_t p = 0; p < nbr.size(); ++p)
      if (i <= nbr[p]) out << g.label(i) << ' ' << g.label(nbr[p]) << ' ' << w[p] << '\n';
  }
}

std::vector<std::tuple<std::int64_t, std::int64_t, double>> canonical_edges(const Graph& g) {
  std::vector<std::tuple<std::int64_t, std::int64_t, double>> out;
  for (Index i = 0; i < g.size(); ++i) {
    auto nbr = g.neighbors(i);
    auto w = g.weights(i);
    for (std::size_t p = 0; p < nbr.size(); ++p) {
      std::int64_t a = g.label(i), b = g.label(nbr[p]);
      if (a <= b) out.emplace_back(a, b, w[p]);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace localecd
