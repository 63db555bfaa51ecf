#include <string>

#include "localecd/cli.hpp"

namespace localecd::cli {

std::string version() {
#ifdef LOCALECD_VERSION
  return LOCALECD_VERSION;
#else
  return "unknown";
#endif
}

DatasetInfo describe_dataset(const Graph& g, const std::filesystem::path& path, bool weighted) {
  DatasetInfo info;
  info.name = path.stem().string();
  info.path = path.string();
  info.nodes = g.size();
  info.edges = g.edge_count();
  info.average_degree = g.size() > 0 ? 2.0 * static_cast<double>(info.edges) / g.size() : 0.0;
  info.weighted = weighted;
  return info;
}

std::string inner_rounds_name(const std::optional<std::size_t>& rounds) {
  return rounds ? std::to_string(*rounds) : "full";
}

nlohmann::json detect_report(const DatasetInfo& dataset, const RunConfig& cfg,
                             const DetectResult& result, double seconds) {
  using nlohmann::json;
  json iterations = json::array();
  for (std::size_t t = 0; t < result.trace.iterations.size(); ++t) {
    const IterationRecord& it = result.trace.iterations[t];
    json levels = json::array();
    for (const LevelRecord& level : it.levels) {
      levels.push_back({{"nodes", level.nodes},
                        {"communities", level.communities},
                        {"refined_communities", level.refined_communities},
                        {"modularity", level.modularity},
                        {"seconds", level.seconds}});
    }
    iterations.push_back(
        {{"index", t}, {"modularity", it.modularity}, {"seconds", it.seconds}, {"levels", levels}});
  }

  const ValidationStats& v = result.trace.validation;
  return {
      {"schema", kReportSchema},
      {"tool", {{"name", "localecd"}, {"version", version()}}},
      {"dataset",
       {{"name", dataset.name},
        {"path", dataset.path},
        {"nodes", dataset.nodes},
        {"edges", dataset.edges},
        {"average_degree", dataset.average_degree},
        {"weighted", dataset.weighted}}},
      {"config",
       {{"algorithm", to_string(cfg.algorithm)},
        {"k", cfg.k},
        {"inner_rounds", inner_rounds_name(cfg.inner_rounds)},
        {"iterations", cfg.iterations},
        {"seed", cfg.seed ? json(*cfg.seed) : json(nullptr)},
        {"validated", cfg.validated}}},
      {"result",
       {{"modularity", result.modularity},
        {"communities", result.partition.community_count()},
        {"seconds", seconds}}},
      {"iterations", iterations},
      {"validation",
       {{"enabled", cfg.validated},
        {"checks", v.checks},
        {"failures", v.failures},
        {"worst_margin", v.checks > 0 ? json(v.worst_margin) : json(nullptr)}}},
  };
}

}  // namespace localecd::cli
