#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "localecd/graph.hpp"
#include "localecd/leiden.hpp"

namespace localecd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kReportSchema = 1;

/// Environment variable that turns on validated mode for detect when set to 1.
inline constexpr const char* kValidatedEnv = "LOCALECD_VALIDATED";

std::string version();

struct DatasetInfo {
  std::string name;
  std::string path;
  Index nodes = 0;
  std::size_t edges = 0;
  double average_degree = 0.0;
  bool weighted = false;
};

DatasetInfo describe_dataset(const Graph& g, const std::filesystem::path& path, bool weighted);

/// JSON report for one detect run; the layout is documented in docs/report_schema.md.
nlohmann::json detect_report(const DatasetInfo& dataset, const RunConfig& cfg,
                             const DetectResult& result, double seconds);

/// "2", "full" or any positive sweep count.
std::string inner_rounds_name(const std::optional<std::size_t>& rounds);

/// Entry point shared by the binary and the tests. `args` excludes argv[0].
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace localecd::cli
