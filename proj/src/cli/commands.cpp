#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "localecd/cli.hpp"
#include "localecd/embedding.hpp"
#include "localecd/leiden.hpp"
#include "localecd/locale.hpp"
#include "localecd/oracle.hpp"
#include "localecd/partition.hpp"

namespace localecd::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string format_q(double q) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", q);
  return buf;
}

std::optional<std::size_t> parse_inner_rounds(const std::string& text) {
  if (text == "full") return std::nullopt;
  std::size_t used = 0;
  unsigned long value = 0;
  try {
    value = std::stoul(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || value == 0)
    throw std::invalid_argument("--inner-rounds expects a positive integer or 'full'");
  return static_cast<std::size_t>(value);
}

bool env_validated() {
  const char* value = std::getenv(kValidatedEnv);
  return value != nullptr && std::string(value) == "1";
}

// Writes to `path`, or to `fallback` when path is empty.
template <typename Writer>
void write_to(const std::string& path, std::ostream& fallback, Writer&& writer) {
  if (path.empty()) {
    writer(fallback);
    return;
  }
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write " + path);
  writer(file);
  if (!file) throw std::runtime_error("write failed for " + path);
}

struct DetectArgs {
  std::string input;
  std::string algo = "locale";
  int k = 8;
  std::string inner_rounds = "2";
  int iterations = 1;
  std::optional<std::uint64_t> seed;
  std::string output;
  std::string report;
  bool validated = false;
  bool weighted = false;
};

int cmd_detect(const DetectArgs& a, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  cfg.algorithm = parse_algorithm(a.algo);
  cfg.k = a.k;
  cfg.inner_rounds = parse_inner_rounds(a.inner_rounds);
  cfg.iterations = a.iterations;
  cfg.seed = a.seed;
  cfg.validated = a.validated || env_validated();

  const Graph g = load_edge_list(a.input, a.weighted);
  const auto start = Clock::now();
  const DetectResult result = leiden_locale(g, cfg);
  const double seconds = seconds_since(start);

  write_to(a.output, out, [&](std::ostream& s) { write_partition(s, g, result.partition); });
  if (!a.report.empty()) {
    const auto report = detect_report(describe_dataset(g, a.input, a.weighted), cfg, result, seconds);
    write_to(a.report, out, [&](std::ostream& s) { s << std::setw(2) << report << '\n'; });
  }
  std::ostream& summary = a.output.empty() ? err : out;
  summary << "modularity " << format_q(result.modularity) << " communities "
          << result.partition.community_count() << " seconds " << seconds << '\n';
  if (cfg.validated && result.trace.validation.failures > 0) {
    err << "validated mode: " << result.trace.validation.failures << " of "
        << result.trace.validation.checks << " descent checks failed\n";
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_modularity(const std::string& input, const std::string& partition_path, bool weighted,
                   std::ostream& out) {
  const Graph g = load_edge_list(input, weighted);
  std::ifstream in(partition_path);
  if (!in) throw std::runtime_error("cannot open " + partition_path);
  const Partition p = read_partition(in, g);
  out << format_q(modularity(g, p)) << '\n';
  return kExitOk;
}

int cmd_oracle(const std::string& input, Index max_n, bool weighted, std::ostream& out,
               std::ostream& err) {
  const Graph g = load_edge_list(input, weighted);
  if (g.size() > max_n) {
    err << "graph has " << g.size() << " nodes, above --max-n " << max_n
        << "; the search visits Bell(n) partitions, so raise --max-n only for small graphs "
           "or use 'detect' instead\n";
    return kExitFailure;
  }
  const OracleResult r = brute_force_max_modularity(g, max_n);
  out << "modularity " << format_q(r.modularity) << '\n';
  out << "partitions " << r.partitions_visited << '\n';
  write_partition(out, g, r.partition);
  return kExitOk;
}

int cmd_embed(const std::string& input, int k, const std::string& rounds_text,
              std::optional<std::uint64_t> seed, bool weighted, const std::string& output,
              std::ostream& out, std::ostream& err) {
  const Graph g = load_edge_list(input, weighted);
  RunOptions options;
  options.seed = seed;
  const Embedding e =
      locale_embeddings(g, Partition::singletons(g.size()), k, parse_inner_rounds(rounds_text), options);
  write_to(output, out, [&](std::ostream& s) { write_embedding(s, g, e); });
  std::ostream& summary = output.empty() ? err : out;
  summary << "objective " << std::setprecision(10) << embedding_objective(g, e) << " dimension "
          << e.dimension() << '\n';
  return kExitOk;
}

// One benchmark row: a dataset crossed with one algorithm variant.
struct BenchRow {
  std::size_t dataset = 0;
  std::string algorithm;
  std::string mode;
  std::size_t group = 0;
  bool baseline = false;
  int k = 1;
  std::optional<std::size_t> inner_rounds;
  int iterations = 1;
  std::optional<std::uint64_t> seed;
  double modularity = 0.0;
  double seconds = 0.0;
  std::string status = "pending";
  std::optional<double> time_ratio;
};

void run_bench_row(const Graph& g, BenchRow& row) {
  const auto start = Clock::now();
  RunOptions options;
  options.seed = row.seed;
  if (row.mode == "single") {
    const Partition singletons = Partition::singletons(g.size());
    Partition p;
    if (row.algorithm == "greedy") {
      p = greedy_local_move(g, singletons, options);
    } else {
      const Embedding e = locale_embeddings(g, singletons, row.k, row.inner_rounds, options);
      p = locale_rounding(g, e, options);
    }
    row.modularity = modularity(g, p);
  } else {
    RunConfig cfg;
    cfg.algorithm = parse_algorithm(row.algorithm);
    cfg.k = row.k;
    cfg.inner_rounds = row.inner_rounds;
    cfg.iterations = row.iterations;
    cfg.seed = row.seed;
    row.modularity = leiden_locale(g, cfg).modularity;
  }
  row.seconds = seconds_since(start);
  row.status = "ok";
}

int cmd_bench(const std::string& manifest_path, const std::string& format, unsigned threads,
              const std::string& output, std::ostream& out, std::ostream& err) {
  using nlohmann::json;
  std::ifstream in(manifest_path);
  if (!in) throw std::runtime_error("cannot open " + manifest_path);
  const json manifest = json::parse(in);

  namespace fs = std::filesystem;
  fs::path data_dir = fs::path(manifest_path).parent_path();
  if (manifest.contains("data_dir")) data_dir /= manifest.at("data_dir").get<std::string>();

  struct Dataset {
    std::string name;
    fs::path path;
    bool weighted = false;
    std::optional<Graph> graph;
    std::string error;
  };
  std::vector<Dataset> datasets;
  for (const json& d : manifest.at("datasets")) {
    Dataset ds;
    ds.path = data_dir / d.at("path").get<std::string>();
    ds.name = d.value("name", ds.path.stem().string());
    ds.weighted = d.value("weighted", false);
    try {
      ds.graph = load_edge_list(ds.path, ds.weighted);
    } catch (const std::exception& e) {
      ds.error = e.what();
    }
    datasets.push_back(std::move(ds));
  }

  std::vector<BenchRow> rows;
  std::size_t group = 0;
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    for (const json& c : manifest.at("configs")) {
      const std::string mode = c.value("mode", "multilevel");
      const int k = c.value("k", 8);
      std::optional<std::uint64_t> seed;
      if (c.contains("seed") && !c.at("seed").is_null()) seed = c.at("seed").get<std::uint64_t>();
      auto add = [&](std::string algorithm, int row_k, std::optional<std::size_t> rounds, int iterations,
                     bool baseline) {
        BenchRow row;
        row.dataset = d;
        row.algorithm = std::move(algorithm);
        row.mode = mode;
        row.group = group;
        row.baseline = baseline;
        row.k = row_k;
        row.inner_rounds = rounds;
        row.iterations = iterations;
        row.seed = seed;
        rows.push_back(std::move(row));
      };
      if (mode == "single") {
        add("greedy", 1, std::nullopt, 1, true);
        add("locale", k, 2, 1, false);
        add("locale", k, std::nullopt, 1, false);
      } else if (mode == "multilevel") {
        std::string rounds_text = "2";
        if (c.contains("inner_rounds")) {
          const json& v = c.at("inner_rounds");
          rounds_text = v.is_string() ? v.get<std::string>() : v.dump();
        }
        const auto rounds = parse_inner_rounds(rounds_text);
        const int iterations = c.value("iterations", 1);
        add("louvain", 1, std::nullopt, iterations, false);
        add("leiden", 1, std::nullopt, iterations, true);
        add("locale", k, rounds, iterations, false);
      } else {
        throw std::invalid_argument("unknown bench mode '" + mode + "'");
      }
      ++group;
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next++; r < rows.size(); r = next++) {
      const Dataset& ds = datasets[rows[r].dataset];
      if (!ds.graph) {
        rows[r].status = "skipped";
        continue;
      }
      try {
        run_bench_row(*ds.graph, rows[r]);
      } catch (const std::exception& e) {
        rows[r].status = std::string("error: ") + e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < std::max(1u, threads); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::map<std::size_t, double> baseline_seconds;
  for (const BenchRow& row : rows)
    if (row.baseline && row.status == "ok") baseline_seconds[row.group] = row.seconds;
  for (BenchRow& row : rows) {
    auto it = baseline_seconds.find(row.group);
    if (row.status == "ok" && it != baseline_seconds.end() && it->second > 0.0)
      row.time_ratio = row.seconds / it->second;
  }

  bool any_skipped = false;
  for (const Dataset& ds : datasets) {
    if (!ds.graph) {
      any_skipped = true;
      err << "skipped " << ds.name << ": " << ds.error << '\n';
    }
  }

  write_to(output, out, [&](std::ostream& s) {
    if (format == "json") {
      json table = json::array();
      for (const BenchRow& row : rows) {
        const Dataset& ds = datasets[row.dataset];
        const bool ok = row.status == "ok";
        table.push_back({
            {"dataset", ds.name},
            {"nodes", ds.graph ? json(ds.graph->size()) : json(nullptr)},
            {"avg_degree",
             ds.graph ? json(describe_dataset(*ds.graph, ds.path, ds.weighted).average_degree) : json(nullptr)},
            {"mode", row.mode},
            {"algorithm", row.algorithm},
            {"k", row.k},
            {"inner_rounds", inner_rounds_name(row.inner_rounds)},
            {"iterations", row.iterations},
            {"modularity", ok ? json(row.modularity) : json(nullptr)},
            {"seconds", ok ? json(row.seconds) : json(nullptr)},
            {"time_ratio", row.time_ratio ? json(*row.time_ratio) : json(nullptr)},
            {"status", row.status},
        });
      }
      s << std::setw(2) << json{{"schema", kReportSchema}, {"rows", table}} << '\n';
      return;
    }
    s << "dataset,nodes,avg_degree,mode,algorithm,k,inner_rounds,iterations,modularity,seconds,"
         "time_ratio,status\n";
    for (const BenchRow& row : rows) {
      const Dataset& ds = datasets[row.dataset];
      const bool ok = row.status == "ok";
      s << ds.name << ',';
      if (ds.graph) {
        s << ds.graph->size() << ',' << std::setprecision(4)
          << describe_dataset(*ds.graph, ds.path, ds.weighted).average_degree;
      } else {
        s << ',';
      }
      s << ',' << row.mode << ',' << row.algorithm << ',' << row.k << ','
        << inner_rounds_name(row.inner_rounds) << ',' << row.iterations << ',';
      if (ok) s << format_q(row.modularity) << ',' << std::setprecision(6) << row.seconds;
      else s << ',';
      s << ',';
      if (row.time_ratio) s << std::setprecision(3) << *row.time_ratio;
      s << ',' << row.status << '\n';
    }
  });

  bool any_error = false;
  for (const BenchRow& row : rows) any_error = any_error || (row.status != "ok" && row.status != "skipped");
  return any_skipped || any_error ? kExitFailure : kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Community detection with low-cardinality embeddings", "localecd"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);

  DetectArgs detect;
  auto* detect_cmd = app.add_subcommand("detect", "Find communities and write a partition");
  detect_cmd->add_option("--input", detect.input, "Edge list")->required();
  detect_cmd->add_option("--algo", detect.algo, "louvain, leiden or locale")
      ->check(CLI::IsMember({"louvain", "leiden", "locale"}));
  detect_cmd->add_option("--k", detect.k, "Embedding cardinality")->check(CLI::PositiveNumber);
  detect_cmd->add_option("--inner-rounds", detect.inner_rounds, "Sweeps per level: a count or 'full'")
      ->check([](const std::string& v) {
        try {
          parse_inner_rounds(v);
          return std::string();
        } catch (const std::exception& e) {
          return std::string(e.what());
        }
      });
  detect_cmd->add_option("--iterations", detect.iterations, "Outer iterations")->check(CLI::PositiveNumber);
  detect_cmd->add_option("--seed", detect.seed, "Shuffles the queue order");
  detect_cmd->add_option("--output", detect.output, "Partition file (stdout when omitted)");
  detect_cmd->add_option("--report", detect.report, "JSON report file");
  detect_cmd->add_flag("--validated", detect.validated, "Check the descent inequality on every update");
  detect_cmd->add_flag("--weighted", detect.weighted, "Read the third column as edge weight");

  std::string mod_input, mod_partition;
  bool mod_weighted = false;
  auto* mod_cmd = app.add_subcommand("modularity", "Evaluate a partition file");
  mod_cmd->add_option("--input", mod_input, "Edge list")->required();
  mod_cmd->add_option("--partition", mod_partition, "Partition file")->required();
  mod_cmd->add_flag("--weighted", mod_weighted, "Read the third column as edge weight");

  std::string oracle_input;
  Index oracle_max_n = kDefaultOracleMaxNodes;
  bool oracle_weighted = false;
  auto* oracle_cmd = app.add_subcommand("oracle", "Exhaustive optimum for small graphs");
  oracle_cmd->add_option("--input", oracle_input, "Edge list")->required();
  oracle_cmd->add_option("--max-n", oracle_max_n, "Largest graph searched");
  oracle_cmd->add_flag("--weighted", oracle_weighted, "Read the third column as edge weight");

  std::string embed_input, embed_rounds = "full", embed_output;
  int embed_k = 8;
  std::optional<std::uint64_t> embed_seed;
  bool embed_weighted = false;
  auto* embed_cmd = app.add_subcommand("embed", "Dump the embedding of a single-level run");
  embed_cmd->add_option("--input", embed_input, "Edge list")->required();
  embed_cmd->add_option("--k", embed_k, "Embedding cardinality")->check(CLI::PositiveNumber);
  embed_cmd->add_option("--inner-rounds", embed_rounds, "Sweeps: a count or 'full'");
  embed_cmd->add_option("--seed", embed_seed, "Shuffles the queue order");
  embed_cmd->add_option("--output", embed_output, "Embedding file (stdout when omitted)");
  embed_cmd->add_flag("--weighted", embed_weighted, "Read the third column as edge weight");

  std::string bench_manifest, bench_format = "csv", bench_output;
  unsigned bench_threads = 1;
  auto* bench_cmd = app.add_subcommand("bench", "Run a manifest of datasets and configurations");
  bench_cmd->add_option("--manifest", bench_manifest, "JSON manifest")->required();
  bench_cmd->add_option("--format", bench_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  bench_cmd->add_option("--threads", bench_threads, "Worker threads")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--output", bench_output, "Table file (stdout when omitted)");

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*detect_cmd) return cmd_detect(detect, out, err);
    if (*mod_cmd) return cmd_modularity(mod_input, mod_partition, mod_weighted, out);
    if (*oracle_cmd) return cmd_oracle(oracle_input, oracle_max_n, oracle_weighted, out, err);
    if (*embed_cmd)
      return cmd_embed(embed_input, embed_k, embed_rounds, embed_seed, embed_weighted, embed_output, out, err);
    if (*bench_cmd) return cmd_bench(bench_manifest, bench_format, bench_threads, bench_output, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace localecd::cli
