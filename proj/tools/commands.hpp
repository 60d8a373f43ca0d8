#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace genadapt::cli {

enum ExitCode : int { kOk = 0, kValidationError = 1, kRuntimeFailure = 2 };

struct RunOptions {
  std::filesystem::path scenario;
  std::optional<std::string> router;
  std::optional<std::filesystem::path> kb;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out = ".";
};

struct CompareOptions {
  std::filesystem::path scenario;
  std::vector<std::string> routers{"unit-ospf", "inverse-bw-ospf", "genadapt"};
  std::vector<std::uint64_t> seeds;  // empty: 0..29
  std::filesystem::path out = ".";
  unsigned jobs = 0;                  // 0: hardware concurrency
};

struct ExportOptions {
  std::filesystem::path scenario;
  std::optional<std::string> router;
  std::optional<std::uint64_t> seed;
  std::filesystem::path kb_out;
};

struct ImportOptions {
  std::filesystem::path kb;
  int max_depth = 15;
};

struct TopologyOptions {
  std::string kind;  // full | mnp
  int size = 0;
  std::filesystem::path out;
  double bw_mbps = 100.0;
  double dl_ms = 25.0;
};

/// Writes trace.csv, metrics.csv, invocations.csv and, after an adaptation,
/// kb.txt into `out`.
int cmd_run(const RunOptions& opt, std::ostream& out, std::ostream& err);

/// Runs routers x seeds and writes runs.csv, summary.csv (per-router means)
/// and timing.csv (planner wall-clock, the only nondeterministic output).
int cmd_compare(const CompareOptions& opt, std::ostream& out, std::ostream& err);

int cmd_transfer_export(const ExportOptions& opt, std::ostream& out, std::ostream& err);
int cmd_transfer_import(const ImportOptions& opt, std::ostream& out, std::ostream& err);
int cmd_gen_topology(const TopologyOptions& opt, std::ostream& out, std::ostream& err);

/// "0-29", "3", "1,4,9" or a mix ("0-4,10"). Throws ConfigError on an empty
/// or duplicated list.
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

/// Comma-separated router list; commas inside parentheses do not split.
std::vector<std::string> split_router_list(const std::string& text);

/// Full command-line entry point.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace genadapt::cli
