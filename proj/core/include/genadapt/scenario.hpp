#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "genadapt/genplan.hpp"
#include "genadapt/netmodel.hpp"

namespace genadapt {

enum class RouterKind {
  UnitOspf,       // all weights 1, no adaptation
  InverseBwOspf,  // weights inversely proportional to bandwidth, no adaptation
  GenAdapt,       // self-adaptive, empty knowledge base at start
  GenAdaptReuse,  // self-adaptive, knowledge base imported from a file
};

struct RouterSpec {
  RouterKind kind = RouterKind::GenAdapt;
  std::filesystem::path kb_path;  // GenAdaptReuse only

  bool adaptive() const { return kind == RouterKind::GenAdapt || kind == RouterKind::GenAdaptReuse; }
};

/// Accepts `unit-ospf`, `inverse-bw-ospf`, `genadapt`, `genadapt-reuse` and
/// `genadapt-reuse(<kb path>)`. Throws ConfigError.
RouterSpec parse_router(std::string_view text);
/// Inverse of parse_router.
std::string router_name(const RouterSpec& router);

/// `count` requests per burst from src to dst, bursts `spacing_s` apart.
std::vector<Request> burst_requests(NodeId src, NodeId dst, int per_burst, int bursts, double start_s,
                                    double spacing_s, double bw_mbps);

struct Scenario {
  std::string name;
  std::string topology;  // e.g. "mnp 3", "full 5", "file net.txt"
  Network network;
  std::vector<Request> requests;  // ids 0..R-1 in arrival order
  double threshold = 0.8;
  double duration_s = 0.0;
  RouterSpec router;
  GpConfig gp;
  std::uint64_t seed = 0;

  /// Throws ScenarioError naming the offending field.
  void validate() const;
  double last_arrival() const;
};

/// Sorts requests by arrival (stable) and renumbers them 0..R-1.
void normalize_requests(std::vector<Request>& requests);

/// Flat `key = value` text; `#` starts a comment. Relative paths (edge-list
/// files, knowledge bases) resolve against `base_dir`. Keys:
///
///   name, seed, threshold, duration_s, router, kb
///   topology = full <n> | mnp <k> | file <path>
///   link_bw_mbps, link_delay_ms               (generated topologies)
///   source, destination, requests_per_burst, bursts, spacing_s, start_s,
///   request_bw_mbps                           (request bursts)
///   request = <src> <dst> <arrival_s> <bw_mbps>   (repeatable)
///   gp.population_size, gp.max_generations, gp.crossover_rate,
///   gp.mutation_rate, gp.tournament_size, gp.max_depth, gp.const_min,
///   gp.const_max, gp.early_stop_fitness
///
/// duration_s defaults to 10 s after the last arrival. gp.max_generations
/// defaults to the cap for the generated topology (200 otherwise).
Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace genadapt
