#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "genadapt/mapek.hpp"
#include "genadapt/netmodel.hpp"
#include "genadapt/scenario.hpp"

namespace genadapt {

/// Per-tick monitored state. Only the first five fields go to the trace CSV.
struct TickRecord {
  double t = 0.0;
  double max_util = 0.0;
  bool congested = false;
  int flow_count = 0;
  int active_formula_id = 0;  // 0 = none, k = formula installed by invocation k
  double excess_mbps = 0.0;   // sum over links of max(0, throughput - bw)
  double demand_mbps = 0.0;   // sum of live request bandwidths
};

struct MetricsRecord {
  int congestion_occurrences = 0;  // maximal runs of congested ticks
  double congestion_duration_s = 0.0;
  double packet_loss_proxy = 0.0;
  int planner_invocations = 0;
  std::vector<double> wallclock_ms;  // one entry per invocation
};

struct ArrivalRecord {
  double t = 0.0;
  RequestId request = 0;
  Path path;
};

struct RunResult {
  MetricsRecord metrics;
  std::vector<TickRecord> trace;
  std::vector<ArrivalRecord> arrivals;
  std::vector<Flow> final_flows;
  AdaptationState adaptation;
  KnowledgeBase kb;
};

/// Reference bandwidth for the inverse-bandwidth baseline, in Mbps (100 Gbps).
inline constexpr double kInverseBwReferenceMbps = 1e5;

WeightAssignment unit_weights(const Network& net);
/// max(1, floor(reference / bw)) per link.
WeightAssignment inverse_bw_weights(const Network& net);

/// Shortest weighted path for a newly arrived request. Throws ScenarioError
/// when the destination is unreachable.
Flow route_request(const Network& net, std::span<const Weight> weights, const Request& request);

/// Runs the scenario in 1 s ticks over [0, duration). Within a tick:
/// arrivals are routed under the current weights, the network is
/// monitored, then (adaptive routers only) the controller may re-route.
RunResult run_scenario(const Scenario& scenario);

/// Total over-capacity excess divided by total demand; 0 without demand.
double packet_loss_proxy(std::span<const TickRecord> trace);

/// Occurrences, duration and loss proxy derived from a trace.
MetricsRecord summarize_trace(std::span<const TickRecord> trace);

void write_trace_csv(std::ostream& out, std::span<const TickRecord> trace);

/// Deterministic per-run metrics; wall-clock timings are excluded.
std::string metrics_csv_header();
std::string metrics_csv_row(const std::string& scenario, const std::string& router, std::uint64_t seed,
                            const MetricsRecord& metrics);

/// tick, max_util, generations, best_fitness, wallclock_ms, formula_text.
void write_invocations_csv(std::ostream& out, std::span<const InvocationRecord> log);

/// Fixed six-decimal rendering used by every CSV writer.
std::string csv_number(double v);

}  // namespace genadapt
