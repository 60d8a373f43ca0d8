#include "genadapt/sim.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "genadapt/errors.hpp"
#include "text_util.hpp"

namespace genadapt {

WeightAssignment unit_weights(const Network& net) { return WeightAssignment(net.link_count(), 1); }

WeightAssignment inverse_bw_weights(const Network& net) {
  WeightAssignment w(net.link_count(), 1);
  for (const Link& l : net.links()) {
    w[l.id] = std::max<Weight>(1, static_cast<Weight>(std::floor(kInverseBwReferenceMbps / l.bw_mbps)));
  }
  return w;
}

Flow route_request(const Network& net, std::span<const Weight> weights, const Request& request) {
  auto path = shortest_weighted_path(net, weights, request.src, request.dst);
  if (!path)
    throw ScenarioError("request", "request " + std::to_string(request.id) + ": node " +
                                       std::to_string(request.dst) + " unreachable from node " +
                                       std::to_string(request.src));
  return Flow{request.id, std::move(*path)};
}

namespace {

Bandwidths bandwidths_at(std::span<const Request> requests, double t) {
  Bandwidths bw(requests.size(), 0.0);
  for (const Request& r : requests) bw[r.id] = r.bandwidth.at(t);
  return bw;
}

void sort_flows(std::vector<Flow>& flows) {
  std::sort(flows.begin(), flows.end(), [](const Flow& a, const Flow& b) { return a.request < b.request; });
}

}  // namespace

RunResult run_scenario(const Scenario& sc) {
  sc.validate();
  const Network& net = sc.network;
  Rng rng(sc.seed);

  KnowledgeBase kb(sc.gp.retained_count());
  if (sc.router.kind == RouterKind::GenAdaptReuse)
    kb = import_kb_file(sc.router.kb_path, sc.gp.max_depth, sc.gp.retained_count());
  std::optional<AdaptationController> ctrl;
  if (sc.router.adaptive()) ctrl.emplace(net, sc.gp, std::move(kb));

  const WeightAssignment static_weights =
      sc.router.kind == RouterKind::InverseBwOspf ? inverse_bw_weights(net) : unit_weights(net);

  RunResult result;
  std::vector<Flow> flows;
  std::size_t next = 0;
  const auto ticks = static_cast<long>(std::ceil(sc.duration_s));
  for (long tick = 0; tick < ticks; ++tick) {
    const double t = static_cast<double>(tick);
    const Bandwidths bw = bandwidths_at(sc.requests, t);

    // Arrivals. Adaptive weights depend on load, so they are refreshed after
    // every placement.
    while (next < sc.requests.size() && sc.requests[next].arrival_s <= t) {
      const Request& r = sc.requests[next++];
      WeightAssignment weights =
          ctrl ? ctrl->routing_weights(link_utilizations(net, flows, bw)) : static_weights;
      Flow f = route_request(net, weights, r);
      result.arrivals.push_back(ArrivalRecord{t, r.id, f.path});
      flows.push_back(std::move(f));
    }
    sort_flows(flows);

    Snapshot snap = make_snapshot(net, t, flows, bw);
    TickRecord rec;
    rec.t = t;
    rec.max_util = max_utilization(snap.util);
    rec.congested = detect(snap, sc.threshold);
    rec.flow_count = static_cast<int>(flows.size());
    {
      const std::vector<double> thr = link_throughputs(net, flows, bw);
      for (const Link& l : net.links()) rec.excess_mbps += std::max(0.0, thr[l.id] - l.bw_mbps);
    }
    for (const Flow& f : flows) rec.demand_mbps += bw[f.request];

    if (ctrl) {
      if (auto replanned = ctrl->step(snap, bw, rng)) {
        flows = std::move(*replanned);
        sort_flows(flows);
      }
      rec.active_formula_id = ctrl->state().invocation_count;
    }
    result.trace.push_back(rec);
  }

  result.metrics = summarize_trace(result.trace);
  result.final_flows = std::move(flows);
  if (ctrl) {
    result.adaptation = ctrl->state();
    result.kb = ctrl->knowledge_base();
    result.metrics.planner_invocations = result.adaptation.invocation_count;
    for (const InvocationRecord& inv : result.adaptation.log) result.metrics.wallclock_ms.push_back(inv.wallclock_ms);
  }
  return result;
}

double packet_loss_proxy(std::span<const TickRecord> trace) {
  double excess = 0.0, demand = 0.0;
  for (const TickRecord& r : trace) {
    excess += r.excess_mbps;
    demand += r.demand_mbps;
  }
  return demand > 0.0 ? excess / demand : 0.0;
}

MetricsRecord summarize_trace(std::span<const TickRecord> trace) {
  MetricsRecord m;
  bool in_run = false;
  for (const TickRecord& r : trace) {
    if (r.congested) {
      m.congestion_duration_s += 1.0;
      if (!in_run) ++m.congestion_occurrences;
    }
    in_run = r.congested;
  }
  m.packet_loss_proxy = packet_loss_proxy(trace);
  return m;
}

std::string csv_number(double v) { return detail::fixed6(v); }

void write_trace_csv(std::ostream& out, std::span<const TickRecord> trace) {
  out << "t,max_util,congested,flow_count,active_formula_id\n";
  for (const TickRecord& r : trace) {
    out << csv_number(r.t) << ',' << csv_number(r.max_util) << ',' << (r.congested ? 1 : 0) << ','
        << r.flow_count << ',' << r.active_formula_id << '\n';
  }
}

std::string metrics_csv_header() {
  return "scenario,router,seed,congestion_occurrences,congestion_duration_s,packet_loss_proxy,planner_invocations";
}

std::string metrics_csv_row(const std::string& scenario, const std::string& router, std::uint64_t seed,
                            const MetricsRecord& m) {
  return scenario + ',' + router + ',' + std::to_string(seed) + ',' + std::to_string(m.congestion_occurrences) +
         ',' + csv_number(m.congestion_duration_s) + ',' + csv_number(m.packet_loss_proxy) + ',' +
         std::to_string(m.planner_invocations);
}

void write_invocations_csv(std::ostream& out, std::span<const InvocationRecord> log) {
  out << "tick,max_util,generations,best_fitness,wallclock_ms,formula_text\n";
  for (const InvocationRecord& r : log) {
    out << csv_number(r.t) << ',' << csv_number(r.max_util) << ',' << r.generations << ','
        << csv_number(r.best_fitness) << ',' << csv_number(r.wallclock_ms) << ",\"" << r.formula << "\"\n";
  }
}

}  // namespace genadapt
