#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "genadapt/errors.hpp"
#include "genadapt/mapek.hpp"
#include "genadapt/netmodel.hpp"
#include "genadapt/scenario.hpp"
#include "genadapt/sim.hpp"

namespace genadapt::cli {

namespace fs = std::filesystem;

namespace {

// Maps exceptions to exit codes: bad input is a validation error, anything
// else a runtime failure.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ScenarioError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const FileFormatError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
  if (!f) throw Error("failed writing " + path.string());
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create directory " + dir.string() + ": " + ec.message());
}

Scenario load_with_overrides(const fs::path& path, const std::optional<std::string>& router,
                             const std::optional<fs::path>& kb, const std::optional<std::uint64_t>& seed) {
  Scenario sc = load_scenario(path);
  if (router) {
    try {
      sc.router = parse_router(*router);
    } catch (const ConfigError& e) {
      throw ScenarioError("router", e.what());
    }
  }
  if (kb) sc.router.kb_path = *kb;
  if (seed) sc.seed = *seed;
  sc.validate();
  return sc;
}

std::string metrics_csv(const Scenario& sc, const std::string& router, const MetricsRecord& m) {
  return metrics_csv_header() + '\n' + metrics_csv_row(sc.name, router, sc.seed, m) + '\n';
}

double mean(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

}  // namespace

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  std::string item;
  auto number = [&](std::string_view s) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
      throw ConfigError("seeds: bad seed `" + std::string(s) + "`");
    return v;
  };
  while (std::getline(ss, item, ',')) {
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      seeds.push_back(number(item));
      continue;
    }
    const std::uint64_t lo = number(std::string_view(item).substr(0, dash));
    const std::uint64_t hi = number(std::string_view(item).substr(dash + 1));
    if (hi < lo) throw ConfigError("seeds: empty range `" + item + "`");
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  if (seeds.empty()) throw ConfigError("seeds: list is empty");
  std::set<std::uint64_t> seen;
  for (std::uint64_t s : seeds) {
    if (!seen.insert(s).second) throw ConfigError("seeds: duplicate seed " + std::to_string(s));
  }
  return seeds;
}

std::vector<std::string> split_router_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

int cmd_run(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario sc = load_with_overrides(opt.scenario, opt.router, opt.kb, opt.seed);
    const RunResult res = run_scenario(sc);
    ensure_dir(opt.out);

    std::ostringstream trace, inv;
    write_trace_csv(trace, res.trace);
    write_invocations_csv(inv, res.adaptation.log);
    write_text(opt.out / "trace.csv", trace.str());
    write_text(opt.out / "metrics.csv", metrics_csv(sc, router_name(sc.router), res.metrics));
    write_text(opt.out / "invocations.csv", inv.str());
    if (!res.kb.empty()) export_kb_file(res.kb, opt.out / "kb.txt");

    const MetricsRecord& m = res.metrics;
    out << sc.name << " [" << router_name(sc.router) << ", seed " << sc.seed << "]: " << res.trace.size()
        << " ticks, " << m.congestion_occurrences << " congestion occurrence(s), " << m.congestion_duration_s
        << " s congested, " << m.planner_invocations << " planner invocation(s)\n";
    return kOk;
  });
}

int cmd_compare(const CompareOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const std::vector<std::uint64_t> seeds = opt.seeds.empty() ? parse_seed_list("0-29") : opt.seeds;
    {
      std::set<std::uint64_t> seen(seeds.begin(), seeds.end());
      if (seen.size() != seeds.size()) throw ConfigError("seeds: duplicate seed");
    }
    if (opt.routers.empty()) throw ConfigError("router: list is empty");

    // Validate every (router) cell up front so bad input fails before work starts.
    const Scenario base = load_scenario(opt.scenario);
    std::vector<Scenario> per_router;
    for (const std::string& r : opt.routers) {
      Scenario sc = base;
      try {
        sc.router = parse_router(r);
      } catch (const ConfigError& e) {
        throw ScenarioError("router", e.what());
      }
      if (!sc.router.kb_path.empty() && sc.router.kb_path.is_relative())
        sc.router.kb_path = fs::absolute(sc.router.kb_path);
      sc.validate();
      per_router.push_back(std::move(sc));
    }

    struct Cell {
      std::size_t router = 0;
      std::uint64_t seed = 0;
      RunResult result;
      std::string error;
    };
    std::vector<Cell> cells;
    for (std::size_t r = 0; r < per_router.size(); ++r)
      for (std::uint64_t s : seeds) {
        Cell c;
        c.router = r;
        c.seed = s;
        cells.push_back(std::move(c));
      }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < cells.size(); i = next++) {
        Cell& c = cells[i];
        try {
          Scenario sc = per_router[c.router];
          sc.seed = c.seed;
          c.result = run_scenario(sc);
        } catch (const std::exception& e) {
          c.error = e.what();
        }
      }
    };
    unsigned jobs = opt.jobs ? opt.jobs : std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, cells.size()));
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (const Cell& c : cells) {
      if (!c.error.empty())
        throw Error("run failed for router " + opt.routers[c.router] + ", seed " + std::to_string(c.seed) +
                    ": " + c.error);
    }

    ensure_dir(opt.out);
    std::ostringstream runs, summary, timing;
    runs << metrics_csv_header() << '\n';
    summary << "router,runs,mean_congestion_occurrences,mean_congestion_duration_s,mean_packet_loss_proxy,"
               "mean_planner_invocations\n";
    timing << "router,seed,invocation,wallclock_ms\n";
    out << "router                              occurrences  duration_s  loss_proxy  invocations\n";
    for (std::size_t r = 0; r < per_router.size(); ++r) {
      std::vector<double> occ, dur, loss, invs;
      for (const Cell& c : cells) {
        if (c.router != r) continue;
        const MetricsRecord& m = c.result.metrics;
        runs << metrics_csv_row(base.name, opt.routers[r], c.seed, m) << '\n';
        occ.push_back(m.congestion_occurrences);
        dur.push_back(m.congestion_duration_s);
        loss.push_back(m.packet_loss_proxy);
        invs.push_back(m.planner_invocations);
        for (std::size_t k = 0; k < m.wallclock_ms.size(); ++k)
          timing << opt.routers[r] << ',' << c.seed << ',' << (k + 1) << ',' << csv_number(m.wallclock_ms[k]) << '\n';
      }
      summary << opt.routers[r] << ',' << occ.size() << ',' << csv_number(mean(occ)) << ',' << csv_number(mean(dur))
              << ',' << csv_number(mean(loss)) << ',' << csv_number(mean(invs)) << '\n';
      char line[160];
      std::snprintf(line, sizeof line, "%-34s %12.3f %11.3f %11.6f %12.3f\n", opt.routers[r].c_str(), mean(occ),
                    mean(dur), mean(loss), mean(invs));
      out << line;
    }
    write_text(opt.out / "runs.csv", runs.str());
    write_text(opt.out / "summary.csv", summary.str());
    write_text(opt.out / "timing.csv", timing.str());
    return kOk;
  });
}

int cmd_transfer_export(const ExportOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario sc = load_with_overrides(opt.scenario, opt.router, std::nullopt, opt.seed);
    if (!sc.router.adaptive()) throw ScenarioError("router", "export needs an adaptive router");
    const RunResult res = run_scenario(sc);
    if (res.kb.empty())
      throw Error("no adaptation happened in " + sc.name + " (seed " + std::to_string(sc.seed) +
                  "); knowledge base is empty");
    export_kb_file(res.kb, opt.kb_out);
    out << res.kb.size() << " formulas exported to " << opt.kb_out.string() << '\n';
    return kOk;
  });
}

int cmd_transfer_import(const ImportOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    // Validation only: keep every entry so the count reflects the whole file.
    const KnowledgeBase kb = import_kb_file(opt.kb, opt.max_depth, static_cast<std::size_t>(-1));
    out << kb.size() << " formulas accepted\n";
    if (kb.empty()) err << "warning: " << opt.kb.string() << " contains no formulas\n";
    return kOk;
  });
}

int cmd_gen_topology(const TopologyOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Network net;
    if (opt.kind == "full") net = full_topology(opt.size, opt.bw_mbps, opt.dl_ms);
    else if (opt.kind == "mnp") net = mnp_topology(opt.size, opt.bw_mbps, opt.dl_ms);
    else throw ConfigError("kind: expected full or mnp, got `" + opt.kind + "`");
    write_edge_list(net, opt.out);
    out << net.node_count() << " nodes, " << net.link_count() << " links written to " << opt.out.string() << '\n';
    return kOk;
  });
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Self-adaptive SDN congestion resolution by evolved link-weight formulas", "genadapt"};
  app.require_subcommand(1);

  RunOptions run;
  std::string run_kb;
  auto* run_cmd = app.add_subcommand("run", "Simulate one scenario");
  run_cmd->add_option("--scenario", run.scenario, "Scenario file")->required();
  run_cmd->add_option("--router", run.router, "unit-ospf | inverse-bw-ospf | genadapt | genadapt-reuse[(kb)]");
  run_cmd->add_option("--kb", run_kb, "Knowledge base to import (genadapt-reuse)");
  run_cmd->add_option("--seed", run.seed, "Random seed (overrides the scenario)");
  run_cmd->add_option("--out", run.out, "Output directory")->capture_default_str();

  CompareOptions cmp;
  std::string routers, seeds;
  auto* cmp_cmd = app.add_subcommand("compare", "Run routers over a batch of seeds");
  cmp_cmd->add_option("--scenario", cmp.scenario, "Scenario file")->required();
  cmp_cmd->add_option("--router", routers, "Comma-separated routers (default: all three non-reuse routers)");
  cmp_cmd->add_option("--seeds", seeds, "Seed list, e.g. 0-29 or 1,2,5 (default 0-29)");
  cmp_cmd->add_option("--out", cmp.out, "Output directory")->capture_default_str();
  cmp_cmd->add_option("--jobs", cmp.jobs, "Parallel runs (0 = all cores)");

  auto* transfer = app.add_subcommand("transfer", "Move knowledge bases between networks");
  transfer->require_subcommand(1);
  ExportOptions exp;
  auto* exp_cmd = transfer->add_subcommand("export", "Run a scenario and export its knowledge base");
  exp_cmd->add_option("--scenario", exp.scenario, "Scenario file")->required();
  exp_cmd->add_option("--router", exp.router, "Adaptive router to train with");
  exp_cmd->add_option("--seed", exp.seed, "Random seed");
  exp_cmd->add_option("--kb", exp.kb_out, "Output file")->required();
  ImportOptions imp;
  auto* imp_cmd = transfer->add_subcommand("import", "Validate a knowledge-base file");
  imp_cmd->add_option("--kb", imp.kb, "Knowledge-base file")->required();
  imp_cmd->add_option("--max-depth", imp.max_depth, "Depth bound")->capture_default_str();

  TopologyOptions topo;
  auto* topo_cmd = app.add_subcommand("gen-topology", "Write a generated topology as an edge list");
  topo_cmd->add_option("kind", topo.kind, "full | mnp")->required();
  topo_cmd->add_option("size", topo.size, "Nodes (full) or disjoint paths (mnp)")->required();
  topo_cmd->add_option("--out", topo.out, "Edge-list file")->required();
  topo_cmd->add_option("--bw", topo.bw_mbps, "Link bandwidth, Mbps")->capture_default_str();
  topo_cmd->add_option("--delay", topo.dl_ms, "Link delay, ms")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidationError;
  }

  if (*run_cmd) {
    if (!run_kb.empty()) run.kb = run_kb;
    return cmd_run(run, out, err);
  }
  if (*cmp_cmd) {
    return guarded(err, [&] {
      if (!routers.empty()) cmp.routers = split_router_list(routers);
      if (!seeds.empty()) cmp.seeds = parse_seed_list(seeds);
      return cmd_compare(cmp, out, err);
    });
  }
  if (*exp_cmd) return cmd_transfer_export(exp, out, err);
  if (*imp_cmd) return cmd_transfer_import(imp, out, err);
  if (*topo_cmd) return cmd_gen_topology(topo, out, err);
  return kValidationError;
}

}  // namespace genadapt::cli
