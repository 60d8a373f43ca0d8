#include "genadapt/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include "genadapt/errors.hpp"
#include "text_util.hpp"

namespace genadapt {

RouterSpec parse_router(std::string_view text) {
  text = detail::trim(text);
  if (text == "unit-ospf") return {RouterKind::UnitOspf, {}};
  if (text == "inverse-bw-ospf") return {RouterKind::InverseBwOspf, {}};
  if (text == "genadapt") return {RouterKind::GenAdapt, {}};
  if (text == "genadapt-reuse") return {RouterKind::GenAdaptReuse, {}};
  constexpr std::string_view reuse = "genadapt-reuse(";
  if (text.starts_with(reuse) && text.ends_with(')') && text.size() > reuse.size() + 1)
    return {RouterKind::GenAdaptReuse, std::string(text.substr(reuse.size(), text.size() - reuse.size() - 1))};
  throw ConfigError("unknown router `" + std::string(text) +
                    "` (expected unit-ospf, inverse-bw-ospf, genadapt, genadapt-reuse[(kb)])");
}

std::string router_name(const RouterSpec& router) {
  switch (router.kind) {
    case RouterKind::UnitOspf: return "unit-ospf";
    case RouterKind::InverseBwOspf: return "inverse-bw-ospf";
    case RouterKind::GenAdapt: return "genadapt";
    case RouterKind::GenAdaptReuse:
      return router.kb_path.empty() ? "genadapt-reuse" : "genadapt-reuse(" + router.kb_path.string() + ")";
  }
  return "?";
}

std::vector<Request> burst_requests(NodeId src, NodeId dst, int per_burst, int bursts, double start_s,
                                    double spacing_s, double bw_mbps) {
  std::vector<Request> out;
  for (int b = 0; b < bursts; ++b) {
    for (int i = 0; i < per_burst; ++i) {
      out.push_back(Request{static_cast<RequestId>(out.size()), src, dst, start_s + b * spacing_s,
                            BandwidthProfile(bw_mbps)});
    }
  }
  return out;
}

void normalize_requests(std::vector<Request>& requests) {
  std::stable_sort(requests.begin(), requests.end(),
                   [](const Request& a, const Request& b) { return a.arrival_s < b.arrival_s; });
  for (std::size_t i = 0; i < requests.size(); ++i) requests[i].id = static_cast<RequestId>(i);
}

double Scenario::last_arrival() const {
  double last = 0.0;
  for (const Request& r : requests) last = std::max(last, r.arrival_s);
  return last;
}

void Scenario::validate() const {
  if (!(threshold > 0.0 && threshold < 1.0)) throw ScenarioError("threshold", "must be in (0, 1)");
  if (!(duration_s >= last_arrival()) || !std::isfinite(duration_s))
    throw ScenarioError("duration_s", "must be at least the last arrival time");
  try {
    gp.validate();
  } catch (const ConfigError& e) {
    throw ScenarioError("gp", e.what());
  }
  if (gp.threshold != threshold) throw ScenarioError("gp.threshold", "must equal the scenario threshold");
  if (router.kind == RouterKind::GenAdaptReuse && router.kb_path.empty())
    throw ScenarioError("kb", "genadapt-reuse needs a knowledge-base file");

  const WeightAssignment unit(network.link_count(), 1);
  for (std::size_t i = 0; i < requests.size(); ++i) {
    const Request& r = requests[i];
    const std::string where = "request " + std::to_string(i);
    if (r.id != static_cast<RequestId>(i)) throw ScenarioError("request", where + ": ids must be dense");
    if (i > 0 && r.arrival_s < requests[i - 1].arrival_s)
      throw ScenarioError("request", where + ": requests must be in arrival order");
    if (!network.has_node(r.src) || !network.has_node(r.dst))
      throw ScenarioError("request", where + ": endpoint is not a node");
    if (r.src == r.dst) throw ScenarioError("request", where + ": source equals destination");
    if (!(r.arrival_s >= 0.0)) throw ScenarioError("request", where + ": negative arrival time");
    if (!shortest_weighted_path(network, unit, r.src, r.dst))
      throw ScenarioError("request", where + ": destination unreachable");
  }
}

namespace {

struct Entry {
  std::string value;
  std::size_t line = 0;
};

class Fields {
 public:
  explicit Fields(std::multimap<std::string, Entry> entries) : entries_(std::move(entries)) {}

  std::optional<std::string> text(const std::string& key) {
    auto range = entries_.equal_range(key);
    if (range.first == range.second) return std::nullopt;
    if (std::next(range.first) != range.second) throw ScenarioError(key, "given more than once");
    used_.push_back(key);
    return range.first->second.value;
  }

  template <typename T>
  std::optional<T> number(const std::string& key) {
    auto s = text(key);
    if (!s) return std::nullopt;
    T v{};
    bool ok;
    if constexpr (std::is_floating_point_v<T>) ok = detail::parse_double(*s, v);
    else ok = detail::parse_int(*s, v);
    if (!ok) throw ScenarioError(key, "not a valid number: `" + *s + "`");
    return v;
  }

  std::vector<Entry> all(const std::string& key) {
    std::vector<Entry> out;
    auto range = entries_.equal_range(key);
    for (auto it = range.first; it != range.second; ++it) out.push_back(it->second);
    used_.push_back(key);
    return out;
  }

  void reject_unknown() const {
    for (const auto& [key, entry] : entries_) {
      if (std::find(used_.begin(), used_.end(), key) == used_.end())
        throw ScenarioError(key, "unknown key (line " + std::to_string(entry.line) + ")");
    }
  }

 private:
  std::multimap<std::string, Entry> entries_;
  std::vector<std::string> used_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

}  // namespace

Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir) {
  std::multimap<std::string, Entry> entries;
  std::size_t line_no = 0;
  for (std::string_view line : detail::split_lines(text)) {
    ++line_no;
    const std::string_view body = detail::trim(detail::strip_comment(line));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos)
      throw ScenarioError("line " + std::to_string(line_no), "expected `key = value`");
    entries.emplace(std::string(detail::trim(body.substr(0, eq))),
                    Entry{std::string(detail::trim(body.substr(eq + 1))), line_no});
  }
  Fields f(std::move(entries));

  Scenario sc;
  sc.name = f.text("name").value_or("scenario");
  sc.seed = f.number<std::uint64_t>("seed").value_or(0);
  sc.threshold = f.number<double>("threshold").value_or(0.8);

  const double link_bw = f.number<double>("link_bw_mbps").value_or(100.0);
  const double link_dl = f.number<double>("link_delay_ms").value_or(25.0);
  const auto topology = f.text("topology");
  if (!topology) throw ScenarioError("topology", "missing");
  sc.topology = *topology;
  std::optional<int> default_cap;
  {
    const auto parts = detail::split_ws(*topology);
    if (parts.size() != 2) throw ScenarioError("topology", "expected `full <n>`, `mnp <k>` or `file <path>`");
    int size = 0;
    try {
      if (parts[0] == "file") {
        sc.network = read_edge_list(resolve(base_dir, std::string(parts[1])));
      } else if (parts[0] == "full" || parts[0] == "mnp") {
        if (!detail::parse_int(parts[1], size)) throw ScenarioError("topology", "size is not an integer");
        if (parts[0] == "full") {
          sc.network = full_topology(size, link_bw, link_dl);
          default_cap = default_generation_cap_full();
        } else {
          sc.network = mnp_topology(size, link_bw, link_dl);
          default_cap = default_generation_cap_mnp(size);
        }
      } else {
        throw ScenarioError("topology", "unknown kind `" + std::string(parts[0]) + "`");
      }
    } catch (const ScenarioError&) {
      throw;
    } catch (const Error& e) {
      throw ScenarioError("topology", e.what());
    }
  }

  std::vector<Request> requests;
  if (auto bursts = f.number<int>("bursts")) {
    const int per_burst = f.number<int>("requests_per_burst").value_or(1);
    const double spacing = f.number<double>("spacing_s").value_or(10.0);
    const double start = f.number<double>("start_s").value_or(0.0);
    const auto bw = f.number<double>("request_bw_mbps");
    if (!bw) throw ScenarioError("request_bw_mbps", "required when bursts is set");
    if (*bursts < 0) throw ScenarioError("bursts", "must be non-negative");
    if (per_burst < 1) throw ScenarioError("requests_per_burst", "must be at least 1");
    if (!(spacing > 0.0)) throw ScenarioError("spacing_s", "must be positive");
    if (!(*bw >= 0.0)) throw ScenarioError("request_bw_mbps", "must be non-negative");
    const NodeId src = f.number<NodeId>("source").value_or(0);
    const NodeId dst = f.number<NodeId>("destination").value_or(1);
    requests = burst_requests(src, dst, per_burst, *bursts, start, spacing, *bw);
  } else {
    for (const char* key : {"requests_per_burst", "spacing_s", "start_s", "request_bw_mbps", "source", "destination"}) {
      if (f.text(key)) throw ScenarioError(key, "only valid together with bursts");
    }
  }
  for (const Entry& e : f.all("request")) {
    const auto parts = detail::split_ws(e.value);
    Request r;
    double bw = 0.0;
    if (parts.size() != 4 || !detail::parse_int(parts[0], r.src) || !detail::parse_int(parts[1], r.dst) ||
        !detail::parse_double(parts[2], r.arrival_s) || !detail::parse_double(parts[3], bw) || !(bw >= 0.0))
      throw ScenarioError("request", "line " + std::to_string(e.line) +
                                         ": expected `<src> <dst> <arrival_s> <bw_mbps>`");
    r.bandwidth = BandwidthProfile(bw);
    requests.push_back(std::move(r));
  }
  normalize_requests(requests);
  sc.requests = std::move(requests);

  sc.duration_s = f.number<double>("duration_s").value_or(sc.last_arrival() + 10.0);

  if (auto router = f.text("router")) {
    try {
      sc.router = parse_router(*router);
    } catch (const ConfigError& e) {
      throw ScenarioError("router", e.what());
    }
  }
  if (auto kb = f.text("kb")) sc.router.kb_path = *kb;
  if (!sc.router.kb_path.empty()) sc.router.kb_path = resolve(base_dir, sc.router.kb_path.string());

  GpConfig& gp = sc.gp;
  gp.threshold = sc.threshold;
  gp.population_size = f.number<int>("gp.population_size").value_or(gp.population_size);
  gp.max_generations = f.number<int>("gp.max_generations").value_or(default_cap.value_or(gp.max_generations));
  gp.crossover_rate = f.number<double>("gp.crossover_rate").value_or(gp.crossover_rate);
  gp.mutation_rate = f.number<double>("gp.mutation_rate").value_or(gp.mutation_rate);
  gp.tournament_size = f.number<int>("gp.tournament_size").value_or(gp.tournament_size);
  gp.max_depth = f.number<int>("gp.max_depth").value_or(gp.max_depth);
  gp.const_min = f.number<double>("gp.const_min").value_or(gp.const_min);
  gp.const_max = f.number<double>("gp.const_max").value_or(gp.const_max);
  gp.early_stop_fitness = f.number<double>("gp.early_stop_fitness").value_or(gp.early_stop_fitness);

  f.reject_unknown();
  sc.validate();
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  const std::string text = detail::read_file(path);
  return parse_scenario(text, path.parent_path());
}

}  // namespace genadapt
