#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace genadapt {

using NodeId = std::int32_t;
using LinkId = std::int32_t;
using RequestId = std::int32_t;

/// Integer routing weight of one link. Always >= 1.
using Weight = std::int64_t;

/// A directed link with its static properties.
struct Link {
  LinkId id = 0;
  NodeId src = 0;
  NodeId dst = 0;
  double bw_mbps = 0.0;  // capacity
  double dl_ms = 0.0;    // nominal delay

  bool operator==(const Link&) const = default;
};

/// Directed network with dense node ids 0..N-1 and dense link ids 0..L-1.
///
/// At most one link per ordered node pair, no self loops, positive bandwidth
/// and delay. The constructor enforces all of it, so every Network value is
/// valid. Outgoing and incoming link lists are ordered by the opposite
/// endpoint's id.
class Network {
 public:
  Network() = default;
  Network(int node_count, std::vector<Link> links);

  int node_count() const noexcept { return node_count_; }
  int link_count() const noexcept { return static_cast<int>(links_.size()); }
  std::span<const Link> links() const noexcept { return links_; }

  bool has_node(NodeId n) const noexcept { return n >= 0 && n < node_count_; }
  bool has_link(LinkId e) const noexcept { return e >= 0 && e < link_count(); }

  /// Throws StructuralError for an unknown id.
  const Link& link(LinkId e) const;

  std::optional<LinkId> find_link(NodeId src, NodeId dst) const;
  std::span<const LinkId> out_links(NodeId n) const;
  std::span<const LinkId> in_links(NodeId n) const;

  bool operator==(const Network& other) const {
    return node_count_ == other.node_count_ && links_ == other.links_;
  }

 private:
  int node_count_ = 0;
  std::vector<Link> links_;
  std::vector<std::vector<LinkId>> out_;
  std::vector<std::vector<LinkId>> in_;
};

/// Piecewise-constant request bandwidth over time. Before the first step
/// the bandwidth is the first step's value.
class BandwidthProfile {
 public:
  struct Step {
    double start_s = 0.0;
    double mbps = 0.0;
  };

  BandwidthProfile() = default;
  explicit BandwidthProfile(double constant_mbps);
  explicit BandwidthProfile(std::vector<Step> steps);

  double at(double t) const;
  std::span<const Step> steps() const noexcept { return steps_; }

 private:
  std::vector<Step> steps_{Step{}};
};

struct Request {
  RequestId id = 0;
  NodeId src = 0;
  NodeId dst = 0;
  double arrival_s = 0.0;
  BandwidthProfile bandwidth;
};

using Path = std::vector<LinkId>;

/// The directed path currently serving one request.
struct Flow {
  RequestId request = 0;
  Path path;

  bool operator==(const Flow&) const = default;
};

/// Per-request bandwidth in Mbps, indexed by request id.
using Bandwidths = std::vector<double>;

/// One routing weight per link, indexed by link id.
using WeightAssignment = std::vector<Weight>;

/// Monitored network state at one instant. Build with make_snapshot so that
/// `util` is always consistent with `flows`.
struct Snapshot {
  double t = 0.0;
  std::vector<Flow> flows;
  std::vector<double> util;
};

// Throws StructuralError unless `path` is a simple directed path from src to dst.
void check_path(const Network& net, std::span<const LinkId> path, NodeId src, NodeId dst);
bool is_simple_path(const Network& net, std::span<const LinkId> path, NodeId src, NodeId dst);

/// Sum of the bandwidths of the flows whose path contains `link`.
double throughput(const Network& net, std::span<const Flow> flows,
                  std::span<const double> bandwidths, LinkId link);

/// Throughput of every link at once.
std::vector<double> link_throughputs(const Network& net, std::span<const Flow> flows,
                                     std::span<const double> bandwidths);

/// throughput / bw. Not clamped: over-capacity demand gives values above 1.
double link_utilization(double throughput_mbps, double bw_mbps);

std::vector<double> link_utilizations(const Network& net, std::span<const Flow> flows,
                                      std::span<const double> bandwidths);

double max_utilization(std::span<const double> util);

Snapshot make_snapshot(const Network& net, double t, std::vector<Flow> flows,
                       std::span<const double> bandwidths);

/// Total weight of a path.
Weight path_cost(std::span<const Weight> weights, std::span<const LinkId> path);

/// Minimum-weight directed path from src to dst, or nullopt when dst is
/// unreachable. Among equal-cost paths the one with the lexicographically
/// smallest node-id sequence is returned.
std::optional<Path> shortest_weighted_path(const Network& net, std::span<const Weight> weights,
                                           NodeId src, NodeId dst);

/// Node sequence visited by a path starting at `src`.
std::vector<NodeId> path_nodes(const Network& net, std::span<const LinkId> path, NodeId src);

/// Directed complete graph on n nodes, one link per ordered pair.
Network full_topology(int n, double bw_mbps, double dl_ms);

/// Source 0 and destination 1 joined by k node-disjoint paths of 1, 2, ..., k
/// hops, every hop bidirectional. k = 3 is the five-node example network.
Network mnp_topology(int k, double bw_mbps, double dl_ms);

/// Edge-list text: `nodes <n>` followed by one `link <id> <src> <dst> <bw> <dl>`
/// line per directed link. Blank lines and `#` comments are ignored.
std::string format_edge_list(const Network& net);
Network parse_edge_list(std::string_view text);
Network read_edge_list(const std::filesystem::path& path);
void write_edge_list(const Network& net, const std::filesystem::path& path);

}  // namespace genadapt
