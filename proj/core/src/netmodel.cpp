#include "genadapt/netmodel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "genadapt/errors.hpp"

namespace genadapt {

Network::Network(int node_count, std::vector<Link> links)
    : node_count_(node_count), links_(std::move(links)) {
  if (node_count_ < 0) throw StructuralError("negative node count");
  out_.resize(node_count_);
  in_.resize(node_count_);
  for (std::size_t i = 0; i < links_.size(); ++i) {
    const Link& l = links_[i];
    const std::string where = "link " + std::to_string(i);
    if (l.id != static_cast<LinkId>(i)) throw StructuralError(where + ": ids must be dense and ordered");
    if (!has_node(l.src) || !has_node(l.dst)) throw StructuralError(where + ": endpoint out of range");
    if (l.src == l.dst) throw StructuralError(where + ": self loop");
    if (!(l.bw_mbps > 0.0) || !std::isfinite(l.bw_mbps))
      throw StructuralError(where + ": bandwidth must be positive");
    if (!(l.dl_ms > 0.0) || !std::isfinite(l.dl_ms))
      throw StructuralError(where + ": delay must be positive");
    out_[l.src].push_back(l.id);
    in_[l.dst].push_back(l.id);
  }
  for (auto& v : out_) {
    std::sort(v.begin(), v.end(), [&](LinkId a, LinkId b) { return links_[a].dst < links_[b].dst; });
    auto dup = std::adjacent_find(v.begin(), v.end(),
                                  [&](LinkId a, LinkId b) { return links_[a].dst == links_[b].dst; });
    if (dup != v.end())
      throw StructuralError("duplicate link " + std::to_string(links_[*dup].src) + "->" +
                            std::to_string(links_[*dup].dst));
  }
  for (auto& v : in_) {
    std::sort(v.begin(), v.end(), [&](LinkId a, LinkId b) { return links_[a].src < links_[b].src; });
  }
}

const Link& Network::link(LinkId e) const {
  if (!has_link(e)) throw StructuralError("unknown link id " + std::to_string(e));
  return links_[e];
}

std::optional<LinkId> Network::find_link(NodeId src, NodeId dst) const {
  if (!has_node(src) || !has_node(dst)) return std::nullopt;
  const auto& v = out_[src];
  auto it = std::lower_bound(v.begin(), v.end(), dst,
                             [&](LinkId e, NodeId d) { return links_[e].dst < d; });
  if (it != v.end() && links_[*it].dst == dst) return *it;
  return std::nullopt;
}

std::span<const LinkId> Network::out_links(NodeId n) const {
  if (!has_node(n)) throw StructuralError("unknown node id " + std::to_string(n));
  return out_[n];
}

std::span<const LinkId> Network::in_links(NodeId n) const {
  if (!has_node(n)) throw StructuralError("unknown node id " + std::to_string(n));
  return in_[n];
}

BandwidthProfile::BandwidthProfile(double constant_mbps) : steps_{Step{0.0, constant_mbps}} {
  if (!(constant_mbps >= 0.0)) throw StructuralError("request bandwidth must be non-negative");
}

BandwidthProfile::BandwidthProfile(std::vector<Step> steps) : steps_(std::move(steps)) {
  if (steps_.empty()) throw StructuralError("bandwidth profile needs at least one step");
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    if (!(steps_[i].mbps >= 0.0)) throw StructuralError("request bandwidth must be non-negative");
    if (i > 0 && !(steps_[i].start_s > steps_[i - 1].start_s))
      throw StructuralError("bandwidth profile steps must be strictly increasing in time");
  }
}

double BandwidthProfile::at(double t) const {
  auto it = std::upper_bound(steps_.begin(), steps_.end(), t,
                             [](double x, const Step& s) { return x < s.start_s; });
  if (it == steps_.begin()) return steps_.front().mbps;
  return std::prev(it)->mbps;
}

bool is_simple_path(const Network& net, std::span<const LinkId> path, NodeId src, NodeId dst) {
  if (path.empty() || !net.has_node(src)) return false;
  std::vector<char> seen(net.node_count(), 0);
  NodeId at = src;
  seen[at] = 1;
  for (LinkId e : path) {
    if (!net.has_link(e)) return false;
    const Link& l = net.links()[e];
    if (l.src != at || seen[l.dst]) return false;
    at = l.dst;
    seen[at] = 1;
  }
  return at == dst;
}

void check_path(const Network& net, std::span<const LinkId> path, NodeId src, NodeId dst) {
  if (!is_simple_path(net, path, src, dst))
    throw StructuralError("path is not a simple directed path from " + std::to_string(src) + " to " +
                          std::to_string(dst));
}

namespace {

double bandwidth_of(std::span<const double> bandwidths, RequestId r) {
  if (r < 0 || static_cast<std::size_t>(r) >= bandwidths.size())
    throw StructuralError("no bandwidth for request " + std::to_string(r));
  return bandwidths[r];
}

}  // namespace

double throughput(const Network& net, std::span<const Flow> flows, std::span<const double> bandwidths,
                  LinkId link) {
  if (!net.has_link(link)) throw StructuralError("unknown link id " + std::to_string(link));
  double sum = 0.0;
  for (const Flow& f : flows) {
    if (std::find(f.path.begin(), f.path.end(), link) != f.path.end())
      sum += bandwidth_of(bandwidths, f.request);
  }
  return sum;
}

std::vector<double> link_throughputs(const Network& net, std::span<const Flow> flows,
                                     std::span<const double> bandwidths) {
  std::vector<double> out(net.link_count(), 0.0);
  for (const Flow& f : flows) {
    const double bd = bandwidth_of(bandwidths, f.request);
    for (LinkId e : f.path) {
      if (!net.has_link(e)) throw StructuralError("unknown link id " + std::to_string(e));
      out[e] += bd;
    }
  }
  return out;
}

double link_utilization(double throughput_mbps, double bw_mbps) {
  if (!(bw_mbps > 0.0)) throw StructuralError("link bandwidth must be positive");
  return throughput_mbps / bw_mbps;
}

std::vector<double> link_utilizations(const Network& net, std::span<const Flow> flows,
                                      std::span<const double> bandwidths) {
  std::vector<double> util = link_throughputs(net, flows, bandwidths);
  for (const Link& l : net.links()) util[l.id] = link_utilization(util[l.id], l.bw_mbps);
  return util;
}

double max_utilization(std::span<const double> util) {
  double m = 0.0;
  for (double u : util) m = std::max(m, u);
  return m;
}

Snapshot make_snapshot(const Network& net, double t, std::vector<Flow> flows,
                       std::span<const double> bandwidths) {
  Snapshot s;
  s.t = t;
  s.util = link_utilizations(net, flows, bandwidths);
  s.flows = std::move(flows);
  return s;
}

Weight path_cost(std::span<const Weight> weights, std::span<const LinkId> path) {
  Weight sum = 0;
  for (LinkId e : path) {
    if (e < 0 || static_cast<std::size_t>(e) >= weights.size())
      throw StructuralError("unknown link id " + std::to_string(e));
    sum += weights[e];
  }
  return sum;
}

std::vector<NodeId> path_nodes(const Network& net, std::span<const LinkId> path, NodeId src) {
  std::vector<NodeId> nodes{src};
  for (LinkId e : path) nodes.push_back(net.link(e).dst);
  return nodes;
}

}  // namespace genadapt
