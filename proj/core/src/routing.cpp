#include <functional>
#include <limits>
#include <queue>
#include <string>

#include "genadapt/errors.hpp"
#include "genadapt/netmodel.hpp"

namespace genadapt {

namespace {

constexpr Weight kUnreachable = std::numeric_limits<Weight>::max();

// Distance from every node to `dst` over the given weights (Dijkstra on the
// reversed graph).
std::vector<Weight> distances_to(const Network& net, std::span<const Weight> weights, NodeId dst) {
  std::vector<Weight> dist(net.node_count(), kUnreachable);
  using Entry = std::pair<Weight, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  dist[dst] = 0;
  queue.emplace(0, dst);
  while (!queue.empty()) {
    auto [d, v] = queue.top();
    queue.pop();
    if (d != dist[v]) continue;
    for (LinkId e : net.in_links(v)) {
      const NodeId u = net.links()[e].src;
      const Weight nd = d + weights[e];
      if (nd < dist[u]) {
        dist[u] = nd;
        queue.emplace(nd, u);
      }
    }
  }
  return dist;
}

}  // namespace

std::optional<Path> shortest_weighted_path(const Network& net, std::span<const Weight> weights,
                                           NodeId src, NodeId dst) {
  if (!net.has_node(src) || !net.has_node(dst))
    throw StructuralError("unknown endpoint " + std::to_string(src) + "->" + std::to_string(dst));
  if (src == dst) throw StructuralError("source equals destination");
  if (weights.size() != static_cast<std::size_t>(net.link_count()))
    throw StructuralError("weight assignment does not cover every link");
  for (Weight w : weights) {
    if (w < 1) throw StructuralError("link weights must be >= 1");
  }

  const std::vector<Weight> dist = distances_to(net, weights, dst);
  if (dist[src] == kUnreachable) return std::nullopt;

  // Walk forward taking the smallest-id neighbour that stays on a shortest
  // path. Weights are >= 1, so dist strictly decreases and the walk is simple.
  Path path;
  NodeId at = src;
  while (at != dst) {
    for (LinkId e : net.out_links(at)) {  // ordered by destination id
      const NodeId next = net.links()[e].dst;
      if (dist[next] != kUnreachable && dist[next] + weights[e] == dist[at]) {
        path.push_back(e);
        at = next;
        break;
      }
    }
  }
  return path;
}

}  // namespace genadapt
