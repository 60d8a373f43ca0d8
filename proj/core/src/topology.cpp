#include <cmath>
#include <string>

#include "genadapt/errors.hpp"
#include "genadapt/netmodel.hpp"

namespace genadapt {

namespace {

void check_link_props(double bw_mbps, double dl_ms) {
  if (!(bw_mbps > 0.0) || !std::isfinite(bw_mbps)) throw ConfigError("link bandwidth must be positive");
  if (!(dl_ms > 0.0) || !std::isfinite(dl_ms)) throw ConfigError("link delay must be positive");
}

void add_link(std::vector<Link>& links, NodeId src, NodeId dst, double bw, double dl) {
  links.push_back(Link{static_cast<LinkId>(links.size()), src, dst, bw, dl});
}

}  // namespace

Network full_topology(int n, double bw_mbps, double dl_ms) {
  if (n < 2) throw ConfigError("full topology needs at least 2 nodes, got " + std::to_string(n));
  check_link_props(bw_mbps, dl_ms);
  std::vector<Link> links;
  links.reserve(static_cast<std::size_t>(n) * (n - 1));
  for (NodeId s = 0; s < n; ++s) {
    for (NodeId d = 0; d < n; ++d) {
      if (s != d) add_link(links, s, d, bw_mbps, dl_ms);
    }
  }
  return Network(n, std::move(links));
}

Network mnp_topology(int k, double bw_mbps, double dl_ms) {
  if (k < 2) throw ConfigError("mnp topology needs at least 2 paths, got " + std::to_string(k));
  check_link_props(bw_mbps, dl_ms);
  constexpr NodeId source = 0;
  constexpr NodeId sink = 1;
  NodeId next = 2;
  std::vector<Link> links;
  for (int hops = 1; hops <= k; ++hops) {
    NodeId at = source;
    for (int h = 0; h < hops; ++h) {
      const NodeId to = (h + 1 == hops) ? sink : next++;
      add_link(links, at, to, bw_mbps, dl_ms);
      add_link(links, to, at, bw_mbps, dl_ms);
      at = to;
    }
  }
  return Network(next, std::move(links));
}

}  // namespace genadapt
