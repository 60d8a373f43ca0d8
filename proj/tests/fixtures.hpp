#pragma once

#include <string>

#include "genadapt/netmodel.hpp"
#include "genadapt/weight_expr.hpp"

namespace genadapt::testing {

// Five-node example network as built by mnp_topology(3):
//   0 = s1, 1 = s2, 2 = s3, 3 = s4, 4 = s5
//   links 0: s1>s2  1: s2>s1  2: s1>s3  3: s3>s1  4: s3>s2  5: s2>s3
//         6: s1>s4  7: s4>s1  8: s4>s5  9: s5>s4 10: s5>s2 11: s2>s5
inline constexpr NodeId s1 = 0, s2 = 1, s3 = 2, s4 = 3, s5 = 4;

inline Network fig1_network() { return mnp_topology(3, 100.0, 25.0); }

inline LinkId link_between(const Network& net, NodeId a, NodeId b) { return *net.find_link(a, b); }

inline Path path_through(const Network& net, std::initializer_list<NodeId> nodes) {
  Path p;
  const NodeId* prev = nullptr;
  for (const NodeId& n : nodes) {
    if (prev) p.push_back(link_between(net, *prev, n));
    prev = &n;
  }
  return p;
}

// (1.5 th)^2 / (1.5 th - u)^2 written with the grammar's four operators.
inline const std::string kQuadraticFormula =
    "(((1.5 * threshold) * (1.5 * threshold)) / (((1.5 * threshold) - util) * ((1.5 * threshold) - util)))";

inline WeightExpr quadratic_formula() { return parse(kQuadraticFormula); }

inline std::string source_path(const std::string& rel) { return std::string(GENADAPT_SOURCE_DIR) + "/" + rel; }

}  // namespace genadapt::testing
