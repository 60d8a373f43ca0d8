#include "genadapt/weight_expr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "genadapt/errors.hpp"

namespace genadapt {

namespace {

constexpr int arity(Symbol s) { return is_operator(s) ? 2 : 0; }

constexpr Symbol kAllSymbols[] = {Symbol::Add,       Symbol::Sub,   Symbol::Mul,
                                  Symbol::Div,       Symbol::Const, Symbol::Bandwidth,
                                  Symbol::Delay,     Symbol::Utilization, Symbol::Threshold};
constexpr Symbol kLeafSymbols[] = {Symbol::Const, Symbol::Bandwidth, Symbol::Delay,
                                   Symbol::Utilization, Symbol::Threshold};

double saturate(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return 0.0;
  return x > 0 ? std::numeric_limits<double>::max() : -std::numeric_limits<double>::max();
}

double eval_at(std::span<const ExprNode> nodes, std::size_t& i, const EvalContext& ctx) {
  const ExprNode& n = nodes[i++];
  switch (n.symbol) {
    case Symbol::Const: return n.value;
    case Symbol::Bandwidth: return ctx.bw_mbps;
    case Symbol::Delay: return ctx.dl_ms;
    case Symbol::Utilization: return ctx.util;
    case Symbol::Threshold: return ctx.threshold;
    default: break;
  }
  const double lhs = eval_at(nodes, i, ctx);
  const double rhs = eval_at(nodes, i, ctx);
  switch (n.symbol) {
    case Symbol::Add: return saturate(lhs + rhs);
    case Symbol::Sub: return saturate(lhs - rhs);
    case Symbol::Mul: return saturate(lhs * rhs);
    case Symbol::Div:
      if (std::abs(rhs) < kProtectedDivisionEpsilon) return 1.0;
      return saturate(lhs / rhs);
    default: return 0.0;  // unreachable
  }
}

ExprNode random_leaf(Rng& rng, ConstRange range) {
  const Symbol s = kLeafSymbols[rng.uniform_index(std::size(kLeafSymbols))];
  return ExprNode{s, s == Symbol::Const ? rng.uniform_real(range.min, range.max) : 0.0};
}

void grow_into(std::vector<ExprNode>& out, int remaining, Rng& rng, ConstRange range) {
  if (remaining <= 1) {
    out.push_back(random_leaf(rng, range));
    return;
  }
  const Symbol s = kAllSymbols[rng.uniform_index(std::size(kAllSymbols))];
  if (!is_operator(s)) {
    out.push_back(ExprNode{s, s == Symbol::Const ? rng.uniform_real(range.min, range.max) : 0.0});
    return;
  }
  out.push_back(ExprNode{s, 0.0});
  grow_into(out, remaining - 1, rng, range);
  grow_into(out, remaining - 1, rng, range);
}

}  // namespace

WeightExpr WeightExpr::constant(double value) { return WeightExpr({ExprNode{Symbol::Const, value}}); }

WeightExpr WeightExpr::terminal(Symbol leaf) {
  if (is_operator(leaf)) throw StructuralError("terminal() needs a leaf symbol");
  return WeightExpr({ExprNode{leaf, 0.0}});
}

WeightExpr WeightExpr::binary(Symbol op, const WeightExpr& lhs, const WeightExpr& rhs) {
  if (!is_operator(op)) throw StructuralError("binary() needs an operator symbol");
  std::vector<ExprNode> nodes;
  nodes.reserve(1 + lhs.size() + rhs.size());
  nodes.push_back(ExprNode{op, 0.0});
  nodes.insert(nodes.end(), lhs.nodes_.begin(), lhs.nodes_.end());
  nodes.insert(nodes.end(), rhs.nodes_.begin(), rhs.nodes_.end());
  return WeightExpr(std::move(nodes));
}

WeightExpr WeightExpr::from_prefix(std::vector<ExprNode> nodes) {
  std::size_t need = 1;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (need == 0) throw StructuralError("trailing nodes after a complete tree");
    need = need - 1 + arity(nodes[i].symbol);
  }
  if (need != 0) throw StructuralError("incomplete tree");
  return WeightExpr(std::move(nodes));
}

int WeightExpr::depth() const {
  int max_depth = 0;
  std::vector<int> pending;
  for (const ExprNode& n : nodes_) {
    max_depth = std::max(max_depth, static_cast<int>(pending.size()) + 1);
    if (is_operator(n.symbol)) {
      pending.push_back(2);
      continue;
    }
    while (!pending.empty() && --pending.back() == 0) pending.pop_back();
  }
  return max_depth;
}

std::size_t WeightExpr::subtree_end(std::size_t root) const {
  if (root >= nodes_.size()) throw StructuralError("node index out of range");
  std::size_t need = 1;
  std::size_t i = root;
  while (need > 0) {
    need = need - 1 + arity(nodes_[i].symbol);
    ++i;
  }
  return i;
}

int WeightExpr::depth_of(std::size_t index) const {
  if (index >= nodes_.size()) throw StructuralError("node index out of range");
  std::vector<int> pending;
  for (std::size_t i = 0; i < index; ++i) {
    if (is_operator(nodes_[i].symbol)) {
      pending.push_back(2);
      continue;
    }
    while (!pending.empty() && --pending.back() == 0) pending.pop_back();
  }
  return static_cast<int>(pending.size()) + 1;
}

WeightExpr WeightExpr::subtree(std::size_t root) const {
  const std::size_t end = subtree_end(root);
  return WeightExpr(std::vector<ExprNode>(nodes_.begin() + root, nodes_.begin() + end));
}

WeightExpr WeightExpr::with_subtree(std::size_t root, const WeightExpr& replacement) const {
  const std::size_t end = subtree_end(root);
  std::vector<ExprNode> nodes;
  nodes.reserve(nodes_.size() - (end - root) + replacement.size());
  nodes.insert(nodes.end(), nodes_.begin(), nodes_.begin() + root);
  nodes.insert(nodes.end(), replacement.nodes_.begin(), replacement.nodes_.end());
  nodes.insert(nodes.end(), nodes_.begin() + end, nodes_.end());
  return WeightExpr(std::move(nodes));
}

double eval(const WeightExpr& expr, const EvalContext& ctx) {
  std::size_t i = 0;
  return eval_at(expr.nodes(), i, ctx);
}

Weight to_weight(double v) {
  if (std::isnan(v)) return 1;
  const double a = std::abs(v);
  if (std::isinf(a)) return kMaxWeight;
  const double snapped = std::floor(a * (1.0 + 1e-9));
  if (snapped >= static_cast<double>(kMaxWeight)) return kMaxWeight;
  return std::max<Weight>(1, static_cast<Weight>(snapped));
}

Weight link_weight(const WeightExpr& expr, const Link& link, double util, double threshold) {
  return to_weight(eval(expr, EvalContext{link.bw_mbps, link.dl_ms, util, threshold}));
}

WeightAssignment link_weights(const WeightExpr& expr, const Network& net, std::span<const double> util,
                              double threshold) {
  if (util.size() != static_cast<std::size_t>(net.link_count()))
    throw StructuralError("utilization vector does not cover every link");
  WeightAssignment w(net.link_count());
  for (const Link& l : net.links()) w[l.id] = link_weight(expr, l, util[l.id], threshold);
  return w;
}

WeightExpr grow_random(int max_depth, Rng& rng, ConstRange range) {
  if (max_depth < 1) throw ConfigError("max_depth must be at least 1");
  std::vector<ExprNode> nodes;
  grow_into(nodes, max_depth, rng, range);
  return WeightExpr::from_prefix(std::move(nodes));
}

std::pair<WeightExpr, WeightExpr> crossover(const WeightExpr& a, const WeightExpr& b, Rng& rng,
                                            int max_depth) {
  const std::size_t i = rng.uniform_index(a.size());
  const std::size_t j = rng.uniform_index(b.size());
  WeightExpr first = a.with_subtree(i, b.subtree(j));
  WeightExpr second = b.with_subtree(j, a.subtree(i));
  if (first.depth() > max_depth) first = a;
  if (second.depth() > max_depth) second = b;
  return {std::move(first), std::move(second)};
}

WeightExpr mutate(const WeightExpr& expr, Rng& rng, int max_depth, ConstRange range) {
  const std::size_t i = rng.uniform_index(expr.size());
  const int room = std::max(1, max_depth - expr.depth_of(i) + 1);
  return expr.with_subtree(i, grow_random(room, rng, range));
}

}  // namespace genadapt
