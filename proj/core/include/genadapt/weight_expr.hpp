#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "genadapt/netmodel.hpp"
#include "genadapt/random.hpp"

namespace genadapt {

/// Grammar symbols. The first four are binary operators; the rest are leaves.
enum class Symbol : std::uint8_t {
  Add,
  Sub,
  Mul,
  Div,
  Const,
  Bandwidth,    // bw(e), Mbps
  Delay,        // dl(e), ms
  Utilization,  // util(e)
  Threshold,
};

constexpr bool is_operator(Symbol s) noexcept { return s <= Symbol::Div; }

struct ExprNode {
  Symbol symbol = Symbol::Const;
  double value = 0.0;  // only meaningful for Const

  bool operator==(const ExprNode&) const = default;
};

/// Link-weight formula over {+, -, *, /} with constant, bw, dl, util and
/// threshold leaves.
///
/// Stored in prefix order, so every subtree is a contiguous node range
/// starting at its root. Values are immutable; editing operations return a
/// new tree. Depth counts nodes: a single leaf has depth 1.
class WeightExpr {
 public:
  /// A Const(0) leaf.
  WeightExpr() = default;

  static WeightExpr constant(double value);
  static WeightExpr terminal(Symbol leaf);
  static WeightExpr binary(Symbol op, const WeightExpr& lhs, const WeightExpr& rhs);

  /// Adopts a prefix node sequence. Throws StructuralError if it is not
  /// exactly one complete tree.
  static WeightExpr from_prefix(std::vector<ExprNode> nodes);

  std::span<const ExprNode> nodes() const noexcept { return nodes_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  int depth() const;

  /// One past the last node of the subtree rooted at `root`.
  std::size_t subtree_end(std::size_t root) const;
  /// Depth of node `index` within the tree; the root is at depth 1.
  int depth_of(std::size_t index) const;

  WeightExpr subtree(std::size_t root) const;
  WeightExpr with_subtree(std::size_t root, const WeightExpr& replacement) const;

  bool operator==(const WeightExpr&) const = default;

 private:
  explicit WeightExpr(std::vector<ExprNode> nodes) : nodes_(std::move(nodes)) {}

  std::vector<ExprNode> nodes_{ExprNode{}};
};

struct EvalContext {
  double bw_mbps = 0.0;
  double dl_ms = 0.0;
  double util = 0.0;
  double threshold = 0.8;
};

/// Denominators smaller than this in magnitude make a division yield 1.
inline constexpr double kProtectedDivisionEpsilon = 1e-9;

/// Largest weight to_weight returns. Keeps path sums far from overflow.
inline constexpr Weight kMaxWeight = Weight{1} << 40;

/// Arithmetic evaluation. Total and always finite: division is protected
/// and overflow saturates at +/-DBL_MAX.
double eval(const WeightExpr& expr, const EvalContext& ctx);

/// max(1, floor(|v|)), capped at kMaxWeight. Values within a relative 1e-9
/// below an integer floor to that integer, so arithmetic like 1.2^2/0.6^2
/// (3.9999999999999982 in binary floating point) yields 4.
Weight to_weight(double v);

/// Weight of one link under a formula.
Weight link_weight(const WeightExpr& expr, const Link& link, double util, double threshold);

/// Weights of every link for the given utilizations.
WeightAssignment link_weights(const WeightExpr& expr, const Network& net, std::span<const double> util,
                              double threshold);

struct ConstRange {
  double min = 0.0;
  double max = 100.0;
};

/// Random tree via the grow method: above the depth limit each node is drawn
/// uniformly from all nine symbols; at the limit only leaves are drawn.
/// Constants are uniform in `range`.
WeightExpr grow_random(int max_depth, Rng& rng, ConstRange range = {});

/// One-point crossover: swaps one uniformly chosen subtree of each parent. A
/// child deeper than `max_depth` is replaced by a copy of its own parent.
std::pair<WeightExpr, WeightExpr> crossover(const WeightExpr& a, const WeightExpr& b, Rng& rng,
                                            int max_depth);

/// One-point mutation: a uniformly chosen subtree is replaced by a grown tree
/// small enough that the result stays within `max_depth`.
WeightExpr mutate(const WeightExpr& expr, Rng& rng, int max_depth, ConstRange range = {});

/// Fully parenthesized infix text, e.g. `((threshold * 2) / (threshold - util))`.
std::string format(const WeightExpr& expr);

/// Inverse of format. Whitespace between tokens is free. Throws ParseError.
WeightExpr parse(std::string_view text);

}  // namespace genadapt
