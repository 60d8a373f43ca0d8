#include <gtest/gtest.h>

#include <cfloat>
#include <cmath>

#include "fixtures.hpp"
#include "genadapt/errors.hpp"
#include "genadapt/random.hpp"
#include "genadapt/weight_expr.hpp"

using namespace genadapt;
using namespace genadapt::testing;

namespace {

WeightExpr leaf(Symbol s) { return WeightExpr::terminal(s); }
WeightExpr num(double v) { return WeightExpr::constant(v); }
WeightExpr op(Symbol s, const WeightExpr& a, const WeightExpr& b) { return WeightExpr::binary(s, a, b); }

// Left-leaning chain of additions with the given depth.
WeightExpr chain(int depth) {
  WeightExpr e = leaf(Symbol::Utilization);
  for (int d = 1; d < depth; ++d) e = op(Symbol::Add, e, num(d));
  return e;
}

bool grammar_valid(const WeightExpr& e) {
  // Prefix sequence must form exactly one tree: operators need two operands.
  int open = 1;
  for (const ExprNode& n : e.nodes()) {
    if (open == 0) return false;
    open += is_operator(n.symbol) ? 1 : -1;
  }
  return open == 0;
}

}  // namespace

TEST(Eval, QuadraticFormulaAtSixtyPercent) {
  EXPECT_NEAR(eval(quadratic_formula(), {100, 25, 0.6, 0.8}), 4.0, 1e-12);
}

TEST(Eval, QuadraticFormulaAtThirtyPercent) {
  EXPECT_NEAR(eval(quadratic_formula(), {100, 25, 0.3, 0.8}), 1.44 / 0.81, 1e-12);
}

TEST(Eval, ProtectedDivision) {
  EXPECT_EQ(eval(op(Symbol::Div, leaf(Symbol::Utilization), num(0)), {100, 25, 0.7, 0.8}), 1.0);
  EXPECT_EQ(eval(op(Symbol::Div, num(5), num(1e-12)), {}), 1.0);
  EXPECT_EQ(eval(op(Symbol::Div, num(6), num(3)), {}), 2.0);
}

TEST(Eval, TerminalsReadContext) {
  const EvalContext ctx{100, 25, 0.5, 0.8};
  EXPECT_EQ(eval(leaf(Symbol::Bandwidth), ctx), 100);
  EXPECT_EQ(eval(leaf(Symbol::Delay), ctx), 25);
  EXPECT_EQ(eval(leaf(Symbol::Utilization), ctx), 0.5);
  EXPECT_EQ(eval(leaf(Symbol::Threshold), ctx), 0.8);
  EXPECT_EQ(eval(op(Symbol::Sub, leaf(Symbol::Delay), leaf(Symbol::Bandwidth)), ctx), -75);
}

TEST(Eval, StaysFiniteOnOverflow) {
  WeightExpr e = num(1e300);
  for (int i = 0; i < 5; ++i) e = op(Symbol::Mul, e, e);
  const double v = eval(e, {});
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_EQ(v, DBL_MAX);
  const double w = eval(op(Symbol::Sub, num(0), e), {});
  EXPECT_EQ(w, -DBL_MAX);
}

TEST(Eval, FiniteOnRandomTrees) {
  Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    const WeightExpr e = grow_random(15, rng);
    for (double u : {0.0, 0.3, 1.2, 1.5}) {
      const double v = eval(e, {100, 25, u, 0.8});
      ASSERT_TRUE(std::isfinite(v)) << format(e);
      ASSERT_GE(to_weight(v), 1);
    }
  }
}

TEST(ToWeight, FloorsAbsoluteValueAndClamps) {
  EXPECT_EQ(to_weight(4.0), 4);
  EXPECT_EQ(to_weight(1.777), 1);
  EXPECT_EQ(to_weight(-2.6), 2);
  EXPECT_EQ(to_weight(0.3), 1);
  EXPECT_EQ(to_weight(0.0), 1);
  EXPECT_EQ(to_weight(3.5), 3);
  EXPECT_EQ(to_weight(DBL_MAX), kMaxWeight);
  EXPECT_EQ(to_weight(std::nan("")), 1);
}

TEST(ToWeight, AbsorbsRoundingJustBelowAnInteger) {
  // 1.44 / 0.36 is not exactly 4 in binary floating point.
  const double v = (1.5 * 0.8) * (1.5 * 0.8) / (((1.5 * 0.8) - 0.6) * ((1.5 * 0.8) - 0.6));
  EXPECT_LT(v, 4.0);
  EXPECT_EQ(to_weight(v), 4);
  EXPECT_EQ(to_weight(3.9999), 3);
}

TEST(LinkWeights, ExampleStateGivesFourAndOnes) {
  const Network net = fig1_network();
  std::vector<double> util(net.link_count(), 0.0);
  util[link_between(net, s1, s2)] = 0.6;
  util[link_between(net, s1, s3)] = 0.3;
  util[link_between(net, s3, s2)] = 0.3;
  const WeightAssignment w = link_weights(quadratic_formula(), net, util, 0.8);
  for (const Link& l : net.links()) EXPECT_EQ(w[l.id], l.id == link_between(net, s1, s2) ? 4 : 1) << l.id;
}

TEST(Grow, DepthOneIsALeaf) {
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const WeightExpr e = grow_random(1, rng);
    EXPECT_EQ(e.size(), 1u);
    EXPECT_FALSE(is_operator(e.nodes()[0].symbol));
  }
}

TEST(Grow, DeterministicUnderSeed) {
  Rng a(77), b(77);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(grow_random(15, a), grow_random(15, b));
}

TEST(Grow, NeverExceedsDepth) {
  Rng rng(3);
  int max_seen = 0;
  for (int i = 0; i < 10000; ++i) {
    const WeightExpr e = grow_random(15, rng);
    ASSERT_LE(e.depth(), 15);
    ASSERT_TRUE(grammar_valid(e));
    max_seen = std::max(max_seen, e.depth());
  }
  EXPECT_GT(max_seen, 5);
}

TEST(Grow, ConstantsStayInRange) {
  Rng rng(4);
  for (int i = 0; i < 500; ++i) {
    for (const ExprNode& n : grow_random(8, rng, {10, 20}).nodes()) {
      if (n.symbol == Symbol::Const) {
        EXPECT_GE(n.value, 10);
        EXPECT_LE(n.value, 20);
      }
    }
  }
}

TEST(Crossover, LeavesSwap) {
  Rng rng(9);
  const auto [c1, c2] = crossover(leaf(Symbol::Utilization), num(3), rng, 15);
  EXPECT_EQ(c1, num(3));
  EXPECT_EQ(c2, leaf(Symbol::Utilization));
}

TEST(Crossover, OverDeepChildFallsBackToParent) {
  // Any crossover point below the root of `a` receiving the whole of `b`
  // overflows depth 15; whatever is drawn, both children respect the limit
  // and an over-deep child equals its parent.
  const WeightExpr a = chain(15);
  const WeightExpr b = chain(15);
  Rng rng(11);
  int repaired = 0;
  for (int i = 0; i < 500; ++i) {
    const auto [c1, c2] = crossover(a, b, rng, 15);
    ASSERT_LE(c1.depth(), 15);
    ASSERT_LE(c2.depth(), 15);
    if (c1 == a) ++repaired;
  }
  EXPECT_GT(repaired, 0);
}

TEST(Crossover, DeterministicAndBounded) {
  Rng gen(12);
  std::vector<WeightExpr> pool;
  for (int i = 0; i < 40; ++i) pool.push_back(grow_random(15, gen));
  Rng r1(5), r2(5);
  for (std::size_t i = 0; i + 1 < pool.size(); ++i) {
    const auto x = crossover(pool[i], pool[i + 1], r1, 15);
    const auto y = crossover(pool[i], pool[i + 1], r2, 15);
    EXPECT_EQ(x, y);
    EXPECT_LE(x.first.depth(), 15);
    EXPECT_LE(x.second.depth(), 15);
    if (x.first != pool[i] && x.second != pool[i + 1]) {
      EXPECT_EQ(x.first.size() + x.second.size(), pool[i].size() + pool[i + 1].size());
    }
  }
}

TEST(Mutate, LeafBecomesGrownTree) {
  // With a single node the root is the only mutation point, so the result is
  // exactly what grow_random would draw from the same generator state.
  Rng a(21), b(21);
  const WeightExpr m = mutate(leaf(Symbol::Delay), a, 15);
  (void)b.uniform_index(1);
  EXPECT_EQ(m, grow_random(15, b));
}

TEST(Mutate, BoundedAndDeterministic) {
  Rng gen(31), r1(8), r2(8);
  for (int i = 0; i < 2000; ++i) {
    const WeightExpr e = grow_random(15, gen);
    const WeightExpr m1 = mutate(e, r1, 15);
    const WeightExpr m2 = mutate(e, r2, 15);
    ASSERT_EQ(m1, m2);
    ASSERT_LE(m1.depth(), 15);
    ASSERT_TRUE(grammar_valid(m1));
  }
}

TEST(Format, FullyParenthesized) {
  const WeightExpr th = leaf(Symbol::Threshold);
  const WeightExpr diff = op(Symbol::Sub, th, leaf(Symbol::Utilization));
  const WeightExpr e = op(Symbol::Div, op(Symbol::Mul, th, th), op(Symbol::Mul, diff, diff));
  EXPECT_EQ(format(e), "((threshold * threshold) / ((threshold - util) * (threshold - util)))");
  EXPECT_EQ(parse(format(e)), e);
}

TEST(Parse, Leaves) {
  EXPECT_EQ(parse("util"), leaf(Symbol::Utilization));
  EXPECT_EQ(parse("  bw "), leaf(Symbol::Bandwidth));
  EXPECT_EQ(parse("dl"), leaf(Symbol::Delay));
  EXPECT_EQ(parse("2.5"), num(2.5));
  EXPECT_EQ(parse("(1+2)"), op(Symbol::Add, num(1), num(2)));
}

TEST(Parse, ErrorOffsets) {
  try {
    parse("(1 +");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 4u);
  }
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("(1 2)"), ParseError);
  EXPECT_THROW(parse("(1 + 2"), ParseError);
  EXPECT_THROW(parse("(1 + 2) 3"), ParseError);
  EXPECT_THROW(parse("load"), ParseError);
  EXPECT_THROW(parse("1 + 2"), ParseError);
}

TEST(Parse, RoundTripsRandomTrees) {
  Rng rng(41);
  for (int i = 0; i < 3000; ++i) {
    const WeightExpr e = grow_random(15, rng);
    ASSERT_EQ(parse(format(e)), e) << format(e);
  }
}

TEST(WeightExpr, SubtreeEditing) {
  const WeightExpr e = quadratic_formula();
  EXPECT_EQ(e.depth(), 5);
  EXPECT_EQ(e.subtree(0), e);
  EXPECT_EQ(e.subtree_end(0), e.size());
  EXPECT_EQ(e.depth_of(0), 1);
  EXPECT_EQ(e.depth_of(1), 2);
  const WeightExpr replaced = e.with_subtree(1, num(1));
  EXPECT_EQ(format(replaced), "(1 / (((1.5 * threshold) - util) * ((1.5 * threshold) - util)))");
  EXPECT_THROW(WeightExpr::from_prefix({ExprNode{Symbol::Add, 0}}), StructuralError);
  EXPECT_EQ(WeightExpr(), num(0));
}
