#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "genadapt/errors.hpp"
#include "genadapt/mapek.hpp"

using namespace genadapt;
using namespace genadapt::testing;

namespace {

Snapshot example_snapshot(int flows_on_direct, double t = 20) {
  const Network net = fig1_network();
  std::vector<Flow> flows;
  for (RequestId r = 0; r < flows_on_direct; ++r) flows.push_back({r, path_through(net, {s1, s2})});
  return make_snapshot(net, t, flows, Bandwidths(flows_on_direct, 30));
}

// Nested sums reaching exactly `depth`.
std::string formula_of_depth(int depth) {
  std::string s = "util";
  for (int d = 1; d < depth; ++d) s = "(" + s + " + 1)";
  return s;
}

}  // namespace

TEST(Detect, StrictlyAboveThreshold) {
  EXPECT_TRUE(detect(example_snapshot(3), 0.8));
  const Network net = fig1_network();
  const std::vector<Flow> at_threshold{{0, path_through(net, {s1, s2})}};
  EXPECT_FALSE(detect(make_snapshot(net, 0, at_threshold, Bandwidths{80}), 0.8));
  EXPECT_FALSE(detect(example_snapshot(0), 0.8));
}

TEST(KnowledgeBase, SortsAndTruncates) {
  KnowledgeBase kb(3);
  EXPECT_TRUE(kb.empty());
  std::vector<Individual> inds;
  for (double f : {0.5, 0.2, 0.9, 0.1}) inds.push_back(Individual{WeightExpr::constant(f), f});
  inds.push_back(Individual{WeightExpr::constant(42), std::nullopt});
  kb.replace(inds, Provenance::ThisRun);
  ASSERT_EQ(kb.size(), 3u);
  EXPECT_EQ(*kb.retained()[0].fitness, 0.1);
  EXPECT_EQ(*kb.retained()[1].fitness, 0.2);
  EXPECT_EQ(*kb.retained()[2].fitness, 0.5);
  EXPECT_EQ(kb.provenance(), Provenance::ThisRun);
}

TEST(Controller, QuietNetworkNeverPlans) {
  const Network net = fig1_network();
  AdaptationController ctrl(net, GpConfig{}, KnowledgeBase(5));
  Rng rng(0);
  for (int t = 0; t < 5; ++t) {
    const Snapshot snap = example_snapshot(2, t);
    EXPECT_FALSE(ctrl.step(snap, Bandwidths(2, 30), rng).has_value());
  }
  EXPECT_EQ(ctrl.state().invocation_count, 0);
  EXPECT_FALSE(ctrl.state().active_expr.has_value());
  EXPECT_EQ(ctrl.routing_weights(std::vector<double>(net.link_count(), 0.7)), WeightAssignment(12, 1));
}

TEST(Controller, CongestionInstallsFormulaAndFillsKnowledgeBase) {
  const Network net = fig1_network();
  GpConfig cfg;
  cfg.max_generations = 300;
  AdaptationController ctrl(net, cfg, KnowledgeBase(cfg.retained_count()));
  Rng rng(3);
  const Snapshot snap = example_snapshot(3);
  const auto flows = ctrl.step(snap, Bandwidths(3, 30), rng);
  ASSERT_TRUE(flows.has_value());
  EXPECT_EQ(flows->size(), 3u);
  EXPECT_LE(max_utilization(link_utilizations(net, *flows, Bandwidths(3, 30))), 0.8);
  EXPECT_EQ(ctrl.state().invocation_count, 1);
  ASSERT_TRUE(ctrl.state().active_expr.has_value());
  EXPECT_EQ(ctrl.knowledge_base().size(), 5u);
  ASSERT_EQ(ctrl.state().log.size(), 1u);
  const InvocationRecord& rec = ctrl.state().log[0];
  EXPECT_EQ(rec.t, 20);
  EXPECT_NEAR(rec.max_util, 0.9, 1e-12);
  EXPECT_EQ(rec.formula, format(*ctrl.state().active_expr));
  EXPECT_GE(rec.wallclock_ms, 0.0);
  EXPECT_EQ(rec.bootstrapped, 0u);

  const std::vector<double> util(net.link_count(), 0.4);
  EXPECT_EQ(ctrl.routing_weights(util), link_weights(*ctrl.state().active_expr, net, util, 0.8));
}

TEST(Controller, SecondInvocationReusesHalfThePopulation) {
  const Network net = fig1_network();
  GpConfig cfg;
  cfg.max_generations = 300;
  AdaptationController ctrl(net, cfg, KnowledgeBase(cfg.retained_count()));
  Rng rng(5);
  ASSERT_TRUE(ctrl.step(example_snapshot(3, 20), Bandwidths(3, 30), rng));
  const std::vector<Individual> first_round(ctrl.knowledge_base().retained().begin(),
                                            ctrl.knowledge_base().retained().end());
  ASSERT_TRUE(ctrl.step(example_snapshot(3, 30), Bandwidths(3, 30), rng));
  const InvocationRecord& second = ctrl.state().log.at(1);
  EXPECT_EQ(second.bootstrapped, 5u);
  ASSERT_EQ(second.initial_population.size(), 10u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(second.initial_population[i].expr, first_round[i].expr);
  EXPECT_EQ(ctrl.state().invocation_count, 2);
  EXPECT_EQ(ctrl.knowledge_base().size(), 5u);
}

TEST(KbFiles, ExportImportRoundTrip) {
  KnowledgeBase kb(5);
  std::vector<Individual> inds{{quadratic_formula(), 1.740099}, {parse("(bw / dl)"), 1.9}, {parse("util"), std::nullopt}};
  kb.replace(inds, Provenance::ThisRun);
  std::stringstream ss;
  export_kb(kb, ss);
  const KnowledgeBase back = import_kb(ss, 15, 5);
  ASSERT_EQ(back.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back.retained()[i].expr, kb.retained()[i].expr);
    EXPECT_FALSE(back.retained()[i].fitness.has_value());
  }
  EXPECT_EQ(back.provenance(), Provenance::Imported);
}

TEST(KbFiles, ExportNeedsContent) {
  std::stringstream ss;
  EXPECT_THROW(export_kb(KnowledgeBase(5), ss), Error);
}

TEST(KbFiles, RejectsTooDeepFormula) {
  std::stringstream ok("0.5 " + formula_of_depth(15) + "\n");
  EXPECT_EQ(import_kb(ok, 15, 5).size(), 1u);
  std::stringstream deep("0.5 util\n\n0.7 " + formula_of_depth(17) + "\n");
  try {
    import_kb(deep, 15, 5);
    FAIL();
  } catch (const FileFormatError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("depth 17"), std::string::npos);
  }
}

TEST(KbFiles, MalformedLinesNameTheLine) {
  for (const char* text : {"# header\nutil\n", "# header\nabc util\n", "# header\n0.5 (util +\n"}) {
    std::stringstream ss(text);
    try {
      import_kb(ss, 15, 5);
      FAIL() << text;
    } catch (const FileFormatError& e) {
      EXPECT_EQ(e.line(), 2u) << text;
    }
  }
}

TEST(KbFiles, ImportedFormulasSeedHalfThePopulation) {
  std::stringstream ss;
  for (const char* f : {"util", "(util * 2)", "(bw / dl)", "(threshold - util)", "((util * util) + 1)"})
    ss << "nan " << f << '\n';
  const KnowledgeBase kb = import_kb(ss, 15, 5);
  ASSERT_EQ(kb.size(), 5u);
  const Network net = fig1_network();
  AdaptationController ctrl(net, GpConfig{}, kb);
  Rng rng(2);
  ASSERT_TRUE(ctrl.step(example_snapshot(3), Bandwidths(3, 30), rng));
  const InvocationRecord& rec = ctrl.state().log.at(0);
  EXPECT_EQ(rec.bootstrapped, 5u);
  ASSERT_EQ(rec.initial_population.size(), 10u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(rec.initial_population[i].expr, kb.retained()[i].expr);
}

TEST(KbFiles, FileErrorsMentionPath) {
  const auto missing = std::filesystem::temp_directory_path() / "genadapt_no_such_kb.txt";
  try {
    import_kb_file(missing, 15, 5);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find(missing.string()), std::string::npos);
  }
  const auto bad = std::filesystem::temp_directory_path() / "genadapt_bad_kb.txt";
  std::ofstream(bad) << "0.1 util\nbroken\n";
  try {
    import_kb_file(bad, 15, 5);
    FAIL();
  } catch (const FileFormatError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find(bad.string()), std::string::npos);
  }
  std::filesystem::remove(bad);
}

TEST(KbFiles, BundledExampleFormula) {
  const KnowledgeBase kb = import_kb_file(source_path("scenarios/fig1.kb"), 15, 5);
  ASSERT_EQ(kb.size(), 1u);
  EXPECT_EQ(kb.retained()[0].expr, quadratic_formula());
}
