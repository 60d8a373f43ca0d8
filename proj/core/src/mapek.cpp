#include "genadapt/mapek.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "genadapt/errors.hpp"
#include "text_util.hpp"

namespace genadapt {

void KnowledgeBase::replace(std::vector<Individual> individuals, Provenance provenance) {
  std::stable_sort(individuals.begin(), individuals.end(), [](const Individual& a, const Individual& b) {
    if (a.fitness && b.fitness) return *a.fitness < *b.fitness;
    return a.fitness.has_value() && !b.fitness.has_value();
  });
  if (individuals.size() > capacity_) individuals.resize(capacity_);
  retained_ = std::move(individuals);
  provenance_ = provenance;
}

bool detect(const Snapshot& snapshot, double threshold) {
  return std::any_of(snapshot.util.begin(), snapshot.util.end(), [&](double u) { return u > threshold; });
}

AdaptationController::AdaptationController(const Network& net, GpConfig config, KnowledgeBase kb)
    : net_(&net), config_(std::move(config)), kb_(std::move(kb)) {
  config_.validate();
}

std::optional<std::vector<Flow>> AdaptationController::step(const Snapshot& snapshot,
                                                            std::span<const double> bandwidths, Rng& rng) {
  if (!detect(snapshot, config_.threshold)) return std::nullopt;

  const auto started = std::chrono::steady_clock::now();
  PlanResult plan = gen_plan(*net_, snapshot.flows, bandwidths, kb_.retained(), config_, rng);
  const std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - started;

  InvocationRecord rec;
  rec.t = snapshot.t;
  rec.max_util = max_utilization(snapshot.util);
  rec.generations = plan.generations;
  rec.best_fitness = *plan.best.fitness;
  rec.wallclock_ms = elapsed.count();
  rec.formula = format(plan.best.expr);
  rec.rerouted = plan.rerouted;
  rec.bootstrapped = plan.bootstrapped;
  rec.initial_population = std::move(plan.initial_population);

  state_.active_expr = plan.best.expr;
  ++state_.invocation_count;
  state_.log.push_back(std::move(rec));
  kb_.replace(std::move(plan.retained), Provenance::ThisRun);
  return std::move(plan.new_flows);
}

WeightAssignment AdaptationController::routing_weights(std::span<const double> util) const {
  if (!state_.active_expr) return WeightAssignment(net_->link_count(), 1);
  return link_weights(*state_.active_expr, *net_, util, config_.threshold);
}

void export_kb(const KnowledgeBase& kb, std::ostream& out) {
  if (kb.empty()) throw Error("knowledge base is empty; nothing to export");
  for (const Individual& ind : kb.retained()) {
    out << (ind.fitness ? detail::fixed6(*ind.fitness) : std::string("nan")) << ' ' << format(ind.expr) << '\n';
  }
}

void export_kb_file(const KnowledgeBase& kb, const std::filesystem::path& path) {
  std::ostringstream ss;
  export_kb(kb, ss);
  detail::write_file(path, ss.str());
}

KnowledgeBase import_kb(std::istream& in, int max_depth, std::size_t capacity) {
  std::vector<Individual> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = detail::trim(detail::strip_comment(line));
    if (body.empty()) continue;
    const auto space = body.find_first_of(" \t");
    if (space == std::string_view::npos) throw FileFormatError("expected `<fitness> <formula>`", line_no);
    const std::string_view fitness_text = body.substr(0, space);
    double fitness = 0.0;
    if (fitness_text != "nan" && !detail::parse_double(fitness_text, fitness))
      throw FileFormatError("bad fitness value `" + std::string(fitness_text) + "`", line_no);
    WeightExpr expr;
    try {
      expr = parse(body.substr(space + 1));
    } catch (const ParseError& e) {
      throw FileFormatError(std::string("formula: ") + e.what(), line_no);
    }
    if (expr.depth() > max_depth)
      throw FileFormatError("formula depth " + std::to_string(expr.depth()) + " exceeds limit " +
                                std::to_string(max_depth),
                            line_no);
    entries.push_back(Individual{std::move(expr), std::nullopt});
  }
  KnowledgeBase kb(capacity);
  kb.replace(std::move(entries), Provenance::Imported);
  return kb;
}

KnowledgeBase import_kb_file(const std::filesystem::path& path, int max_depth, std::size_t capacity) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return import_kb(in, max_depth, capacity);
  } catch (const FileFormatError& e) {
    throw FileFormatError(path.string() + ": " + e.detail(), e.line());
  }
}

}  // namespace genadapt
