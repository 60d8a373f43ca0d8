#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "genadapt/genplan.hpp"
#include "genadapt/netmodel.hpp"
#include "genadapt/random.hpp"
#include "genadapt/weight_expr.hpp"

namespace genadapt {

enum class Provenance { ThisRun, Imported };

/// Best formulas kept between planner invocations, ascending by fitness.
/// Holds at most `capacity` entries (population_size / 2).
class KnowledgeBase {
 public:
  explicit KnowledgeBase(std::size_t capacity = 5) : capacity_(capacity) {}

  /// Replaces the contents. Evaluated individuals are ordered by fitness
  /// (stable, unevaluated ones last) and the list is cut to capacity.
  void replace(std::vector<Individual> individuals, Provenance provenance);

  std::span<const Individual> retained() const noexcept { return retained_; }
  Provenance provenance() const noexcept { return provenance_; }
  std::size_t capacity() const noexcept { return capacity_; }
  bool empty() const noexcept { return retained_.empty(); }
  std::size_t size() const noexcept { return retained_.size(); }

 private:
  std::size_t capacity_;
  std::vector<Individual> retained_;
  Provenance provenance_ = Provenance::ThisRun;
};

/// Strictly above threshold on some link.
bool detect(const Snapshot& snapshot, double threshold);

struct InvocationRecord {
  double t = 0.0;
  double max_util = 0.0;
  int generations = 0;
  double best_fitness = 0.0;
  double wallclock_ms = 0.0;
  std::string formula;
  std::vector<RequestId> rerouted;
  std::size_t bootstrapped = 0;
  std::vector<Individual> initial_population;
};

struct AdaptationState {
  std::optional<WeightExpr> active_expr;  // nullopt: baseline unit weights
  int invocation_count = 0;
  std::vector<InvocationRecord> log;
};

/// The monitor / analyze / plan / execute loop around one network.
class AdaptationController {
 public:
  AdaptationController(const Network& net, GpConfig config, KnowledgeBase kb);

  /// One monitoring period. Returns the complete re-routed flow set when the
  /// snapshot was congested and a plan was made, otherwise nullopt.
  std::optional<std::vector<Flow>> step(const Snapshot& snapshot, std::span<const double> bandwidths,
                                        Rng& rng);

  const AdaptationState& state() const noexcept { return state_; }
  const KnowledgeBase& knowledge_base() const noexcept { return kb_; }
  const GpConfig& config() const noexcept { return config_; }

  /// Routing weights for new arrivals: the installed formula over `util`, or
  /// all ones before the first adaptation.
  WeightAssignment routing_weights(std::span<const double> util) const;

 private:
  const Network* net_;
  GpConfig config_;
  KnowledgeBase kb_;
  AdaptationState state_;
};

/// One `<fitness> <formula>` line per entry; unevaluated fitness is `nan`.
/// Throws Error when the knowledge base is empty.
void export_kb(const KnowledgeBase& kb, std::ostream& out);
void export_kb_file(const KnowledgeBase& kb, const std::filesystem::path& path);

/// Reads the export format. Every formula must parse and fit `max_depth`;
/// otherwise FileFormatError names the line. Entries come back unevaluated,
/// marked Imported, in file order, cut to `capacity`. Blank lines and `#`
/// comments are skipped.
KnowledgeBase import_kb(std::istream& in, int max_depth, std::size_t capacity);
KnowledgeBase import_kb_file(const std::filesystem::path& path, int max_depth, std::size_t capacity);

}  // namespace genadapt
