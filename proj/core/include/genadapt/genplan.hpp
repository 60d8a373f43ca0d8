#pragma once

#include <optional>
#include <span>
#include <vector>

#include "genadapt/netmodel.hpp"
#include "genadapt/random.hpp"
#include "genadapt/weight_expr.hpp"

namespace genadapt {

/// A candidate formula with its cached fitness (lower is better).
struct Individual {
  WeightExpr expr;
  std::optional<double> fitness;
};

struct GpConfig {
  int population_size = 10;
  int max_generations = 200;
  double crossover_rate = 0.7;
  double mutation_rate = 0.1;
  int tournament_size = 7;
  int max_depth = 15;
  double threshold = 0.8;
  double const_min = 0.0;
  double const_max = 100.0;
  double early_stop_fitness = 2.0;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;
  std::size_t retained_count() const { return static_cast<std::size_t>(population_size / 2); }
  ConstRange const_range() const { return {const_min, const_max}; }
};

/// Generation cap used for generated topologies when a scenario does not set
/// one: 200 for complete graphs, 300 for three disjoint paths, 500 beyond.
int default_generation_cap_full();
int default_generation_cap_mnp(int paths);

struct CongestionSplit {
  std::vector<Flow> bad;   // in removal order
  std::vector<Flow> keep;  // original order, congestion-free
};

/// Repeatedly drops a uniformly chosen flow crossing the most utilized link
/// (ties go to the smallest link id) until no link exceeds `threshold`.
CongestionSplit find_flows_causing_congestion(const Network& net, std::span<const Flow> flows,
                                              std::span<const double> bandwidths, double threshold,
                                              Rng& rng);

/// Re-routes `bad` one by one on shortest paths under weights produced by
/// `expr`. Weights start from the utilization of `keep` and are refreshed on
/// each newly used link. Requests with no path keep their original path.
/// The result holds every request once, sorted by request id.
std::vector<Flow> compute_surrogate(const Network& net, std::span<const Flow> keep,
                                    std::span<const Flow> bad, std::span<const double> bandwidths,
                                    const WeightExpr& expr, double threshold);

/// Number of link insertions plus deletions turning one path into the other:
/// |a| + |b| - 2 LCS(a, b).
std::size_t lcs_distance(std::span<const LinkId> a, std::span<const LinkId> b);

/// x / (x + 1). Throws StructuralError for negative input.
double normalize(double x);

struct FitnessParts {
  double max_util = 0.0;      // Fit1
  double reroute_cost = 0.0;  // Fit2, summed LCS distance
  double total_delay = 0.0;   // Fit3, ms summed over every link of every flow
};

FitnessParts fitness_parts(const Network& net, std::span<const Flow> new_flows,
                           std::span<const Flow> old_flows, std::span<const double> bandwidths);

/// Combines the parts: normalize(Fit1) + 2 while Fit1 >= threshold,
/// otherwise normalize(Fit2) + normalize(Fit3). Always in [0, 3).
double combine_fitness(const FitnessParts& parts, double threshold);

/// fitness of `new_flows` against `old_flows`. The two must cover the same
/// requests; otherwise StructuralError.
double evaluate(const Network& net, std::span<const Flow> new_flows, std::span<const Flow> old_flows,
                std::span<const double> bandwidths, double threshold);

/// Draws k individuals with replacement and returns the index of the fittest
/// (earliest drawn on ties). Every drawn individual must have a fitness.
std::size_t tournament_select(std::span<const Individual> population, int k, Rng& rng);

struct PlanResult {
  Individual best;
  std::vector<Flow> new_flows;
  std::vector<Individual> retained;  // best half of the final population, ascending
  std::vector<RequestId> rerouted;   // bad flows, in removal order
  int generations = 0;               // breeding rounds after the initial population
  std::vector<double> best_history;  // best-so-far fitness after each population
  std::vector<Individual> initial_population;
  std::size_t bootstrapped = 0;      // leading members of initial_population taken from best_sol
};

/// Evolves a link-weight formula that resolves the congestion in `old_flows`.
///
/// The initial population is at most population_size / 2 members of
/// `best_sol` (re-evaluated on this snapshot), topped up with grown trees.
/// Each generation breeds pairs: tournament-selected parents, crossover with
/// crossover_rate, then per-child mutation with mutation_rate. The loop
/// stops once the best fitness drops below early_stop_fitness or after
/// max_generations breeding rounds. The best individual across all
/// generations wins; ties keep the earliest.
PlanResult gen_plan(const Network& net, std::span<const Flow> old_flows,
                    std::span<const double> bandwidths, std::span<const Individual> best_sol,
                    const GpConfig& config, Rng& rng);

}  // namespace genadapt
