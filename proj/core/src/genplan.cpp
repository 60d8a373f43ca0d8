#include "genadapt/genplan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "genadapt/errors.hpp"

namespace genadapt {

void GpConfig::validate() const {
  auto require = [](bool ok, const char* field, const std::string& what) {
    if (!ok) throw ConfigError(std::string(field) + ": " + what);
  };
  require(population_size >= 2, "population_size", "must be at least 2");
  require(max_generations >= 0, "max_generations", "must be non-negative");
  require(crossover_rate >= 0.0 && crossover_rate <= 1.0, "crossover_rate", "must be in [0, 1]");
  require(mutation_rate >= 0.0 && mutation_rate <= 1.0, "mutation_rate", "must be in [0, 1]");
  require(tournament_size >= 1 && tournament_size <= population_size, "tournament_size",
          "must be in [1, population_size]");
  require(max_depth >= 1, "max_depth", "must be at least 1");
  require(threshold > 0.0 && threshold < 1.0, "threshold", "must be in (0, 1)");
  require(std::isfinite(const_min) && std::isfinite(const_max) && const_min <= const_max, "const_min",
          "constant range must be finite with min <= max");
  require(std::isfinite(early_stop_fitness), "early_stop_fitness", "must be finite");
}

int default_generation_cap_full() { return 200; }

int default_generation_cap_mnp(int paths) { return paths <= 3 ? 300 : 500; }

namespace {

NodeId flow_source(const Network& net, const Flow& f) {
  if (f.path.empty()) throw StructuralError("flow for request " + std::to_string(f.request) + " has an empty path");
  return net.link(f.path.front()).src;
}

NodeId flow_destination(const Network& net, const Flow& f) {
  if (f.path.empty()) throw StructuralError("flow for request " + std::to_string(f.request) + " has an empty path");
  return net.link(f.path.back()).dst;
}

double request_bandwidth(std::span<const double> bandwidths, RequestId r) {
  if (r < 0 || static_cast<std::size_t>(r) >= bandwidths.size())
    throw StructuralError("no bandwidth for request " + std::to_string(r));
  return bandwidths[r];
}

// Flows ordered by request id, rejecting duplicates.
std::vector<const Flow*> by_request(std::span<const Flow> flows) {
  std::vector<const Flow*> out;
  out.reserve(flows.size());
  for (const Flow& f : flows) out.push_back(&f);
  std::sort(out.begin(), out.end(), [](const Flow* a, const Flow* b) { return a->request < b->request; });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i]->request == out[i - 1]->request)
      throw StructuralError("request " + std::to_string(out[i]->request) + " has two flows");
  }
  return out;
}

}  // namespace

CongestionSplit find_flows_causing_congestion(const Network& net, std::span<const Flow> flows,
                                              std::span<const double> bandwidths, double threshold,
                                              Rng& rng) {
  CongestionSplit split;
  split.keep.assign(flows.begin(), flows.end());
  std::vector<std::size_t> crossing;
  for (;;) {
    const std::vector<double> util = link_utilizations(net, split.keep, bandwidths);
    LinkId worst = -1;
    double worst_util = 0.0;
    for (LinkId e = 0; e < static_cast<LinkId>(util.size()); ++e) {
      if (worst < 0 || util[e] > worst_util) {
        worst = e;
        worst_util = util[e];
      }
    }
    if (worst < 0 || !(worst_util > threshold)) break;

    crossing.clear();
    for (std::size_t i = 0; i < split.keep.size(); ++i) {
      const Path& p = split.keep[i].path;
      if (std::find(p.begin(), p.end(), worst) != p.end()) crossing.push_back(i);
    }
    if (crossing.empty()) throw StructuralError("congested link carries no flow");
    const std::size_t victim = crossing[rng.uniform_index(crossing.size())];
    split.bad.push_back(std::move(split.keep[victim]));
    split.keep.erase(split.keep.begin() + static_cast<std::ptrdiff_t>(victim));
  }
  return split;
}

std::vector<Flow> compute_surrogate(const Network& net, std::span<const Flow> keep,
                                    std::span<const Flow> bad, std::span<const double> bandwidths,
                                    const WeightExpr& expr, double threshold) {
  std::vector<double> load = link_throughputs(net, keep, bandwidths);
  WeightAssignment weights(net.link_count());
  for (const Link& l : net.links())
    weights[l.id] = link_weight(expr, l, link_utilization(load[l.id], l.bw_mbps), threshold);

  std::vector<Flow> out(keep.begin(), keep.end());
  out.reserve(keep.size() + bad.size());
  for (const Flow& f : bad) {
    std::optional<Path> path =
        shortest_weighted_path(net, weights, flow_source(net, f), flow_destination(net, f));
    Flow moved{f.request, path ? std::move(*path) : f.path};
    const double bd = request_bandwidth(bandwidths, f.request);
    for (LinkId e : moved.path) {
      const Link& l = net.links()[e];
      load[e] += bd;
      weights[e] = link_weight(expr, l, link_utilization(load[e], l.bw_mbps), threshold);
    }
    out.push_back(std::move(moved));
  }
  std::stable_sort(out.begin(), out.end(), [](const Flow& a, const Flow& b) { return a.request < b.request; });
  return out;
}

double normalize(double x) {
  if (!(x >= 0.0)) throw StructuralError("normalize expects a non-negative value");
  return x / (x + 1.0);
}

FitnessParts fitness_parts(const Network& net, std::span<const Flow> new_flows,
                           std::span<const Flow> old_flows, std::span<const double> bandwidths) {
  const auto fresh = by_request(new_flows);
  const auto old = by_request(old_flows);
  if (fresh.size() != old.size()) throw StructuralError("new and old flows cover different requests");

  FitnessParts parts;
  parts.max_util = max_utilization(link_utilizations(net, new_flows, bandwidths));
  for (std::size_t i = 0; i < fresh.size(); ++i) {
    if (fresh[i]->request != old[i]->request)
      throw StructuralError("new and old flows cover different requests");
    parts.reroute_cost += static_cast<double>(lcs_distance(old[i]->path, fresh[i]->path));
  }
  for (const Flow& f : new_flows) {
    for (LinkId e : f.path) parts.total_delay += net.link(e).dl_ms;
  }
  return parts;
}

double combine_fitness(const FitnessParts& parts, double threshold) {
  if (parts.max_util >= threshold) return normalize(parts.max_util) + 2.0;
  return normalize(parts.reroute_cost) + normalize(parts.total_delay);
}

double evaluate(const Network& net, std::span<const Flow> new_flows, std::span<const Flow> old_flows,
                std::span<const double> bandwidths, double threshold) {
  return combine_fitness(fitness_parts(net, new_flows, old_flows, bandwidths), threshold);
}

std::size_t tournament_select(std::span<const Individual> population, int k, Rng& rng) {
  if (population.empty()) throw StructuralError("tournament over an empty population");
  if (k < 1 || static_cast<std::size_t>(k) > population.size())
    throw StructuralError("tournament size must be in [1, population size]");
  auto fitness_of = [&](std::size_t i) {
    if (!population[i].fitness) throw StructuralError("tournament over an unevaluated individual");
    return *population[i].fitness;
  };
  std::size_t best = rng.uniform_index(population.size());
  double best_fit = fitness_of(best);
  for (int draw = 1; draw < k; ++draw) {
    const std::size_t i = rng.uniform_index(population.size());
    const double f = fitness_of(i);
    if (f < best_fit) {
      best = i;
      best_fit = f;
    }
  }
  return best;
}

PlanResult gen_plan(const Network& net, std::span<const Flow> old_flows,
                    std::span<const double> bandwidths, std::span<const Individual> best_sol,
                    const GpConfig& config, Rng& rng) {
  config.validate();
  const double threshold = config.threshold;
  const std::size_t pop_size = static_cast<std::size_t>(config.population_size);

  CongestionSplit split = find_flows_causing_congestion(net, old_flows, bandwidths, threshold, rng);

  auto assess = [&](Individual& ind) {
    const std::vector<Flow> flows =
        compute_surrogate(net, split.keep, split.bad, bandwidths, ind.expr, threshold);
    ind.fitness = evaluate(net, flows, old_flows, bandwidths, threshold);
  };

  PlanResult result;
  for (const Flow& f : split.bad) result.rerouted.push_back(f.request);

  std::vector<Individual> population;
  population.reserve(pop_size);
  for (const Individual& seed : best_sol) {
    if (population.size() >= config.retained_count()) break;
    population.push_back(Individual{seed.expr, std::nullopt});
  }
  result.bootstrapped = population.size();
  while (population.size() < pop_size)
    population.push_back(Individual{grow_random(config.max_depth, rng, config.const_range()), std::nullopt});
  for (Individual& ind : population) assess(ind);

  auto track_best = [&](const std::vector<Individual>& pop) {
    for (const Individual& ind : pop) {
      if (!result.best.fitness || *ind.fitness < *result.best.fitness) result.best = ind;
    }
    result.best_history.push_back(*result.best.fitness);
  };
  track_best(population);
  result.initial_population = population;

  while (*result.best.fitness >= config.early_stop_fitness && result.generations < config.max_generations) {
    std::vector<Individual> offspring;
    offspring.reserve(pop_size);
    while (offspring.size() < pop_size) {
      const WeightExpr& mum = population[tournament_select(population, config.tournament_size, rng)].expr;
      const WeightExpr& dad = population[tournament_select(population, config.tournament_size, rng)].expr;
      auto [first, second] = rng.bernoulli(config.crossover_rate)
                                 ? crossover(mum, dad, rng, config.max_depth)
                                 : std::pair<WeightExpr, WeightExpr>{mum, dad};
      for (WeightExpr* child : {&first, &second}) {
        if (rng.bernoulli(config.mutation_rate))
          *child = mutate(*child, rng, config.max_depth, config.const_range());
      }
      offspring.push_back(Individual{std::move(first), std::nullopt});
      if (offspring.size() < pop_size) offspring.push_back(Individual{std::move(second), std::nullopt});
    }
    for (Individual& ind : offspring) assess(ind);
    population = std::move(offspring);
    ++result.generations;
    track_best(population);
  }

  std::vector<std::size_t> order(population.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return *population[a].fitness < *population[b].fitness; });
  for (std::size_t i = 0; i < config.retained_count(); ++i) result.retained.push_back(population[order[i]]);

  result.new_flows = compute_surrogate(net, split.keep, split.bad, bandwidths, result.best.expr, threshold);
  return result;
}

}  // namespace genadapt
