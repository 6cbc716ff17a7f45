#pragma once

/// @file engine.hpp
/// @brief Generational GA loop: uniform random parent selection, crossover at
/// rate pc (clone otherwise), swap mutation, elitist generational replacement,
/// stopping on an evaluation budget.

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "operators.hpp"
#include "random.hpp"
#include "tour.hpp"
#include "tsplib.hpp"

namespace cxga {

struct GaConfig {
    std::size_t population_size = 100;
    double crossover_rate = 0.9;
    std::optional<double> mutation_rate; // unset: 1 / number of cities
    std::uint64_t budget = 1'000'000;
    CrossoverKind crossover = Mscx{};
    std::size_t elitism = 1;
    std::uint64_t seed = 1;
    bool record_generations = false;

    double resolved_mutation_rate(std::size_t cities) const {
        return mutation_rate ? *mutation_rate : 1.0 / static_cast<double>(cities);
    }
};

inline void validate_config(const GaConfig& cfg) {
    if (cfg.population_size < 2) throw ConfigError("population size must be >= 2");
    if (!(cfg.crossover_rate >= 0.0 && cfg.crossover_rate <= 1.0)) throw ConfigError("crossover rate must be in [0, 1]");
    if (cfg.mutation_rate && !(*cfg.mutation_rate >= 0.0 && *cfg.mutation_rate <= 1.0)) {
        throw ConfigError("mutation rate must be in [0, 1]");
    }
    if (cfg.budget < cfg.population_size) throw ConfigError("budget must be >= population size");
    if (cfg.elitism >= cfg.population_size) throw ConfigError("elitism must be < population size");
    validate_crossover(cfg.crossover);
}

struct GenerationStats {
    std::uint64_t generation = 0;
    double best = 0.0; // best cost ever seen, at the end of this generation
    double mean = 0.0; // mean cost of the current population
    std::size_t population_size = 0;
    std::uint64_t evaluations = 0;
    bool hrx = false;
};

struct RunReport {
    double best_cost = 0.0;
    Tour best_tour;
    std::uint64_t evaluations_used = 0;
    std::uint64_t generations = 0;
    double wall_seconds = 0.0;
    std::uint64_t seed = 0;
    CrossoverStats crossover_stats;
    std::vector<GenerationStats> generation_log;
};

/// Two distinct indices in [0, size) uniformly at random; (0, 0) when size == 1.
inline std::pair<std::size_t, std::size_t> select_parent_indices(std::size_t size, Rng& rng) {
    if (size == 0) throw std::logic_error("internal error: parent selection from an empty population");
    if (size == 1) return {0, 0};
    const std::size_t first = uniform_index(rng, size);
    std::size_t second = uniform_index(rng, size - 1);
    if (second >= first) ++second;
    return {first, second};
}

inline std::pair<const Individual&, const Individual&> select_parents(std::span<const Individual> population,
                                                                      Rng& rng) {
    const auto [a, b] = select_parent_indices(population.size(), rng);
    return {population[a], population[b]};
}

/// Indices of the `count` lowest-cost individuals, best first (ties by index).
inline std::vector<std::size_t> best_indices(std::span<const Individual> population, std::size_t count) {
    std::vector<std::size_t> idx(population.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    count = std::min(count, idx.size());
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(count), idx.end(),
                      [&](std::size_t a, std::size_t b) {
                          if (population[a].cost != population[b].cost) return population[a].cost < population[b].cost;
                          return a < b;
                      });
    idx.resize(count);
    return idx;
}

inline std::vector<Tour> apply_crossover(const CrossoverKind& kind, const Tour& a, const Tour& b,
                                         const Instance& inst, Rng& rng, CrossoverStats* stats = nullptr) {
    std::vector<Tour> children;
    if (std::holds_alternative<Mscx>(kind)) {
        children.push_back(mscx(a, b, inst, stats));
    } else if (const auto* radius = std::get_if<MscxRadius>(&kind)) {
        children.push_back(mscx_radius(a, b, inst, radius->r, stats));
    } else {
        auto [c1, c2] = rx(a, b, std::get<Rx>(kind).pr, rng);
        children.push_back(std::move(c1));
        children.push_back(std::move(c2));
    }
    return children;
}

namespace detail {

/// One ordinary generation: elites copied, the rest bred from random pairs.
inline std::vector<Individual> breed_generation(std::span<const Individual> population, const GaConfig& cfg, double pm,
                                                Rng& rng, Evaluator& eval, CrossoverStats& stats) {
    const std::size_t ps = cfg.population_size;
    std::vector<Individual> next;
    next.reserve(ps);
    for (const std::size_t i : best_indices(population, cfg.elitism)) next.push_back(population[i]);

    while (next.size() < ps) {
        const auto [a, b] = select_parents(population, rng);
        if (bernoulli(rng, cfg.crossover_rate)) {
            for (Tour& child : apply_crossover(cfg.crossover, a.tour, b.tour, eval.instance(), rng, &stats)) {
                if (next.size() == ps) break; // RX surplus
                mutate_in_place(child, pm, rng);
                next.push_back(eval.evaluate(std::move(child)));
            }
        } else {
            for (const Individual* parent : {&a, &b}) {
                if (next.size() == ps) break;
                Individual clone = *parent;
                if (mutate_in_place(clone.tour, pm, rng) > 0) {
                    next.push_back(eval.evaluate(std::move(clone.tour)));
                } else {
                    next.push_back(std::move(clone));
                }
            }
        }
    }
    return next;
}

inline double mean_cost(std::span<const Individual> population) {
    double total = 0.0;
    for (const auto& ind : population) total += ind.cost;
    return total / static_cast<double>(population.size());
}

/// Never replaces an ordinary generation; plain run_ga uses this.
struct NoSpecialGeneration {
    bool fires(std::uint64_t) { return false; }
    std::vector<Individual> produce(std::span<const Individual>, Rng&, Evaluator&, double) { return {}; }
};

/// The shared outer loop. `special` may replace whole generations (CXGA's HRX
/// firings); it must return exactly population_size individuals.
template <typename Special>
RunReport evolve(const Instance& inst, const GaConfig& cfg, Special&& special) {
    validate_config(cfg);
    const auto start = std::chrono::steady_clock::now();
    const std::size_t n = inst.size();
    const double pm = cfg.resolved_mutation_rate(n);
    if (cfg.crossover_rate == 0.0 && pm == 0.0) {
        throw ConfigError("crossover rate and mutation rate are both 0: the budget can never be spent");
    }

    Rng rng(cfg.seed);
    Evaluator eval(inst);
    RunReport report;
    report.seed = cfg.seed;

    std::vector<Individual> population;
    population.reserve(cfg.population_size);
    for (std::size_t i = 0; i < cfg.population_size; ++i) population.push_back(eval.evaluate(random_tour(n, rng)));

    Individual best = population[best_indices(population, 1).front()];
    auto log = [&](std::uint64_t generation, bool hrx) {
        if (!cfg.record_generations) return;
        report.generation_log.push_back(
            {generation, best.cost, mean_cost(population), population.size(), eval.count(), hrx});
    };
    log(0, false);

    std::uint64_t generation = 0;
    while (eval.count() < cfg.budget) {
        ++generation;
        const bool fired = special.fires(generation);
        population = fired ? special.produce(population, rng, eval, pm)
                           : breed_generation(population, cfg, pm, rng, eval, report.crossover_stats);
        assert(population.size() == cfg.population_size);
        const auto& gen_best = population[best_indices(population, 1).front()];
        if (gen_best.cost < best.cost) best = gen_best;
        log(generation, fired);
    }

    assert(is_valid_tour(best.tour, n));
    report.best_cost = best.cost;
    report.best_tour = std::move(best.tour);
    report.evaluations_used = eval.count();
    report.generations = generation;
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

} // namespace detail

inline RunReport run_ga(const Instance& inst, const GaConfig& cfg) {
    return detail::evolve(inst, cfg, detail::NoSpecialGeneration{});
}

} // namespace cxga
