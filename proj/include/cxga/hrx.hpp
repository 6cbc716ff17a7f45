#pragma once

/// @file hrx.hpp
/// @brief HRX combination mechanism and the CXGA algorithm built on it.
///
/// HRX sorts the population and splits it into a first part P1 (the best
/// individuals) and the rest P2. For ng iterations P1's lineage is bred with a
/// mix of RX and MSCX_Radius while P2's lineage is bred with MSCX; the two
/// lineages never exchange parents. The final lineages are merged back into a
/// population of the original size.
///
/// CXGA runs the ordinary generational loop with MSCX and, on scheduled
/// generations, produces the next population with HRX instead.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "engine.hpp"
#include "error.hpp"
#include "operators.hpp"
#include "random.hpp"
#include "tour.hpp"

namespace cxga {

enum class HrxSchedule {
    even,     // every round(100 / pc_hrx)-th generation
    bernoulli // each generation independently with probability pc_hrx / 100
};

struct HrxConfig {
    double first_part_pct = 90.0;
    double prx = 40.0; // percent of P1 offspring produced by RX
    double pr = 30.0;  // RX keep percentage
    int r = 5;         // MSCX_Radius radius
    int ng = 1;        // iterations per HRX invocation
    double pc_hrx = 15.0;
    HrxSchedule schedule = HrxSchedule::even;
};

inline void validate_config(const HrxConfig& cfg) {
    auto pct = [](double v, const char* what) {
        if (!(v >= 0.0 && v <= 100.0)) throw ConfigError(std::string(what) + " must be in [0, 100]");
    };
    pct(cfg.first_part_pct, "first part percentage");
    pct(cfg.prx, "prx");
    pct(cfg.pr, "pr");
    pct(cfg.pc_hrx, "HRX rate");
    if (cfg.r < 1) throw ConfigError("r must be >= 1");
    if (cfg.ng < 1) throw ConfigError("ng must be >= 1");
}

/// |P1| for a population of `size`, clamped so both parts are non-empty.
inline std::size_t first_part_size(std::size_t size, double first_part_pct) {
    if (size < 2) throw std::invalid_argument("split_population: need at least 2 individuals");
    const auto raw = std::llround(first_part_pct * static_cast<double>(size) / 100.0);
    const auto clamped = std::clamp<long long>(raw, 1, static_cast<long long>(size) - 1);
    if (clamped != raw) {
        warn("first part of " + std::to_string(first_part_pct) + "% of " + std::to_string(size) +
             " individuals clamped to " + std::to_string(clamped));
    }
    return static_cast<std::size_t>(clamped);
}

/// Number of P1 offspring made by RX: prx% of |P1| rounded to the nearest
/// even number (RX yields pairs), never more than |P1|.
inline std::size_t rx_offspring_count(std::size_t first_part, double prx) {
    const double raw = prx * static_cast<double>(first_part) / 100.0;
    auto even = static_cast<std::size_t>(2 * std::llround(raw / 2.0));
    const std::size_t cap = first_part - first_part % 2;
    return std::min(even, cap);
}

/// Stable sort by cost, then cut into (best part, rest).
inline std::pair<std::vector<Individual>, std::vector<Individual>> split_population(std::vector<Individual> population,
                                                                                    double first_part_pct) {
    const std::size_t first = first_part_size(population.size(), first_part_pct);
    std::stable_sort(population.begin(), population.end(),
                     [](const Individual& a, const Individual& b) { return a.cost < b.cost; });
    std::vector<Individual> rest(std::make_move_iterator(population.begin() + static_cast<std::ptrdiff_t>(first)),
                                 std::make_move_iterator(population.end()));
    population.resize(first);
    return {std::move(population), std::move(rest)};
}

enum class Lineage { first_part, rest };

/// Called for every parent pair HRX draws (testing and tracing).
using HrxParentObserver =
    std::function<void(Lineage, int iteration, const Individual& parent_a, const Individual& parent_b)>;
using HrxOffspringObserver = std::function<void(Lineage, int iteration, const Individual& child)>;

struct HrxOptions {
    /// Stop after the iteration during which the evaluation counter reaches this.
    std::uint64_t stop_at_evaluations = std::numeric_limits<std::uint64_t>::max();
    HrxParentObserver observer;
    HrxOffspringObserver on_offspring;
};

struct HrxParts {
    std::vector<Individual> first_part; // SP lineage
    std::vector<Individual> rest;       // FP lineage
    int iterations = 0;
};

inline HrxParts hrx_parts(std::vector<Individual> population, const HrxConfig& cfg, Evaluator& eval, double pm,
                          Rng& rng, const HrxOptions& options = {}) {
    validate_config(cfg);
    const Instance& inst = eval.instance();
    auto [sp, fp] = split_population(std::move(population), cfg.first_part_pct);
    const std::size_t sp_size = sp.size();
    const std::size_t fp_size = fp.size();
    const std::size_t rx_count = rx_offspring_count(sp_size, cfg.prx);

    auto draw = [&](const std::vector<Individual>& from, Lineage lineage, int iteration) {
        auto parents = select_parents(from, rng);
        if (options.observer) options.observer(lineage, iteration, parents.first, parents.second);
        return parents;
    };
    auto finish = [&](Tour child, std::vector<Individual>& into, Lineage lineage, int iteration) {
        mutate_in_place(child, pm, rng);
        into.push_back(eval.evaluate(std::move(child)));
        if (options.on_offspring) options.on_offspring(lineage, iteration, into.back());
    };

    HrxParts out;
    for (int it = 0; it < cfg.ng; ++it) {
        std::vector<Individual> sp_next;
        std::vector<Individual> fp_next;
        sp_next.reserve(sp_size);
        fp_next.reserve(fp_size);

        for (std::size_t j = 0; j < rx_count / 2; ++j) {
            const auto [a, b] = draw(sp, Lineage::first_part, it);
            auto [c1, c2] = rx(a.tour, b.tour, cfg.pr, rng);
            finish(std::move(c1), sp_next, Lineage::first_part, it);
            finish(std::move(c2), sp_next, Lineage::first_part, it);
        }
        for (std::size_t j = 0; j < sp_size - rx_count; ++j) {
            const auto [a, b] = draw(sp, Lineage::first_part, it);
            finish(mscx_radius(a.tour, b.tour, inst, cfg.r), sp_next, Lineage::first_part, it);
        }
        for (std::size_t j = 0; j < fp_size; ++j) {
            const auto [a, b] = draw(fp, Lineage::rest, it);
            finish(mscx(a.tour, b.tour, inst), fp_next, Lineage::rest, it);
        }

        sp = std::move(sp_next);
        fp = std::move(fp_next);
        out.iterations = it + 1;
        if (eval.count() >= options.stop_at_evaluations) break;
    }
    out.first_part = std::move(sp);
    out.rest = std::move(fp);
    return out;
}

/// One HRX invocation; |result| == |population|.
inline std::vector<Individual> hrx(std::vector<Individual> population, const HrxConfig& cfg, Evaluator& eval,
                                   double pm, Rng& rng, const HrxOptions& options = {}) {
    HrxParts parts = hrx_parts(std::move(population), cfg, eval, pm, rng, options);
    std::vector<Individual> merged = std::move(parts.rest);
    merged.insert(merged.end(), std::make_move_iterator(parts.first_part.begin()),
                  std::make_move_iterator(parts.first_part.end()));
    return merged;
}

namespace detail {

class HrxGenerations {
  public:
    HrxGenerations(const GaConfig& ga, const HrxConfig& cfg)
        : ga_(&ga), cfg_(&cfg), schedule_rng_(splitmix64(ga.seed ^ 0x4852582d736368ULL)) {
        if (cfg.pc_hrx > 0.0) period_ = std::max<long long>(1, std::llround(100.0 / cfg.pc_hrx));
    }

    bool fires(std::uint64_t generation) {
        if (cfg_->pc_hrx <= 0.0) return false;
        if (cfg_->schedule == HrxSchedule::bernoulli) return bernoulli(schedule_rng_, cfg_->pc_hrx / 100.0);
        return generation % static_cast<std::uint64_t>(period_) == 0;
    }

    std::vector<Individual> produce(std::span<const Individual> population, Rng& rng, Evaluator& eval, double pm) {
        const auto elites = best_indices(population, ga_->elitism);
        std::vector<Individual> next =
            hrx(std::vector<Individual>(population.begin(), population.end()), *cfg_, eval, pm, rng,
                HrxOptions{.stop_at_evaluations = ga_->budget, .observer = {}, .on_offspring = {}});
        // Outer-loop elitism: the worst members of P' make room for P's best.
        std::vector<std::size_t> order(next.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return next[a].cost > next[b].cost; });
        for (std::size_t k = 0; k < elites.size(); ++k) next[order[k]] = population[elites[k]];
        return next;
    }

  private:
    const GaConfig* ga_;
    const HrxConfig* cfg_;
    Rng schedule_rng_;
    long long period_ = 0;
};

} // namespace detail

inline RunReport run_cxga(const Instance& inst, const GaConfig& ga, const HrxConfig& cfg) {
    validate_config(cfg);
    return detail::evolve(inst, ga, detail::HrxGenerations(ga, cfg));
}

} // namespace cxga
