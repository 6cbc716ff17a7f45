#pragma once

/// @file operators.hpp
/// @brief Permutation crossovers (MSCX, MSCX_Radius, RX) and swap mutation.
///
/// MSCX grows one offspring from the first city of parent 1. At each step
/// every parent proposes the first unvisited city found after the current city
/// p in its own sequence, wrapping to the front of that parent when nothing
/// unvisited follows p. The cheaper proposal wins; on equal cost the parent-2
/// proposal is taken.
///
/// When neither parent has an unvisited city after p (both scans wrapped) the
/// step is a *fallback*. MSCX then compares the two front-of-parent proposals
/// as usual. MSCX_Radius instead lets each parent offer its first r unvisited
/// cities, keeps the nearest per parent, and compares those two the same way,
/// so r = 1 coincides with MSCX.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "error.hpp"
#include "random.hpp"
#include "tour.hpp"
#include "tsplib.hpp"

namespace cxga {

struct Mscx {
    friend bool operator==(const Mscx&, const Mscx&) = default;
};

struct MscxRadius {
    int r = 1;
    friend bool operator==(const MscxRadius&, const MscxRadius&) = default;
};

struct Rx {
    double pr = 10.0; // percent of parent-1 cities kept in place
    friend bool operator==(const Rx&, const Rx&) = default;
};

using CrossoverKind = std::variant<Mscx, MscxRadius, Rx>;

inline void validate_crossover(const CrossoverKind& kind) {
    if (const auto* radius = std::get_if<MscxRadius>(&kind); radius && radius->r < 1) {
        throw ConfigError("MSCX_Radius requires r >= 1, got " + std::to_string(radius->r));
    }
    if (const auto* rx = std::get_if<Rx>(&kind); rx && !(rx->pr >= 0.0 && rx->pr <= 100.0)) {
        throw ConfigError("RX requires 0 <= pr <= 100, got " + std::to_string(rx->pr));
    }
}

inline std::string crossover_name(const CrossoverKind& kind) {
    struct {
        std::string operator()(const Mscx&) const { return "MSCX"; }
        std::string operator()(const MscxRadius& k) const { return "MSCX_Radius(r=" + std::to_string(k.r) + ")"; }
        std::string operator()(const Rx& k) const { return "RX(pr=" + std::to_string(k.pr) + ")"; }
    } visitor;
    return std::visit(visitor, kind);
}

/// Instrumentation for the sequential constructive operators.
struct CrossoverStats {
    std::uint64_t steps = 0;
    std::uint64_t fallbacks = 0;
};

namespace detail {

// "Next unvisited position at or after q" over one parent, via path-halving
// successor links. Position n is a sentinel meaning "none".
class UnvisitedScan {
  public:
    explicit UnvisitedScan(const Tour& parent) : parent_(&parent), next_(parent.size() + 1), pos_(parent.size() + 1) {
        for (std::size_t i = 0; i <= parent.size(); ++i) next_[i] = i;
        for (std::size_t i = 0; i < parent.size(); ++i) pos_[static_cast<std::size_t>(parent[i])] = i;
    }

    std::size_t size() const noexcept { return parent_->size(); }
    std::size_t position_of(int city) const noexcept { return pos_[static_cast<std::size_t>(city)]; }
    int city_at(std::size_t position) const noexcept { return (*parent_)[position]; }

    std::size_t find(std::size_t q) noexcept {
        while (next_[q] != q) {
            next_[q] = next_[next_[q]];
            q = next_[q];
        }
        return q;
    }

    void mark_visited(int city) noexcept {
        const std::size_t p = position_of(city);
        next_[p] = p + 1;
    }

  private:
    const Tour* parent_;
    std::vector<std::size_t> next_;
    std::vector<std::size_t> pos_;
};

inline void require_parents(const Tour& p1, const Tour& p2, std::size_t n) {
    require_valid_tour(p1, n);
    require_valid_tour(p2, n);
}

/// Nearest of the first `r` unvisited cities of a parent; earliest wins ties.
inline int nearest_from_front(UnvisitedScan& scan, const Instance& inst, int current, int r) {
    int best = -1;
    double best_cost = 0.0;
    std::size_t q = scan.find(0);
    for (int taken = 0; taken < r && q < scan.size(); ++taken) {
        const int city = scan.city_at(q);
        const double c = inst.cost(current, city);
        if (best < 0 || c < best_cost) {
            best = city;
            best_cost = c;
        }
        q = scan.find(q + 1);
    }
    return best;
}

/// Shared body of MSCX (radius == 0) and MSCX_Radius (radius >= 1).
inline Tour sequential_constructive(const Tour& p1, const Tour& p2, const Instance& inst, int radius,
                                    CrossoverStats* stats) {
    const std::size_t n = inst.size();
    require_parents(p1, p2, n);

    UnvisitedScan scan1(p1);
    UnvisitedScan scan2(p2);
    std::vector<int> child;
    child.reserve(n);

    auto visit = [&](int city) {
        child.push_back(city);
        scan1.mark_visited(city);
        scan2.mark_visited(city);
    };

    visit(p1[0]);
    std::uint64_t fallbacks = 0;
    while (child.size() < n) {
        const int current = child.back();
        const std::size_t after1 = scan1.find(scan1.position_of(current) + 1);
        const std::size_t after2 = scan2.find(scan2.position_of(current) + 1);

        int alpha = 0;
        int beta = 0;
        if (after1 == n && after2 == n) {
            ++fallbacks;
            const int width = radius > 0 ? radius : 1;
            alpha = nearest_from_front(scan1, inst, current, width);
            beta = nearest_from_front(scan2, inst, current, width);
        } else {
            alpha = scan1.city_at(after1 < n ? after1 : scan1.find(0));
            beta = scan2.city_at(after2 < n ? after2 : scan2.find(0));
        }
        visit(inst.cost(current, alpha) < inst.cost(current, beta) ? alpha : beta);
    }

    if (stats) {
        stats->steps += n - 1;
        stats->fallbacks += fallbacks;
    }
    return Tour(std::move(child));
}

/// Keep p1's cities at `keep_positions`; fill the other slots left to right
/// with the remaining cities in p2's order.
inline Tour position_preserving_fill(const Tour& p1, const Tour& p2, const std::vector<std::size_t>& keep_positions) {
    const std::size_t n = p1.size();
    std::vector<int> child(n, 0);
    std::vector<bool> used(n + 1, false);
    for (const std::size_t pos : keep_positions) {
        child[pos] = p1[pos];
        used[static_cast<std::size_t>(p1[pos])] = true;
    }
    std::size_t slot = 0;
    for (const int city : p2) {
        if (used[static_cast<std::size_t>(city)]) continue;
        while (child[slot] != 0) ++slot;
        child[slot] = city;
    }
    return Tour(std::move(child));
}

inline std::size_t rx_keep_count(double pr, std::size_t n) {
    const auto k = std::llround(pr * static_cast<double>(n) / 100.0);
    return static_cast<std::size_t>(std::clamp<long long>(k, 0, static_cast<long long>(n)));
}

/// k distinct positions in [0, n), uniformly chosen (partial Fisher-Yates).
inline std::vector<std::size_t> sample_positions(std::size_t n, std::size_t k, Rng& rng) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + uniform_index(rng, n - i)]);
    idx.resize(k);
    return idx;
}

} // namespace detail

inline Tour mscx(const Tour& p1, const Tour& p2, const Instance& inst, CrossoverStats* stats = nullptr) {
    return detail::sequential_constructive(p1, p2, inst, 0, stats);
}

inline Tour mscx_radius(const Tour& p1, const Tour& p2, const Instance& inst, int r,
                        CrossoverStats* stats = nullptr) {
    if (r < 1) throw ConfigError("MSCX_Radius requires r >= 1, got " + std::to_string(r));
    return detail::sequential_constructive(p1, p2, inst, r, stats);
}

/// RX on explicit kept positions (offspring 1 keeps p1 at keep1, offspring 2
/// keeps p2 at keep2). The random variant below draws the positions.
inline std::pair<Tour, Tour> rx_with_positions(const Tour& p1, const Tour& p2, const std::vector<std::size_t>& keep1,
                                               const std::vector<std::size_t>& keep2) {
    if (p1.size() != p2.size()) throw InvalidTour("invalid tour: parents differ in length");
    detail::require_parents(p1, p2, p1.size());
    for (const auto* keep : {&keep1, &keep2}) {
        for (const std::size_t pos : *keep) {
            if (pos >= p1.size()) throw std::out_of_range("rx: kept position out of range");
        }
    }
    return {detail::position_preserving_fill(p1, p2, keep1), detail::position_preserving_fill(p2, p1, keep2)};
}

inline std::pair<Tour, Tour> rx(const Tour& p1, const Tour& p2, double pr, Rng& rng) {
    if (!(pr >= 0.0 && pr <= 100.0)) throw ConfigError("RX requires 0 <= pr <= 100");
    if (p1.size() != p2.size()) throw InvalidTour("invalid tour: parents differ in length");
    detail::require_parents(p1, p2, p1.size());
    const std::size_t n = p1.size();
    const std::size_t k = detail::rx_keep_count(pr, n);
    auto keep1 = detail::sample_positions(n, k, rng);
    auto keep2 = detail::sample_positions(n, k, rng);
    return {detail::position_preserving_fill(p1, p2, keep1), detail::position_preserving_fill(p2, p1, keep2)};
}

/// Per-gene swap mutation. Returns the number of swaps performed.
inline std::size_t mutate_in_place(Tour& tour, double pm, Rng& rng) {
    const std::size_t n = tour.size();
    if (n < 2) return 0;
    std::size_t swaps = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!bernoulli(rng, pm)) continue;
        std::size_t j = uniform_index(rng, n - 1);
        if (j >= i) ++j;
        std::swap(tour[i], tour[j]);
        ++swaps;
    }
    return swaps;
}

inline Tour mutate(Tour tour, double pm, Rng& rng) {
    mutate_in_place(tour, pm, rng);
    return tour;
}

} // namespace cxga
