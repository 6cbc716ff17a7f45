#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "error.hpp"
#include "tour.hpp"
#include "tsplib.hpp"

namespace cxga {

inline constexpr std::size_t kBruteForceMaxCities = 11;

struct ExactSolution {
    double cost = 0.0;
    Tour tour;
};

/// Exhaustive search over tours starting at city 1 with second city < last
/// city. The first minimum in lexicographic order is returned.
inline ExactSolution brute_force_optimum(const Instance& inst) {
    const std::size_t n = inst.size();
    if (n > kBruteForceMaxCities) {
        throw ConfigError("brute force is capped at " + std::to_string(kBruteForceMaxCities) + " cities, instance has " +
                          std::to_string(n));
    }
    std::vector<int> rest(n - 1);
    std::iota(rest.begin(), rest.end(), 2);

    ExactSolution best;
    bool found = false;
    do {
        if (rest.front() > rest.back()) continue;
        // Same summation order as tour_cost, so the two agree bit for bit.
        double c = inst.cost(1, rest.front());
        for (std::size_t i = 0; i + 1 < rest.size(); ++i) c += inst.cost(rest[i], rest[i + 1]);
        c += inst.cost(rest.back(), 1);
        if (!found || c < best.cost) {
            found = true;
            best.cost = c;
            std::vector<int> cities{1};
            cities.insert(cities.end(), rest.begin(), rest.end());
            best.tour = Tour(std::move(cities));
        }
    } while (std::next_permutation(rest.begin(), rest.end()));
    return best;
}

} // namespace cxga
