#pragma once

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "random.hpp"
#include "tsplib.hpp"

namespace cxga {

/// A closed tour: a sequence of 1-based city labels. Construction does not
/// validate; use validate_tour() at trust boundaries.
class Tour {
  public:
    Tour() = default;
    explicit Tour(std::vector<int> cities) : cities_(std::move(cities)) {}
    Tour(std::initializer_list<int> cities) : cities_(cities) {}

    std::size_t size() const noexcept { return cities_.size(); }
    bool empty() const noexcept { return cities_.empty(); }
    int operator[](std::size_t i) const noexcept { return cities_[i]; }
    int& operator[](std::size_t i) noexcept { return cities_[i]; }
    auto begin() const noexcept { return cities_.begin(); }
    auto end() const noexcept { return cities_.end(); }
    auto begin() noexcept { return cities_.begin(); }
    auto end() noexcept { return cities_.end(); }
    const std::vector<int>& cities() const noexcept { return cities_; }

    friend bool operator==(const Tour&, const Tour&) = default;

  private:
    std::vector<int> cities_;
};

/// Empty optional when `tour` is a permutation of 1..n, else the first problem found.
inline std::optional<std::string> validate_tour(const Tour& tour, std::size_t n) {
    if (tour.size() != n) {
        return "length " + std::to_string(tour.size()) + " does not match " + std::to_string(n) + " cities";
    }
    std::vector<bool> seen(n + 1, false);
    for (const int city : tour) {
        if (city < 1 || static_cast<std::size_t>(city) > n) {
            return "label " + std::to_string(city) + " out of range";
        }
        if (seen[static_cast<std::size_t>(city)]) return "duplicate label " + std::to_string(city);
        seen[static_cast<std::size_t>(city)] = true;
    }
    return std::nullopt;
}

inline bool is_valid_tour(const Tour& tour, std::size_t n) { return !validate_tour(tour, n).has_value(); }

inline void require_valid_tour(const Tour& tour, std::size_t n) {
    if (auto problem = validate_tour(tour, n)) throw InvalidTour("invalid tour: " + *problem);
}

namespace detail {

inline double closed_tour_cost(const Tour& tour, const Instance& inst) noexcept {
    double total = 0.0;
    const std::size_t n = tour.size();
    for (std::size_t i = 0; i + 1 < n; ++i) total += inst.cost(tour[i], tour[i + 1]);
    return total + inst.cost(tour[n - 1], tour[0]);
}

} // namespace detail

/// Closed-tour cost: consecutive edges plus the edge from the last city back to the first.
inline double tour_cost(const Tour& tour, const Instance& inst) {
    require_valid_tour(tour, inst.size());
    return detail::closed_tour_cost(tour, inst);
}

/// Uniformly random permutation of 1..n (Fisher-Yates).
inline Tour random_tour(std::size_t n, Rng& rng) {
    if (n < 3) throw std::invalid_argument("random_tour: need n >= 3, got " + std::to_string(n));
    std::vector<int> cities(n);
    std::iota(cities.begin(), cities.end(), 1);
    shuffle(std::span<int>(cities), rng);
    return Tour(std::move(cities));
}

struct Individual {
    Tour tour;
    double cost = 0.0;
};

/// Cost evaluation with an evaluation counter; one Evaluator per run.
class Evaluator {
  public:
    explicit Evaluator(const Instance& inst) : inst_(&inst) {}

    Individual evaluate(Tour tour) {
        assert(is_valid_tour(tour, inst_->size()));
        ++count_;
        const double cost = detail::closed_tour_cost(tour, *inst_);
        return Individual{std::move(tour), cost};
    }

    std::uint64_t count() const noexcept { return count_; }
    const Instance& instance() const noexcept { return *inst_; }

  private:
    const Instance* inst_;
    std::uint64_t count_ = 0;
};

} // namespace cxga
