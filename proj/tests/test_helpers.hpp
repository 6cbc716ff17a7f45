#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cxga/cxga.hpp"

#ifndef CXGA_DATA_DIR
#define CXGA_DATA_DIR "data"
#endif
#ifndef CXGA_TEST_DATA_DIR
#define CXGA_TEST_DATA_DIR "tests/data"
#endif

namespace testing_support {

inline std::string data_path(const std::string& file) { return std::string(CXGA_DATA_DIR) + "/" + file; }
inline std::string test_data_path(const std::string& file) { return std::string(CXGA_TEST_DATA_DIR) + "/" + file; }

inline cxga::Instance unit_square() { return cxga::Instance("square", {{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

/// n cities with coordinates uniform in [0, 1000)^2.
inline cxga::Instance random_euclidean(std::size_t n, std::uint64_t seed,
                                       cxga::Rounding rounding = cxga::Rounding::nint) {
    cxga::Rng rng(seed);
    std::vector<cxga::Point> pts(n);
    for (auto& p : pts) p = {1000.0 * cxga::uniform01(rng), 1000.0 * cxga::uniform01(rng)};
    return cxga::Instance("rand" + std::to_string(n) + "_" + std::to_string(seed), std::move(pts), rounding);
}

inline std::vector<cxga::Individual> random_population(const cxga::Instance& inst, std::size_t size,
                                                       cxga::Rng& rng) {
    cxga::Evaluator eval(inst);
    std::vector<cxga::Individual> pop;
    for (std::size_t i = 0; i < size; ++i) pop.push_back(eval.evaluate(cxga::random_tour(inst.size(), rng)));
    return pop;
}

/// All permutations of 1..n in lexicographic order.
inline std::vector<cxga::Tour> all_tours(int n) {
    std::vector<int> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i + 1;
    std::vector<cxga::Tour> out;
    do {
        out.emplace_back(v);
    } while (std::next_permutation(v.begin(), v.end()));
    return out;
}

} // namespace testing_support
