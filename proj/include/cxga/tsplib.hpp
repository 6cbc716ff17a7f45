#pragma once

/// @file tsplib.hpp
/// @brief Symmetric Euclidean TSP instances and a TSPLIB (EUC_2D) reader/writer.

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "error.hpp"

namespace cxga {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Distance convention for coordinate instances. `nint` is the TSPLIB EUC_2D
/// rule (round to nearest integer); `exact` keeps the real distance.
enum class Rounding { nint, exact };

/// Row-major n x n cost matrix with zero diagonal.
class CostMatrix {
  public:
    CostMatrix() = default;
    explicit CostMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }

    friend bool operator==(const CostMatrix&, const CostMatrix&) = default;

  private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// TSPLIB nint(): (int)(x + 0.5).
inline double tsplib_nint(double x) { return std::floor(x + 0.5); }

inline CostMatrix build_cost_matrix(const std::vector<Point>& coords, Rounding rounding = Rounding::nint) {
    if (coords.size() < 3) {
        throw InvalidInstance("invalid instance: need at least 3 cities, got " + std::to_string(coords.size()));
    }
    const std::size_t n = coords.size();
    CostMatrix cost(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = std::hypot(coords[i].x - coords[j].x, coords[i].y - coords[j].y);
            const double c = rounding == Rounding::nint ? tsplib_nint(d) : d;
            cost(i, j) = c;
            cost(j, i) = c;
        }
    }
    return cost;
}

/// An immutable TSP problem. City labels are 1..n everywhere in the public API.
class Instance {
  public:
    Instance(std::string name, std::vector<Point> coords, Rounding rounding = Rounding::nint)
        : name_(std::move(name)), coords_(std::move(coords)), rounding_(rounding),
          cost_(build_cost_matrix(coords_, rounding)) {}

    /// Instance given by an explicit symmetric matrix (no coordinates).
    static Instance from_matrix(std::string name, const std::vector<std::vector<double>>& rows) {
        const std::size_t n = rows.size();
        if (n < 3) throw InvalidInstance("invalid instance: need at least 3 cities");
        CostMatrix cost(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (rows[i].size() != n) throw InvalidInstance("invalid instance: cost matrix is not square");
            for (std::size_t j = 0; j < n; ++j) {
                if (rows[i][j] < 0.0) throw InvalidInstance("invalid instance: negative edge cost");
                cost(i, j) = rows[i][j];
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (cost(i, i) != 0.0) throw InvalidInstance("invalid instance: non-zero diagonal");
            for (std::size_t j = 0; j < i; ++j) {
                if (cost(i, j) != cost(j, i)) throw InvalidInstance("invalid instance: cost matrix is not symmetric");
            }
        }
        return Instance(std::move(name), std::move(cost));
    }

    const std::string& name() const noexcept { return name_; }
    std::size_t size() const noexcept { return cost_.size(); }
    const std::vector<Point>& coords() const noexcept { return coords_; }
    Rounding rounding() const noexcept { return rounding_; }
    const CostMatrix& matrix() const noexcept { return cost_; }

    /// Edge cost between cities `a` and `b` (1-based labels).
    double cost(int a, int b) const noexcept {
        return cost_(static_cast<std::size_t>(a - 1), static_cast<std::size_t>(b - 1));
    }

  private:
    Instance(std::string name, CostMatrix cost)
        : name_(std::move(name)), rounding_(Rounding::exact), cost_(std::move(cost)) {}

    std::string name_;
    std::vector<Point> coords_;
    Rounding rounding_ = Rounding::nint;
    CostMatrix cost_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

[[noreturn]] inline void parse_fail(std::size_t line_no, std::string_view line, const std::string& what) {
    throw ParseError("line " + std::to_string(line_no) + ": " + what + " [" + std::string(line) + "]");
}

inline std::optional<double> to_double(std::string_view token) {
    std::string s(token);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

} // namespace detail

/// Parse the EUC_2D subset of TSPLIB. Cities get labels 1..n in file order; the
/// file's own index column is checked for presence but not used as the label.
inline Instance parse_instance(std::istream& in, Rounding rounding = Rounding::nint) {
    std::string name;
    std::optional<std::size_t> dimension;
    std::optional<std::string> weight_type;
    std::vector<Point> coords;
    bool in_coords = false;
    bool saw_coord_section = false;
    std::size_t coord_section_line = 0;

    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = detail::trim(raw);
        if (line.empty()) continue;

        if (in_coords) {
            if (coords.size() < *dimension) {
                std::istringstream fields{std::string(line)};
                std::string idx, xs, ys, extra;
                fields >> idx >> xs >> ys;
                if (!detail::to_double(idx)) {
                    detail::parse_fail(line_no, line, "coordinate count mismatch: DIMENSION " +
                                                          std::to_string(*dimension) + " but " +
                                                          std::to_string(coords.size()) + " coordinates");
                }
                const auto x = detail::to_double(xs);
                const auto y = detail::to_double(ys);
                if (ys.empty() || !x || !y || (fields >> extra)) {
                    detail::parse_fail(line_no, line, "expected coordinate line \"index x y\" (" +
                                                          std::to_string(coords.size()) + " of " +
                                                          std::to_string(*dimension) + " read)");
                }
                coords.push_back({*x, *y});
                continue;
            }
            in_coords = false;
        }

        if (line == "EOF") break;
        if (line == "NODE_COORD_SECTION") {
            if (!dimension) detail::parse_fail(line_no, line, "NODE_COORD_SECTION before DIMENSION");
            if (!weight_type) detail::parse_fail(line_no, line, "NODE_COORD_SECTION before EDGE_WEIGHT_TYPE");
            in_coords = true;
            saw_coord_section = true;
            coord_section_line = line_no;
            continue;
        }
        if (line.ends_with("_SECTION")) {
            detail::parse_fail(line_no, line, "unsupported section");
        }

        const auto colon = line.find(':');
        if (colon == std::string_view::npos) {
            if (saw_coord_section && coords.size() == *dimension) {
                detail::parse_fail(line_no, line, "coordinate count mismatch: more entries than DIMENSION");
            }
            detail::parse_fail(line_no, line, "malformed header (expected KEY : value)");
        }
        const std::string_view key = detail::trim(line.substr(0, colon));
        const std::string_view value = detail::trim(line.substr(colon + 1));

        if (key == "NAME") {
            name = value;
        } else if (key == "TYPE") {
            if (value != "TSP") detail::parse_fail(line_no, line, "unsupported problem type");
        } else if (key == "DIMENSION") {
            const auto v = detail::to_double(value);
            if (!v || *v < 3 || *v != std::floor(*v)) {
                detail::parse_fail(line_no, line, "DIMENSION must be an integer >= 3");
            }
            dimension = static_cast<std::size_t>(*v);
        } else if (key == "EDGE_WEIGHT_TYPE") {
            if (value != "EUC_2D") detail::parse_fail(line_no, line, "unsupported edge weight type");
            weight_type = value;
        }
        // COMMENT, DISPLAY_DATA_TYPE and other descriptive keys are ignored.
    }

    if (!dimension) throw ParseError("line " + std::to_string(line_no) + ": missing DIMENSION");
    if (!weight_type) throw ParseError("line " + std::to_string(line_no) + ": missing EDGE_WEIGHT_TYPE");
    if (!saw_coord_section) throw ParseError("line " + std::to_string(line_no) + ": missing NODE_COORD_SECTION");
    if (coords.size() != *dimension) {
        throw ParseError("line " + std::to_string(coord_section_line) + ": coordinate count mismatch: DIMENSION " +
                         std::to_string(*dimension) + " but " + std::to_string(coords.size()) +
                         " coordinates");
    }
    return Instance(std::move(name), std::move(coords), rounding);
}

inline Instance parse_instance(std::string_view text, Rounding rounding = Rounding::nint) {
    std::istringstream in{std::string(text)};
    return parse_instance(in, rounding);
}

inline Instance load_instance(const std::string& path, Rounding rounding = Rounding::nint) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open instance file: " + path);
    try {
        return parse_instance(in, rounding);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

/// Write a coordinate instance back as TSPLIB text. Coordinates use
/// round-trip precision, so re-parsing yields the same cost matrix.
inline std::string to_tsplib(const Instance& inst) {
    if (inst.coords().empty()) throw InvalidInstance("instance has no coordinates to serialize");
    std::ostringstream out;
    out << "NAME : " << inst.name() << "\nTYPE : TSP\nDIMENSION : " << inst.size()
        << "\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n";
    char buf[96];
    for (std::size_t i = 0; i < inst.coords().size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu %.17g %.17g\n", i + 1, inst.coords()[i].x, inst.coords()[i].y);
        out << buf;
    }
    out << "EOF\n";
    return out.str();
}

} // namespace cxga
