#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "kingis/bigcount.hpp"
#include "kingis/errors.hpp"

namespace kingis {

/// An m x n board: m columns (width), n rows (height).
struct GridShape {
    int m = 1;
    int n = 1;

    constexpr GridShape() = default;
    constexpr GridShape(int m_, int n_) : m(m_), n(n_) {}

    constexpr bool valid() const { return m >= 1 && n >= 1; }
    constexpr long area() const { return static_cast<long>(m) * n; }
    constexpr GridShape transposed() const { return {n, m}; }

    friend constexpr auto operator<=>(const GridShape&, const GridShape&) = default;
};

inline void require_valid(GridShape s) {
    if (!s.valid())
        throw InvalidShape("grid shape must have m >= 1 and n >= 1, got " + std::to_string(s.m) +
                           "x" + std::to_string(s.n));
}

inline std::string to_string(GridShape s) { return std::to_string(s.m) + "x" + std::to_string(s.n); }

/// (min(m,n), max(m,n)). Every count is invariant under transposition.
constexpr GridShape canonicalize(GridShape s) { return {std::min(s.m, s.n), std::max(s.m, s.n)}; }

/// Size of a maximum independent set: floor((m+1)/2) * floor((n+1)/2).
constexpr int max_independent_size(GridShape s) { return ((s.m + 1) / 2) * ((s.n + 1) / 2); }

/// Independent-set counts resolved by size: counts[c] = N_{m x n, c}.
struct CountTable {
    GridShape shape;
    std::vector<BigCount> counts;

    CountTable() = default;
    explicit CountTable(GridShape s)
        : shape(s), counts(static_cast<std::size_t>(max_independent_size(s)) + 1, BigCount(0)) {}

    int c_max() const { return max_independent_size(shape); }

    BigCount total() const {
        BigCount sum = 0;
        for (const auto& v : counts) sum += v;
        return sum;
    }

    /// Sum of c * counts[c]; the vertex-weighted enumeration.
    BigCount weighted() const {
        BigCount sum = 0;
        for (std::size_t c = 1; c < counts.size(); ++c) sum += counts[c] * static_cast<unsigned>(c);
        return sum;
    }

    BigCount at(int c) const {
        if (c < 0 || static_cast<std::size_t>(c) >= counts.size()) return 0;
        return counts[static_cast<std::size_t>(c)];
    }

    friend bool operator==(const CountTable&, const CountTable&) = default;
};

}  // namespace kingis
