#pragma once

// Ground truth for the king graph: exhaustive oracles straight from the
// definitions, and the closed forms for maximum independent sets.

#include <cstdint>
#include <optional>
#include <vector>

#include "kingis/bigcount.hpp"
#include "kingis/errors.hpp"
#include "kingis/grid.hpp"

namespace kingis {

inline constexpr long kBruteForceMaxVertices = 36;
inline constexpr long kBruteForceMaxCells = 42;

namespace detail {

// Vertex v = row * m + col. Closed 8-neighbourhood masks.
inline std::vector<std::uint64_t> king_neighbourhoods(GridShape s) {
    std::vector<std::uint64_t> masks(static_cast<std::size_t>(s.area()), 0);
    for (int r = 0; r < s.n; ++r)
        for (int c = 0; c < s.m; ++c) {
            std::uint64_t mask = 0;
            for (int dr = -1; dr <= 1; ++dr)
                for (int dc = -1; dc <= 1; ++dc) {
                    const int rr = r + dr, cc = c + dc;
                    if (rr >= 0 && rr < s.n && cc >= 0 && cc < s.m) mask |= std::uint64_t{1} << (rr * s.m + cc);
                }
            masks[static_cast<std::size_t>(r * s.m + c)] = mask;
        }
    return masks;
}

// Visits every independent set once, as a chain of strictly increasing
// vertex choices. `on_set(size)` fires for each set including the empty one.
template <class OnSet>
void enumerate_independent(const std::vector<std::uint64_t>& nbhd, int first, std::uint64_t blocked, int size,
                           OnSet& on_set) {
    on_set(size);
    const int count = static_cast<int>(nbhd.size());
    for (int v = first; v < count; ++v) {
        if (blocked >> v & 1) continue;
        enumerate_independent(nbhd, v + 1, blocked | nbhd[static_cast<std::size_t>(v)], size + 1, on_set);
    }
}

inline void require_brute_force_vertices(GridShape s) {
    require_valid(s);
    if (s.area() > kBruteForceMaxVertices)
        throw ShapeTooLarge("brute force is limited to " + std::to_string(kBruteForceMaxVertices) +
                            " vertices, got " + to_string(s));
}

}  // namespace detail

/// Independent sets of every size, by direct backtracking over the graph.
inline CountTable brute_force_count_table(GridShape s) {
    detail::require_brute_force_vertices(s);
    const auto nbhd = detail::king_neighbourhoods(s);
    std::vector<std::uint64_t> by_size(static_cast<std::size_t>(max_independent_size(s)) + 1, 0);
    auto tally = [&](int size) { ++by_size.at(static_cast<std::size_t>(size)); };
    detail::enumerate_independent(nbhd, 0, 0, 0, tally);
    CountTable table(s);
    for (std::size_t c = 0; c < by_size.size(); ++c) table.counts[c] = by_size[c];
    return table;
}

/// Sum of |S| over all independent sets S.
inline BigCount brute_force_weighted(GridShape s) {
    detail::require_brute_force_vertices(s);
    const auto nbhd = detail::king_neighbourhoods(s);
    std::uint64_t total = 0;
    auto tally = [&](int size) { total += static_cast<std::uint64_t>(size); };
    detail::enumerate_independent(nbhd, 0, 0, 0, tally);
    return total;
}

/// Placements of pairwise non-overlapping 2x2 tiles in an (m+1) x (n+1)
/// cell grid, the empty placement included.
inline BigCount brute_force_tile_packings(GridShape s) {
    require_valid(s);
    const int w = s.m + 1, h = s.n + 1;
    if (static_cast<long>(w) * h > kBruteForceMaxCells)
        throw ShapeTooLarge("tile packing oracle is limited to " + std::to_string(kBruteForceMaxCells) +
                            " cells, got " + std::to_string(w) + "x" + std::to_string(h));
    // Tile anchored at its top-left cell (x, y) covers x..x+1, y..y+1.
    std::vector<std::uint64_t> footprints;
    for (int y = 0; y + 1 < h; ++y)
        for (int x = 0; x + 1 < w; ++x) {
            auto bit = [&](int xx, int yy) { return std::uint64_t{1} << (yy * w + xx); };
            footprints.push_back(bit(x, y) | bit(x + 1, y) | bit(x, y + 1) | bit(x + 1, y + 1));
        }
    std::uint64_t placements = 0;
    auto recurse = [&](auto& self, std::size_t first, std::uint64_t occupied) -> void {
        ++placements;
        for (std::size_t t = first; t < footprints.size(); ++t)
            if ((occupied & footprints[t]) == 0) self(self, t + 1, occupied | footprints[t]);
    };
    recurse(recurse, 0, 0);
    return placements;
}

/// Number of maximum independent sets when a closed form exists:
/// both odd -> 1; m odd, n even -> (n/2+1)^((m+1)/2); m even, n odd ->
/// (m/2+1)^((n+1)/2). Both even has no closed form and yields nullopt.
inline std::optional<BigCount> max_independent_count_closed_form(GridShape s) {
    require_valid(s);
    const bool m_odd = s.m % 2 == 1, n_odd = s.n % 2 == 1;
    if (m_odd && n_odd) return BigCount(1);
    if (m_odd) return boost::multiprecision::pow(BigCount(s.n / 2 + 1), static_cast<unsigned>((s.m + 1) / 2));
    if (n_odd) return boost::multiprecision::pow(BigCount(s.m / 2 + 1), static_cast<unsigned>((s.n + 1) / 2));
    return std::nullopt;
}

}  // namespace kingis
