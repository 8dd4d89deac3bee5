#pragma once

// The Wang tile encoding of 2x2 packings and its horizontal merges.
//
// A 2x2 block occupies cells
//
//     lead | riser
//     -----+------
//     lead | king
//
// and is drawn with three edge-labelled unit tiles: "lead" carries ONE on
// its right edge, "riser" carries ONE on its left and bottom edges, and
// "king" carries ONE on its top and left edges. The king tile sits at the
// block's bottom-right corner, which is the vertex of the king graph.
// Every other cell is the all-blank tile.

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "kingis/bigcount.hpp"
#include "kingis/errors.hpp"

namespace kingis {

enum class EdgeChar : std::uint8_t { blank = 0, one = 1 };

inline char glyph(EdgeChar c) { return c == EdgeChar::one ? '1' : '#'; }

struct WangTile {
    EdgeChar top = EdgeChar::blank;
    EdgeChar left = EdgeChar::blank;
    EdgeChar bottom = EdgeChar::blank;
    EdgeChar right = EdgeChar::blank;
    bool king_marker = false;

    friend bool operator==(const WangTile&, const WangTile&) = default;
};

/// The four unit tiles, in the order king, riser, lead, blank.
inline std::vector<WangTile> base_tileset() {
    constexpr auto B = EdgeChar::blank;
    constexpr auto I = EdgeChar::one;
    return {
        WangTile{I, I, B, B, true},   // king
        WangTile{B, I, I, B, false},  // riser
        WangTile{B, B, B, I, false},  // lead
        WangTile{B, B, B, B, false},  // blank
    };
}

/// l unit tiles side by side with matching characters on every internal
/// edge. Bit i of `top`/`bottom` is the character above/below cell i.
struct MergedTile {
    std::vector<WangTile> cells;
    std::uint32_t top = 0;
    std::uint32_t bottom = 0;
    EdgeChar left = EdgeChar::blank;
    EdgeChar right = EdgeChar::blank;
    int kings = 0;

    int width() const { return static_cast<int>(cells.size()); }
};

struct MergedTileSet {
    int l = 1;
    bool left_restricted = false;
    std::vector<MergedTile> tiles;
};

inline constexpr int kMaxMergeWidth = 8;

inline void require_merge_width(int l) {
    if (l < 1 || l > kMaxMergeWidth)
        throw MergeWidthOutOfRange("merge width must lie in 1.." + std::to_string(kMaxMergeWidth) + ", got " +
                                   std::to_string(l));
}

/// All horizontal l-merges of the base set. With `left_restricted` the
/// leftmost edge is forced to BLANK (the set used against the left border).
inline MergedTileSet merge_tiles(int l, bool left_restricted = false) {
    require_merge_width(l);
    const auto base = base_tileset();
    MergedTileSet set{l, left_restricted, {}};
    MergedTile partial;
    auto extend = [&](auto& self) -> void {
        if (partial.width() == l) {
            set.tiles.push_back(partial);
            return;
        }
        for (const auto& t : base) {
            if (partial.cells.empty()) {
                if (left_restricted && t.left != EdgeChar::blank) continue;
            } else if (partial.cells.back().right != t.left) {
                continue;
            }
            const MergedTile saved = partial;
            const auto bit = std::uint32_t{1} << partial.width();
            if (partial.cells.empty()) partial.left = t.left;
            if (t.top == EdgeChar::one) partial.top |= bit;
            if (t.bottom == EdgeChar::one) partial.bottom |= bit;
            partial.right = t.right;
            partial.kings += t.king_marker ? 1 : 0;
            partial.cells.push_back(t);
            self(self);
            partial = saved;
        }
    };
    extend(extend);
    return set;
}

inline std::string edge_string(std::uint32_t bits, int width) {
    std::string s;
    for (int i = 0; i < width; ++i) s += (bits >> i & 1) ? '1' : '#';
    return s;
}

/// Distinct top and bottom edge strings of a merged set, written with
/// '#' for BLANK and '1' for ONE, leftmost cell first.
inline std::set<std::string> vertical_alphabet(const MergedTileSet& ts) {
    std::set<std::string> alphabet;
    for (const auto& t : ts.tiles) {
        alphabet.insert(edge_string(t.top, t.width()));
        alphabet.insert(edge_string(t.bottom, t.width()));
    }
    return alphabet;
}

/// Peak state count of the block-merged sweep over a row of width m:
/// 2 carries x |left-restricted alphabet of the m0-wide head block| x
/// |alphabet of T^(l)|^m1, where m = l*m1 + m0 and 1 <= m0 <= l.
inline BigCount predict_state_size(int m, int l = 4) {
    require_merge_width(l);
    if (m < 1) throw WidthOutOfRange("row width must be positive");
    const int m1 = (m - 1) / l;
    const int m0 = m - l * m1;
    const auto head = vertical_alphabet(merge_tiles(m0, true)).size();
    const auto body = vertical_alphabet(merge_tiles(l)).size();
    BigCount size = 2 * static_cast<unsigned>(head);
    size *= boost::multiprecision::pow(BigCount(body), static_cast<unsigned>(m1));
    return size;
}

}  // namespace kingis
