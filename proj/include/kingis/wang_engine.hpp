#pragma once

// Frontier contraction over the (m+1) x (n+1) Wang grid.
//
// The grid is swept row by row, one merged block at a time. A frontier
// state packs
//
//   bits [0, W)   vertical character under each Wang column (blocks already
//                 placed in this row contribute their bottom edge, the rest
//                 still show the previous row's bottom edge)
//   bit  W        horizontal carry at the scan position
//   bit  W+1      marker: a black king has been chosen (weighted mode)
//
// and maps to a dense payload of slots: one counter in count and weighted
// mode, one per king count c in constrained mode. The leftmost block uses
// the left-restricted set; outer edges are forced BLANK by starting from
// the all-blank profile, rejecting a ONE carry after the last block, and
// reading results only at the all-blank profile.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "kingis/bigcount.hpp"
#include "kingis/errors.hpp"
#include "kingis/grid.hpp"
#include "kingis/parallel.hpp"
#include "kingis/wang_tiles.hpp"

namespace kingis {

struct ContractOptions {
    int merge_width = 4;
    /// Upper bound on live states times payload slots.
    std::size_t state_cap = std::size_t{1} << 27;
    unsigned threads = 0;
    /// Constrained mode only: track sizes 0..max_c and drop the rest.
    std::optional<int> max_c;
};

enum class ContractMode { count, by_size, weighted };

inline constexpr int kMaxWangColumns = 61;

namespace detail {

struct BlockOption {
    std::uint32_t bottom;
    std::uint8_t right;
    std::uint8_t kings;
};

struct BlockTable {
    int col0 = 0;
    int width = 0;
    bool last = false;
    // options for (carry, top) live in options[offsets[i] .. offsets[i+1])
    // with i = carry << width | top.
    std::vector<std::uint32_t> offsets;
    std::vector<BlockOption> options;
};

inline BlockTable make_block_table(const MergedTileSet& set, int col0, bool last) {
    BlockTable table;
    table.col0 = col0;
    table.width = set.l;
    table.last = last;
    const std::size_t keys = std::size_t{2} << set.l;
    std::vector<std::vector<BlockOption>> buckets(keys);
    for (const auto& t : set.tiles) {
        if (last && t.right == EdgeChar::one) continue;
        const std::size_t idx = static_cast<std::size_t>(t.left == EdgeChar::one) << set.l | t.top;
        buckets[idx].push_back({t.bottom, static_cast<std::uint8_t>(t.right == EdgeChar::one),
                                static_cast<std::uint8_t>(t.kings)});
    }
    table.offsets.push_back(0);
    for (auto& b : buckets) {
        table.options.insert(table.options.end(), b.begin(), b.end());
        table.offsets.push_back(static_cast<std::uint32_t>(table.options.size()));
    }
    return table;
}

/// Blocks for a row of `columns` Wang cells: a left-restricted head of
/// width m0 followed by m1 full blocks of width l, columns = l*m1 + m0.
inline std::vector<BlockTable> make_row_blocks(int columns, int l) {
    const int m1 = (columns - 1) / l;
    const int m0 = columns - l * m1;
    std::vector<BlockTable> blocks;
    blocks.push_back(make_block_table(merge_tiles(m0, true), 0, m1 == 0));
    const auto body = merge_tiles(l);
    for (int k = 0; k < m1; ++k) blocks.push_back(make_block_table(body, m0 + k * l, k + 1 == m1));
    return blocks;
}

inline double log2_fib(int k) {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    return k * std::log2(phi) - 0.5 * std::log2(5.0) + 1e-9;
}

// log2 of sum_{c <= max_c} C(cells, c), an upper bound on counts that only
// involve sets of at most max_c kings.
inline double log2_binomial_prefix(long cells, int max_c) {
    double total = 0.0;
    for (int c = 0; c <= max_c && c <= cells; ++c)
        total += std::exp2((std::lgamma(cells + 1.0) - std::lgamma(c + 1.0) - std::lgamma(cells - c + 1.0)) /
                           std::log(2.0));
    return std::log2(total) + 1e-9;
}

class WangSweep {
public:
    WangSweep(int width, int max_rows, ContractMode mode, const ContractOptions& opt)
        : width_(width), rows_(max_rows), columns_(width + 1), mode_(mode), opt_(opt) {
        require_merge_width(opt.merge_width);
        if (width < 1 || max_rows < 1) throw InvalidShape("sweep needs positive width and height");
        if (columns_ > kMaxWangColumns)
            throw WidthOutOfRange("Wang sweep supports at most " + std::to_string(kMaxWangColumns - 1) +
                                  " king columns");
        const int c_max = max_independent_size({width, max_rows});
        slots_ = 1;
        if (mode == ContractMode::by_size) slots_ = static_cast<std::size_t>(std::min(c_max, opt.max_c.value_or(c_max))) + 1;

        // A partial tiling is fixed by a set of non-overlapping blocks
        // anchored inside a (W+1) x (H+1) box, so every counter stays below
        // Fib(W+3)^(H+1) times the largest weight.
        double bits = (max_rows + 1) * log2_fib(columns_ + 2);
        if (mode == ContractMode::weighted) bits += std::log2(c_max + 1.0) + 1.0;
        if (mode == ContractMode::by_size && opt.max_c)
            bits = std::min(bits, log2_binomial_prefix(static_cast<long>(columns_ + 1) * (max_rows + 2), *opt.max_c));
        limbs_ = limbs_for_bits(bits);

        const BigCount predicted = predict_state_size(columns_, opt.merge_width) *
                                   (mode == ContractMode::weighted ? 2u : 1u) * static_cast<unsigned>(slots_);
        if (predicted > BigCount(opt.state_cap))
            throw BudgetExceeded("predicted frontier of " + to_decimal(predicted) + " state slots exceeds cap " +
                                 std::to_string(opt.state_cap));
        blocks_ = make_row_blocks(columns_, opt.merge_width);
        marker_bit_ = std::uint64_t{1} << (columns_ + 1);
    }

    std::size_t slots() const { return slots_; }
    std::size_t limbs() const { return limbs_; }

    /// Calls on_row(height, payload) after each completed Wang row 1..H,
    /// where payload points at the accepting state's slots (or nullptr if
    /// no configuration is accepted).
    template <class OnRow>
    void run(OnRow&& on_row) {
        keys_.assign(1, 0);
        mass_ = MassArena(1, slots_, limbs_);
        mass_.state(0)[0] = 1;
        for (int r = 0; r <= rows_; ++r) {
            // King rows 0..r-1 are touched while Wang row r is swept.
            const std::size_t reach = static_cast<std::size_t>(((width_ + 1) / 2) * ((r + 1) / 2)) + 1;
            const std::size_t active = std::min(slots_, reach);
            for (const auto& block : blocks_) step(block, active);
            if (r >= 1) on_row(r, accepting());
        }
    }

private:
    struct Edge {
        std::uint64_t key;
        std::uint32_t src;
        std::uint16_t shift;
        std::uint16_t mult;
    };

    const limb_t* accepting() const {
        const std::uint64_t key = mode_ == ContractMode::weighted ? marker_bit_ : 0;
        const auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
        if (it == keys_.end() || *it != key) return nullptr;
        return mass_.state(static_cast<std::size_t>(it - keys_.begin()));
    }

    void step(const BlockTable& block, std::size_t active) {
        const std::uint64_t carry_bit = std::uint64_t{1} << columns_;
        const std::uint64_t window = ((std::uint64_t{1} << block.width) - 1) << block.col0;
        const bool weighted = mode_ == ContractMode::weighted;
        const bool by_size = mode_ == ContractMode::by_size;

        edges_.clear();
        for (std::size_t i = 0; i < keys_.size(); ++i) {
            const std::uint64_t key = keys_[i];
            const std::uint64_t carry = (key & carry_bit) ? 1 : 0;
            const std::uint64_t top = (key & window) >> block.col0;
            const std::size_t idx = static_cast<std::size_t>(carry << block.width | top);
            const std::uint64_t kept = key & ~window & ~carry_bit;
            const auto src = static_cast<std::uint32_t>(i);
            for (std::uint32_t o = block.offsets[idx]; o < block.offsets[idx + 1]; ++o) {
                const BlockOption& opt = block.options[o];
                const std::uint64_t next =
                    kept | static_cast<std::uint64_t>(opt.bottom) << block.col0 | (opt.right ? carry_bit : 0);
                if (by_size) {
                    if (opt.kings >= active) continue;
                    edges_.push_back({next, src, opt.kings, 1});
                } else if (weighted) {
                    edges_.push_back({next, src, 0, 1});
                    // Colour one of this block's kings black.
                    if (!(key & marker_bit_) && opt.kings > 0) edges_.push_back({next | marker_bit_, src, 0, opt.kings});
                } else {
                    edges_.push_back({next, src, 0, 1});
                }
            }
        }
        std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) { return a.key < b.key; });

        group_start_.clear();
        std::vector<std::uint64_t> next_keys;
        for (std::size_t e = 0; e < edges_.size(); ++e)
            if (e == 0 || edges_[e].key != edges_[e - 1].key) {
                group_start_.push_back(e);
                next_keys.push_back(edges_[e].key);
            }
        group_start_.push_back(edges_.size());
        if (next_keys.size() * slots_ > opt_.state_cap)
            throw BudgetExceeded("live frontier exceeds state cap " + std::to_string(opt_.state_cap));

        MassArena& next = spare_;
        next.reset(next_keys.size(), slots_, limbs_);
        const std::size_t L = limbs_;
        parallel_chunks(next_keys.size(), opt_.threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t g = begin; g < end; ++g) {
                limb_t* dst = next.state(g);
                for (std::size_t e = group_start_[g]; e < group_start_[g + 1]; ++e) {
                    const Edge& edge = edges_[e];
                    const limb_t* src = mass_.state(edge.src);
                    const std::size_t n = (active - edge.shift) * L;
                    if (edge.mult == 1)
                        add_limbs(dst + edge.shift * L, src, n);
                    else
                        add_scaled_limbs(dst + edge.shift * L, src, n, edge.mult);
                }
            }
        }, 1024);
        keys_.swap(next_keys);
        mass_.swap(next);
    }

    int width_;
    int rows_;
    int columns_;
    ContractMode mode_;
    ContractOptions opt_;
    std::size_t slots_ = 1;
    std::size_t limbs_ = 1;
    std::uint64_t marker_bit_ = 0;
    std::vector<BlockTable> blocks_;
    std::vector<std::uint64_t> keys_;
    MassArena mass_;
    MassArena spare_;
    std::vector<Edge> edges_;
    std::vector<std::size_t> group_start_;
};

inline BigCount payload_value(const limb_t* payload, std::size_t limbs) {
    return payload ? limbs_to_big({payload, limbs}) : BigCount(0);
}

}  // namespace detail

/// N_{width x n} for n = 1..max_rows from one sweep.
inline std::vector<BigCount> contract_count_rows(int width, int max_rows, const ContractOptions& opt = {}) {
    detail::WangSweep sweep(width, max_rows, ContractMode::count, opt);
    std::vector<BigCount> out;
    sweep.run([&](int, const detail::limb_t* p) { out.push_back(detail::payload_value(p, sweep.limbs())); });
    return out;
}

/// W(width, n) for n = 1..max_rows from one sweep.
inline std::vector<BigCount> contract_weighted_rows(int width, int max_rows, const ContractOptions& opt = {}) {
    detail::WangSweep sweep(width, max_rows, ContractMode::weighted, opt);
    std::vector<BigCount> out;
    sweep.run([&](int, const detail::limb_t* p) { out.push_back(detail::payload_value(p, sweep.limbs())); });
    return out;
}

/// Count tables of width x n for n = 1..max_rows from one sweep.
inline std::vector<CountTable> contract_count_by_c_rows(int width, int max_rows, const ContractOptions& opt = {}) {
    detail::WangSweep sweep(width, max_rows, ContractMode::by_size, opt);
    std::vector<CountTable> out;
    sweep.run([&](int height, const detail::limb_t* p) {
        CountTable table(GridShape{width, height});
        const std::size_t kept = std::min(table.counts.size(), sweep.slots());
        for (std::size_t c = 0; c < kept && p; ++c)
            table.counts[c] = detail::limbs_to_big({p + c * sweep.limbs(), sweep.limbs()});
        out.push_back(std::move(table));
    });
    return out;
}

inline BigCount contract_count(GridShape shape, const ContractOptions& opt = {}) {
    require_valid(shape);
    const GridShape c = canonicalize(shape);
    return contract_count_rows(c.m, c.n, opt).back();
}

inline BigCount contract_count(GridShape shape, int merge_width) {
    ContractOptions opt;
    opt.merge_width = merge_width;
    return contract_count(shape, opt);
}

/// Sizes above opt.max_c, when set, are reported as zero.
inline CountTable contract_count_by_c(GridShape shape, const ContractOptions& opt = {}) {
    require_valid(shape);
    const GridShape c = canonicalize(shape);
    CountTable table = contract_count_by_c_rows(c.m, c.n, opt).back();
    table.shape = shape;
    return table;
}

inline CountTable contract_count_by_c(GridShape shape, int merge_width) {
    ContractOptions opt;
    opt.merge_width = merge_width;
    return contract_count_by_c(shape, opt);
}

inline BigCount contract_weighted(GridShape shape, const ContractOptions& opt = {}) {
    require_valid(shape);
    const GridShape c = canonicalize(shape);
    return contract_weighted_rows(c.m, c.n, opt).back();
}

inline BigCount contract_weighted(GridShape shape, int merge_width) {
    ContractOptions opt;
    opt.merge_width = merge_width;
    return contract_weighted(shape, opt);
}

}  // namespace kingis
