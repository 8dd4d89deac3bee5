#pragma once

// Row-profile transfer DP over the king graph itself. A row is a bitmask
// with no two adjacent kings; two consecutive rows are compatible when no
// king of one attacks a king of the other. This shares nothing with the
// Wang contraction except the limb arithmetic, so the two engines check
// each other.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "kingis/bigcount.hpp"
#include "kingis/errors.hpp"
#include "kingis/grid.hpp"
#include "kingis/parallel.hpp"

namespace kingis {

struct RowProfile {
    std::uint32_t bits = 0;

    int kings() const { return std::popcount(bits); }
    friend constexpr auto operator<=>(const RowProfile&, const RowProfile&) = default;
};

inline constexpr int kMaxProfileWidth = 30;
inline constexpr int kMaxProfileWidthBySize = 26;

struct ProfileOptions {
    /// Cap on the number of compatible profile pairs held in memory.
    std::size_t pair_cap = std::size_t{1} << 28;
    unsigned threads = 0;
};

inline void require_profile_width(int width, int limit = kMaxProfileWidth) {
    if (width < 1 || width > limit)
        throw WidthOutOfRange("profile width must lie in 1.." + std::to_string(limit) + ", got " +
                              std::to_string(width));
}

/// Masks of the given width with no two adjacent set bits, ascending.
inline std::vector<RowProfile> valid_profiles(int width) {
    require_profile_width(width);
    std::vector<RowProfile> out;
    const std::uint32_t limit = std::uint32_t{1} << width;
    for (std::uint32_t bits = 0; bits < limit; ++bits)
        if ((bits & (bits >> 1)) == 0) out.push_back({bits});
    return out;
}

inline bool compatible(RowProfile p, RowProfile q) {
    return (p.bits & q.bits) == 0 && (p.bits & (q.bits << 1)) == 0 && (p.bits & (q.bits >> 1)) == 0;
}

namespace detail {

// preds[offsets[j] .. offsets[j+1]) lists the profile indices compatible
// with profile j.
struct TransferTable {
    std::vector<RowProfile> profiles;
    std::vector<std::uint32_t> offsets;
    std::vector<std::uint32_t> preds;
};

inline TransferTable build_transfer(int width, std::size_t pair_cap) {
    TransferTable t;
    t.profiles = valid_profiles(width);
    const std::size_t count = t.profiles.size();
    std::vector<std::uint32_t> index(std::size_t{1} << width, 0);
    for (std::size_t i = 0; i < count; ++i) index[t.profiles[i].bits] = static_cast<std::uint32_t>(i);
    const std::uint32_t full = (std::uint32_t{1} << width) - 1;
    t.offsets.reserve(count + 1);
    t.offsets.push_back(0);
    for (const RowProfile q : t.profiles) {
        // Compatible rows are the valid submasks of the unattacked columns.
        const std::uint32_t free = ~(q.bits | q.bits << 1 | q.bits >> 1) & full;
        std::uint32_t sub = free;
        while (true) {
            if ((sub & (sub >> 1)) == 0) t.preds.push_back(index[sub]);
            if (sub == 0) break;
            sub = (sub - 1) & free;
        }
        if (t.preds.size() > pair_cap)
            throw BudgetExceeded("profile transfer table for width " + std::to_string(width) +
                                 " exceeds the pair cap");
        std::sort(t.preds.begin() + t.offsets.back(), t.preds.end());
        t.offsets.push_back(static_cast<std::uint32_t>(t.preds.size()));
    }
    return t;
}

enum class DpMode { count, by_size, weighted };

// Runs `rows` row steps and calls on_row(height, arena) after each one.
// Slot layout: count -> [count]; by_size -> [c = 0..slots); weighted ->
// [count, weight_sum].
template <class OnRow>
void run_profile_dp(int width, int rows, DpMode mode, const ProfileOptions& opt, OnRow&& on_row) {
    const TransferTable t = build_transfer(width, opt.pair_cap);
    const std::size_t states = t.profiles.size();
    const int c_max = max_independent_size({width, rows});
    const std::size_t slots = mode == DpMode::by_size ? static_cast<std::size_t>(c_max) + 1
                              : mode == DpMode::weighted ? 2
                                                         : 1;
    double bits = rows * std::log2(static_cast<double>(states));
    if (mode == DpMode::weighted) bits += std::log2(c_max + 1.0) + 1.0;
    const std::size_t L = limbs_for_bits(bits);

    MassArena mass(states, slots, L);
    for (std::size_t i = 0; i < states; ++i) {
        const int k = t.profiles[i].kings();
        limb_t* dst = mass.state(i);
        if (mode == DpMode::by_size) dst[static_cast<std::size_t>(k) * L] = 1;
        else dst[0] = 1;
        if (mode == DpMode::weighted) dst[L] = static_cast<limb_t>(k);
    }
    on_row(1, static_cast<const MassArena&>(mass));

    MassArena next;
    for (int r = 2; r <= rows; ++r) {
        next.reset(states, slots, L);
        const std::size_t active = std::min<std::size_t>(slots, static_cast<std::size_t>(((width + 1) / 2) * ((r + 1) / 2)) + 1);
        parallel_chunks(states, opt.threads, [&](std::size_t begin, std::size_t end) {
            std::vector<limb_t> acc(slots * L);
            for (std::size_t j = begin; j < end; ++j) {
                std::fill(acc.begin(), acc.end(), 0);
                for (std::uint32_t e = t.offsets[j]; e < t.offsets[j + 1]; ++e)
                    add_limbs(acc.data(), mass.state(t.preds[e]), active * L);
                const auto k = static_cast<std::size_t>(t.profiles[j].kings());
                limb_t* dst = next.state(j);
                if (mode == DpMode::by_size) {
                    if (k < active) std::copy_n(acc.data(), (active - k) * L, dst + k * L);
                } else {
                    std::copy_n(acc.data(), slots * L, dst);
                    // Appending k kings adds k to the weight of every configuration.
                    if (mode == DpMode::weighted && k > 0) add_scaled_limbs(dst + L, acc.data(), L, k);
                }
            }
        }, 512);
        mass.swap(next);
        on_row(r, static_cast<const MassArena&>(mass));
    }
}

inline std::vector<limb_t> sum_states(const MassArena& mass) {
    std::vector<limb_t> total(mass.stride(), 0);
    for (std::size_t i = 0; i < mass.states(); ++i) add_limbs(total.data(), mass.state(i), total.size());
    return total;
}

}  // namespace detail

/// N_{width x n} for n = 1..rows.
inline std::vector<BigCount> dp_count_rows(int width, int rows, const ProfileOptions& opt = {}) {
    require_profile_width(width);
    std::vector<BigCount> out;
    detail::run_profile_dp(width, rows, detail::DpMode::count, opt, [&](int, const detail::MassArena& mass) {
        out.push_back(detail::limbs_to_big(detail::sum_states(mass)));
    });
    return out;
}

inline std::vector<CountTable> dp_count_by_c_rows(int width, int rows, const ProfileOptions& opt = {}) {
    require_profile_width(width, kMaxProfileWidthBySize);
    std::vector<CountTable> out;
    detail::run_profile_dp(width, rows, detail::DpMode::by_size, opt, [&](int height, const detail::MassArena& mass) {
        const auto total = detail::sum_states(mass);
        CountTable table(GridShape{width, height});
        for (std::size_t c = 0; c < table.counts.size(); ++c)
            table.counts[c] = detail::limbs_to_big({total.data() + c * mass.limbs(), mass.limbs()});
        out.push_back(std::move(table));
    });
    return out;
}

inline std::vector<BigCount> dp_weighted_rows(int width, int rows, const ProfileOptions& opt = {}) {
    require_profile_width(width);
    std::vector<BigCount> out;
    detail::run_profile_dp(width, rows, detail::DpMode::weighted, opt, [&](int, const detail::MassArena& mass) {
        const auto total = detail::sum_states(mass);
        out.push_back(detail::limbs_to_big({total.data() + mass.limbs(), mass.limbs()}));
    });
    return out;
}

inline BigCount dp_count(GridShape shape, const ProfileOptions& opt = {}) {
    require_valid(shape);
    const GridShape c = canonicalize(shape);
    return dp_count_rows(c.m, c.n, opt).back();
}

inline CountTable dp_count_by_c(GridShape shape, const ProfileOptions& opt = {}) {
    require_valid(shape);
    const GridShape c = canonicalize(shape);
    CountTable table = dp_count_by_c_rows(c.m, c.n, opt).back();
    table.shape = shape;
    return table;
}

inline BigCount dp_weighted(GridShape shape, const ProfileOptions& opt = {}) {
    require_valid(shape);
    const GridShape c = canonicalize(shape);
    return dp_weighted_rows(c.m, c.n, opt).back();
}

}  // namespace kingis
