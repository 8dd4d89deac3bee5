#pragma once

// Arbitrary-precision counts plus the fixed-width limb arithmetic the
// engines use in their inner loops.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kingis/errors.hpp"

namespace kingis {

using BigCount = boost::multiprecision::cpp_int;

inline std::string to_decimal(const BigCount& v) { return v.str(); }

/// Parses a base-10 string with no sign and no leading zeros (except "0").
inline BigCount parse_decimal(std::string_view s) {
    if (s.empty()) throw ParseError("empty decimal string");
    for (char ch : s)
        if (ch < '0' || ch > '9') throw ParseError("not a decimal digit string: " + std::string(s));
    if (s.size() > 1 && s.front() == '0')
        throw ParseError("leading zero in decimal string: " + std::string(s));
    return BigCount(std::string(s));
}

/// Natural logarithm of a positive count. Uses the top 64 bits as mantissa
/// and the bit position as exponent, so values of any size are safe.
inline double log_count(const BigCount& v) {
    if (v <= 0) throw NonPositiveValue("logarithm of a non-positive count");
    const std::size_t bits = boost::multiprecision::msb(v) + 1;
    if (bits <= 64) return static_cast<double>(std::log(static_cast<long double>(v.convert_to<std::uint64_t>())));
    const std::size_t shift = bits - 64;
    const std::uint64_t top = static_cast<BigCount>(v >> shift).convert_to<std::uint64_t>();
    const long double ln2 = 0.693147180559945309417232121458176568L;
    return static_cast<double>(std::log(static_cast<long double>(top)) + static_cast<long double>(shift) * ln2);
}

inline BigCount fibonacci(int k) {
    BigCount a = 0, b = 1;  // F(0), F(1)
    for (int i = 0; i < k; ++i) {
        BigCount t = a + b;
        a = std::move(b);
        b = std::move(t);
    }
    return a;
}

namespace detail {

using limb_t = std::uint64_t;

// dst[0..n) += src[0..n) as one little-endian multi-limb integer.
// Callers size their slots so that no carry ever leaves a slot.
inline void add_limbs(limb_t* dst, const limb_t* src, std::size_t n) {
    limb_t carry = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const unsigned __int128 acc = static_cast<unsigned __int128>(dst[i]) + src[i] + carry;
        dst[i] = static_cast<limb_t>(acc);
        carry = static_cast<limb_t>(acc >> 64);
    }
}

// dst[0..n) += k * src[0..n)
inline void add_scaled_limbs(limb_t* dst, const limb_t* src, std::size_t n, limb_t k) {
    limb_t carry = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const unsigned __int128 acc =
            static_cast<unsigned __int128>(src[i]) * k + dst[i] + carry;
        dst[i] = static_cast<limb_t>(acc);
        carry = static_cast<limb_t>(acc >> 64);
    }
}

inline BigCount limbs_to_big(std::span<const limb_t> limbs) {
    BigCount r = 0;
    for (std::size_t i = limbs.size(); i-- > 0;) {
        r <<= 64;
        r |= limbs[i];
    }
    return r;
}

/// Number of 64-bit limbs needed so that any value below 2^bits, and any
/// sum of such values that stays below the same bound, never overflows.
inline std::size_t limbs_for_bits(double bits) {
    const double padded = std::ceil(bits) + 2.0;
    return static_cast<std::size_t>(padded / 64.0) + 1;
}

/// Dense storage of states x slots x limbs. A slot is one multi-limb
/// counter; the slots of a state are contiguous, so a whole state can be
/// added in a single carry chain.
class MassArena {
public:
    MassArena() = default;
    MassArena(std::size_t states, std::size_t slots, std::size_t limbs)
        : slots_(slots), limbs_(limbs), data_(states * slots * limbs, 0) {}

    /// Resizes to zeroed storage, reusing the existing allocation.
    void reset(std::size_t states, std::size_t slots, std::size_t limbs) {
        slots_ = slots;
        limbs_ = limbs;
        data_.assign(states * slots * limbs, 0);
    }

    void swap(MassArena& other) noexcept {
        std::swap(slots_, other.slots_);
        std::swap(limbs_, other.limbs_);
        data_.swap(other.data_);
    }

    std::size_t states() const { return stride() == 0 ? 0 : data_.size() / stride(); }
    std::size_t slots() const { return slots_; }
    std::size_t limbs() const { return limbs_; }
    std::size_t stride() const { return slots_ * limbs_; }

    limb_t* state(std::size_t i) { return data_.data() + i * stride(); }
    const limb_t* state(std::size_t i) const { return data_.data() + i * stride(); }

    BigCount slot_value(std::size_t i, std::size_t slot) const {
        return limbs_to_big({state(i) + slot * limbs_, limbs_});
    }

private:
    std::size_t slots_ = 0;
    std::size_t limbs_ = 0;
    std::vector<limb_t> data_;
};

}  // namespace detail
}  // namespace kingis
