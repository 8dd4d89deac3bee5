#include <gtest/gtest.h>

#include <cmath>

#include "kingis/bigcount.hpp"

using namespace kingis;

TEST(BigCount, DecimalRoundTrip) {
    const std::string s = "61653632830449131139551142952360173537910722679009015";
    EXPECT_EQ(to_decimal(parse_decimal(s)), s);
    EXPECT_EQ(to_decimal(parse_decimal("0")), "0");
}

TEST(BigCount, ParseRejectsMalformedDigits) {
    EXPECT_THROW(parse_decimal(""), ParseError);
    EXPECT_THROW(parse_decimal("007"), ParseError);
    EXPECT_THROW(parse_decimal("-5"), ParseError);
    EXPECT_THROW(parse_decimal("12a"), ParseError);
    EXPECT_THROW(parse_decimal(" 1"), ParseError);
}

TEST(BigCount, LogCountSmallAndHuge) {
    EXPECT_DOUBLE_EQ(log_count(2), std::log(2.0));
    EXPECT_NEAR(log_count(165580141), std::log(165580141.0), 1e-14 * std::log(165580141.0));
    // 10^200 has no double conversion worth trusting, so compare with 200 ln 10.
    const BigCount big = boost::multiprecision::pow(BigCount(10), 200);
    EXPECT_NEAR(log_count(big), 200.0 * std::log(10.0), 1e-12);
    const BigCount p = (BigCount(1) << 4000) * 3;
    EXPECT_NEAR(log_count(p), 4000.0 * std::log(2.0) + std::log(3.0), 1e-10);
}

TEST(BigCount, LogCountRejectsNonPositive) {
    EXPECT_THROW(log_count(0), NonPositiveValue);
    EXPECT_THROW(log_count(-3), NonPositiveValue);
}

TEST(BigCount, Fibonacci) {
    EXPECT_EQ(fibonacci(0), 0);
    EXPECT_EQ(fibonacci(1), 1);
    EXPECT_EQ(fibonacci(2), 1);
    EXPECT_EQ(fibonacci(10), 55);
    EXPECT_EQ(to_decimal(fibonacci(100)), "354224848179261915075");
}

TEST(Limbs, AddPropagatesCarryAcrossLimbs) {
    detail::limb_t a[3] = {~0ull, ~0ull, 0};
    const detail::limb_t b[3] = {1, 0, 0};
    detail::add_limbs(a, b, 3);
    EXPECT_EQ(a[0], 0u);
    EXPECT_EQ(a[1], 0u);
    EXPECT_EQ(a[2], 1u);
    EXPECT_EQ(detail::limbs_to_big({a, 3}), BigCount(1) << 128);
}

TEST(Limbs, ScaledAdd) {
    detail::limb_t dst[2] = {5, 0};
    const detail::limb_t src[2] = {~0ull, 0};
    detail::add_scaled_limbs(dst, src, 2, 3);
    EXPECT_EQ(detail::limbs_to_big({dst, 2}), BigCount(5) + BigCount(~0ull) * 3);
}

TEST(Limbs, BitsToLimbsLeavesHeadroom) {
    EXPECT_EQ(detail::limbs_for_bits(10), 1u);
    EXPECT_EQ(detail::limbs_for_bits(62), 2u);
    EXPECT_EQ(detail::limbs_for_bits(200), 4u);
}

TEST(MassArena, LayoutResetAndSwap) {
    detail::MassArena a(3, 2, 2);
    EXPECT_EQ(a.states(), 3u);
    EXPECT_EQ(a.stride(), 4u);
    a.state(2)[2] = 7;
    EXPECT_EQ(a.slot_value(2, 1), 7);
    detail::MassArena b;
    b.swap(a);
    EXPECT_EQ(b.slot_value(2, 1), 7);
    EXPECT_EQ(a.states(), 0u);
    b.reset(4, 1, 1);
    EXPECT_EQ(b.states(), 4u);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(b.slot_value(i, 0), 0);
}
