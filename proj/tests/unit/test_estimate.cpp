#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "kingis/estimate.hpp"
#include "kingis/kinggraph.hpp"

using namespace kingis;

namespace {
CountTable table_of(GridShape s, std::initializer_list<int> v) {
    CountTable t;
    t.shape = s;
    t.counts.assign(v.begin(), v.end());
    return t;
}
}  // namespace

TEST(Density, Examples) {
    const auto k11 = density(Observable::kappa, {1, 1}, BigCount(2));
    EXPECT_NEAR(k11.y, 0.693147180559945, 1e-14);
    EXPECT_DOUBLE_EQ(k11.x, 2.0);
    EXPECT_EQ(k11.area, 1);
    const auto k139 = density(Observable::kappa, {1, 39}, BigCount(165580141));
    EXPECT_NEAR(k139.y, std::log(165580141.0) / 39.0, 1e-15);
    const auto l12 = density(Observable::lambda, {1, 2}, BigCount(2));
    EXPECT_NEAR(l12.y, std::log(2.0) / 2.0, 1e-15);
    const auto r = density(Observable::rho_bar, {4, 5}, 3.0);
    EXPECT_DOUBLE_EQ(r.y, 0.15);
}

TEST(Density, RejectsNonPositive) {
    EXPECT_THROW(density(Observable::kappa, {2, 2}, BigCount(0)), NonPositiveValue);
    EXPECT_THROW(density(Observable::lambda, {2, 2}, -1.0), NonPositiveValue);
}

TEST(Argmax, TieTakesTheSmallerSize) {
    EXPECT_EQ(argmax_c(table_of({1, 1}, {1, 1})), 0);
    EXPECT_EQ(argmax_c(table_of({2, 2}, {1, 4})), 1);
    EXPECT_EQ(argmax_c(table_of({1, 3}, {1, 3, 3})), 1);
    EXPECT_EQ(argmax_c(dp_count_by_c({10, 10})), 16);
    EXPECT_EQ(argmax_c(dp_count_by_c({5, 5})), 4);
}

TEST(Interpolate, Examples) {
    EXPECT_DOUBLE_EQ(interpolate_peak(0, 1, 0, 5), 5.0);
    EXPECT_NEAR(interpolate_peak(0, 2, 1, 5), 5.0 + 1.0 / 6.0, 1e-15);
    EXPECT_THROW(interpolate_peak(1, 1, 1, 5), NotConcave);
    EXPECT_THROW(interpolate_peak(0, -1, 0, 5), NotConcave);
}

TEST(Peak, TenByTenRoundsBack) {
    const Peak p = peak_of(dp_count_by_c({10, 10}));
    EXPECT_EQ(p.c, 16);
    EXPECT_TRUE(p.interpolated);
    EXPECT_EQ(static_cast<int>(std::floor(p.c_bar + 0.5)), 16);
    EXPECT_NEAR(p.c_bar, 15.737682839358319, 1e-12);
    EXPECT_EQ(p.n_hat, BigCount(18440809729503ull));
}

TEST(Peak, FallsBackAtTheEdges) {
    const Peak a = peak_of(table_of({1, 1}, {1, 1}));
    EXPECT_EQ(a.c, 0);
    EXPECT_DOUBLE_EQ(a.c_bar, 0.0);
    EXPECT_FALSE(a.interpolated);
    const Peak b = peak_of(table_of({2, 2}, {1, 4}));  // c is the last entry
    EXPECT_DOUBLE_EQ(b.c_bar, 1.0);
    EXPECT_FALSE(b.interpolated);
    const Peak c = peak_of(table_of({3, 3}, {1, 9, 0, 0, 0}));  // zero neighbour
    EXPECT_EQ(c.c, 1);
    EXPECT_DOUBLE_EQ(c.c_bar, 1.0);
    EXPECT_FALSE(c.interpolated);
}

TEST(Peak, TieSitsHalfwayAndBreaksRounding) {
    // Equal counts at c and c+1: the parabola's vertex is c + 1/2, which
    // rounds up although the tie rule picks c.
    const Peak p = peak_of(table_of({3, 3}, {1, 9, 9, 3, 0}));
    EXPECT_EQ(p.c, 1);
    EXPECT_NEAR(p.c_bar, 1.5, 1e-15);
    EXPECT_EQ(argmax_c(dp_count_by_c({1, 19})), 5);
    EXPECT_NEAR(peak_of(dp_count_by_c({1, 19})).c_bar, 5.5, 1e-12);
}

TEST(Fit, RecoversExactAffineData) {
    std::vector<DensityRecord> recs;
    for (int m = 5; m <= 12; ++m)
        for (int n = m; n <= 12; ++n) {
            const GridShape s{m, n};
            const double x = boundary_density(s);
            recs.push_back({s, x, 0.3 + 0.1 * x, Observable::kappa, s.area()});
        }
    for (auto w : {Weighting::uniform, Weighting::area, Weighting::area_squared}) {
        const FitResult f = fit_affine(recs, w);
        EXPECT_NEAR(f.intercept, 0.3, 1e-12);
        EXPECT_NEAR(f.slope, 0.1, 1e-12);
        EXPECT_LE(f.residual_max, 1e-12);
        EXPECT_EQ(f.points_used, recs.size());
    }
}

TEST(Fit, InvariantUnderReordering) {
    std::vector<DensityRecord> recs;
    for (int m = 3; m <= 15; ++m)
        for (int n = m; n <= 20; ++n) {
            const GridShape s{m, n};
            const double x = boundary_density(s);
            recs.push_back({s, x, 0.29 + 0.13 * x + 0.01 * std::sin(m * n), Observable::kappa, s.area()});
        }
    const FitResult ref = fit_affine(recs);
    std::mt19937 rng(7);
    for (int k = 0; k < 5; ++k) {
        std::shuffle(recs.begin(), recs.end(), rng);
        const FitResult f = fit_affine(recs);
        EXPECT_EQ(f.intercept, ref.intercept);
        EXPECT_EQ(f.slope, ref.slope);
        EXPECT_EQ(f.residual_max, ref.residual_max);
    }
}

TEST(Fit, Degenerate) {
    const GridShape s{4, 4};
    const DensityRecord r{s, boundary_density(s), 0.3, Observable::kappa, s.area()};
    EXPECT_THROW(fit_affine({r}), DegenerateFit);
    EXPECT_THROW(fit_affine({r, r, r}), DegenerateFit);
}

TEST(Weighting, Parse) {
    EXPECT_EQ(parse_weighting("area_squared"), Weighting::area_squared);
    EXPECT_EQ(parse_weighting("uniform"), Weighting::uniform);
    EXPECT_FALSE(parse_weighting("cubic").has_value());
    EXPECT_EQ(parse_observable("rho_bar"), Observable::rho_bar);
    EXPECT_FALSE(parse_observable("mu").has_value());
}

TEST(Dataset, SmallGridEnginesAgree) {
    CollectOptions opt;
    opt.grid = {4, 14};
    opt.engine = EngineKind::profile;
    const Dataset a = collect_dataset(opt);
    opt.engine = EngineKind::wang;
    const Dataset b = collect_dataset(opt);
    ASSERT_EQ(a.size(), b.size());
    // widths 4..7, heights m..14-m
    EXPECT_EQ(a.size(), 7u + 5u + 3u + 1u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].shape, b[i].shape);
        EXPECT_EQ(a[i].table, b[i].table);
        EXPECT_EQ(a[i].total, a[i].table->total());
        EXPECT_EQ(a[i].weighted, a[i].table->weighted());
        EXPECT_EQ(*a[i].weighted, b[i].weighted.value());
    }
}

TEST(Dataset, EstimateNeedsData) {
    CollectOptions opt;
    opt.grid = {3, 8};
    opt.tables = false;
    opt.weights = false;
    const Dataset d = collect_dataset(opt);
    EXPECT_NO_THROW(estimate_constants(d, Observable::kappa, {3, Weighting::area_squared}));
    EXPECT_THROW(estimate_constants(d, Observable::rho_bar, {3, Weighting::area_squared}), InsufficientData);
    EXPECT_THROW(estimate_constants(d, Observable::kappa, {10, Weighting::area_squared}), InsufficientData);
}

TEST(Inequalities, PeakBoundAndLambdaBound) {
    for (int m = 1; m <= 8; ++m)
        for (const auto& t : dp_count_by_c_rows(m, 10)) {
            EXPECT_TRUE(peak_bound_holds(t)) << to_string(t.shape);
            EXPECT_TRUE(lambda_upper_bound_holds(t.shape, t.total(), t.weighted())) << to_string(t.shape);
        }
}

TEST(Inequalities, LambdaAtLeastKappa) {
    for (int m = 1; m <= 8; ++m)
        for (const auto& t : dp_count_by_c_rows(m, 10)) {
            if (m < 3 && t.shape.n < 3) continue;
            const double kappa = density(Observable::kappa, t.shape, t.total()).y;
            const double lambda = density(Observable::lambda, t.shape, t.weighted()).y;
            EXPECT_GE(lambda, kappa) << to_string(t.shape);
        }
}

TEST(Frozen, OracleValues) {
    // Produced by the brute-force oracle and checked against the engines.
    const CountTable t = brute_force_count_table({4, 4});
    EXPECT_EQ(t.counts, (std::vector<BigCount>{1, 16, 78, 140, 79}));
    EXPECT_EQ(brute_force_weighted({4, 4}), 908);
    EXPECT_EQ(dp_count({4, 4}), 314);
    EXPECT_EQ(brute_force_count_table({6, 6}).total(), 202841);
    EXPECT_EQ(brute_force_weighted({6, 6}), 1232872);
    EXPECT_EQ(brute_force_tile_packings({3, 3}), 35);
    EXPECT_NEAR(peak_of(dp_count_by_c({5, 5})).c_bar, 4.4910063891905718, 1e-12);
}
