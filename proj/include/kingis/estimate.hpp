#pragma once

// Finite-size densities and their affine extrapolation in the boundary
// density x = (m+n)/(mn):  y_{m x n} ~ y_inf + k * x.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "kingis/bigcount.hpp"
#include "kingis/errors.hpp"
#include "kingis/grid.hpp"
#include "kingis/profile_dp.hpp"
#include "kingis/wang_engine.hpp"

namespace kingis {

enum class Observable {
    kappa,      // ln N / mn
    kappa_hat,  // ln N_hat / mn, N_hat the peak of the size distribution
    lambda,     // ln W / mn
    rho_bar,    // c_bar / mn, c_bar the interpolated peak location
};

inline std::string to_string(Observable k) {
    switch (k) {
        case Observable::kappa: return "kappa";
        case Observable::kappa_hat: return "kappa_hat";
        case Observable::lambda: return "lambda";
        case Observable::rho_bar: return "rho_bar";
    }
    return "?";
}

inline std::optional<Observable> parse_observable(const std::string& s) {
    for (auto k : {Observable::kappa, Observable::kappa_hat, Observable::lambda, Observable::rho_bar})
        if (to_string(k) == s) return k;
    return std::nullopt;
}

struct DensityRecord {
    GridShape shape;
    double x = 0.0;
    double y = 0.0;
    Observable kind = Observable::kappa;
    long area = 1;
};

inline double boundary_density(GridShape s) { return static_cast<double>(s.m + s.n) / static_cast<double>(s.area()); }

inline DensityRecord density(Observable kind, GridShape shape, const BigCount& value) {
    require_valid(shape);
    if (value <= 0) throw NonPositiveValue("density of a non-positive value for " + to_string(shape));
    const double y = kind == Observable::rho_bar ? value.convert_to<double>() / static_cast<double>(shape.area())
                                                 : log_count(value) / static_cast<double>(shape.area());
    return {shape, boundary_density(shape), y, kind, shape.area()};
}

inline DensityRecord density(Observable kind, GridShape shape, double value) {
    require_valid(shape);
    if (kind != Observable::rho_bar && !(value > 0.0))
        throw NonPositiveValue("logarithm of a non-positive value for " + to_string(shape));
    const double y = kind == Observable::rho_bar ? value / static_cast<double>(shape.area())
                                                 : std::log(value) / static_cast<double>(shape.area());
    return {shape, boundary_density(shape), y, kind, shape.area()};
}

/// Smallest c attaining the largest count.
inline int argmax_c(const CountTable& table) {
    if (table.counts.empty()) throw InsufficientData("empty count table");
    std::size_t best = 0;
    for (std::size_t c = 1; c < table.counts.size(); ++c)
        if (table.counts[c] > table.counts[best]) best = c;
    return static_cast<int>(best);
}

/// Vertex of the parabola through (c-1, y_minus), (c, y0), (c+1, y_plus).
inline double interpolate_peak(double y_minus, double y0, double y_plus, int c) {
    const double curvature = 2.0 * y0 - y_minus - y_plus;
    if (!(curvature > 0.0)) throw NotConcave("peak interpolation needs 2*y0 - y_minus - y_plus > 0");
    return c + (y_plus - y_minus) / (2.0 * curvature);
}

struct Peak {
    int c = 0;
    double c_bar = 0.0;
    BigCount n_hat;
    bool interpolated = false;
};

/// Peak of the size distribution. Falls back to c_bar = c when c = 0, when
/// c is the last entry, or when a neighbour count is zero.
inline Peak peak_of(const CountTable& table) {
    Peak p;
    p.c = argmax_c(table);
    p.c_bar = p.c;
    p.n_hat = table.at(p.c);
    const BigCount lo = table.at(p.c - 1), hi = table.at(p.c + 1);
    if (p.c >= 1 && lo > 0 && hi > 0) {
        try {
            p.c_bar = interpolate_peak(log_count(lo), log_count(p.n_hat), log_count(hi), p.c);
            p.interpolated = true;
        } catch (const NotConcave&) {
            p.c_bar = p.c;
        }
    }
    return p;
}

enum class Weighting { uniform, area, area_squared };

inline std::optional<Weighting> parse_weighting(const std::string& s) {
    if (s == "uniform") return Weighting::uniform;
    if (s == "area") return Weighting::area;
    if (s == "area_squared") return Weighting::area_squared;
    return std::nullopt;
}

struct FitResult {
    double intercept = 0.0;
    double slope = 0.0;
    double residual_max = 0.0;
    std::size_t points_used = 0;
};

/// Weighted least squares of y on x. Records are sorted by shape first so
/// the floating-point result does not depend on input order.
inline FitResult fit_affine(std::vector<DensityRecord> records, Weighting weighting = Weighting::area_squared) {
    if (records.size() < 2) throw DegenerateFit("affine fit needs at least two records");
    std::sort(records.begin(), records.end(), [](const DensityRecord& a, const DensityRecord& b) {
        return std::tie(a.shape, a.kind, a.x, a.y) < std::tie(b.shape, b.kind, b.x, b.y);
    });
    auto weight = [&](const DensityRecord& r) -> long double {
        const long double a = static_cast<long double>(r.area);
        switch (weighting) {
            case Weighting::uniform: return 1.0L;
            case Weighting::area: return a;
            case Weighting::area_squared: return a * a;
        }
        return 1.0L;
    };
    long double sw = 0, sx = 0, sy = 0;
    for (const auto& r : records) {
        const long double w = weight(r);
        sw += w;
        sx += w * r.x;
        sy += w * r.y;
    }
    const long double mx = sx / sw, my = sy / sw;
    long double sxx = 0, sxy = 0;
    for (const auto& r : records) {
        const long double w = weight(r), dx = r.x - mx;
        sxx += w * dx * dx;
        sxy += w * dx * (r.y - my);
    }
    const bool all_equal = std::all_of(records.begin(), records.end(), [&](const DensityRecord& r) { return r.x == records.front().x; });
    if (all_equal || !(sxx > 0)) throw DegenerateFit("all records share the same boundary density");
    FitResult fit;
    const long double slope = sxy / sxx;
    fit.slope = static_cast<double>(slope);
    fit.intercept = static_cast<double>(my - slope * mx);
    for (const auto& r : records)
        fit.residual_max = std::max(fit.residual_max,
                                    static_cast<double>(std::fabs(static_cast<long double>(fit.intercept) + slope * r.x - r.y)));
    fit.points_used = records.size();
    return fit;
}

// ---- datasets ---------------------------------------------------------

struct ShapeResult {
    GridShape shape;
    std::optional<BigCount> total;
    std::optional<CountTable> table;
    std::optional<BigCount> weighted;
};

using Dataset = std::vector<ShapeResult>;

enum class EngineKind { wang, profile };

/// Shapes m <= n with min_dim <= m and m + n <= max_sum.
struct DeskGrid {
    int min_dim = 10;
    int max_sum = 40;
};

struct CollectOptions {
    DeskGrid grid;
    bool totals = true;
    bool tables = true;
    bool weights = true;
    EngineKind engine = EngineKind::profile;
    int merge_width = 4;
    unsigned threads = 0;
};

/// One sweep per width yields every height of the grid at once.
inline Dataset collect_dataset(const CollectOptions& opt) {
    Dataset data;
    ContractOptions wang;
    wang.merge_width = opt.merge_width;
    wang.threads = opt.threads;
    ProfileOptions prof;
    prof.threads = opt.threads;
    const bool use_wang = opt.engine == EngineKind::wang;
    for (int m = std::max(1, opt.grid.min_dim); 2 * m <= opt.grid.max_sum; ++m) {
        const int rows = opt.grid.max_sum - m;
        std::vector<BigCount> totals, weights;
        std::vector<CountTable> tables;
        if (opt.tables) tables = use_wang ? contract_count_by_c_rows(m, rows, wang) : dp_count_by_c_rows(m, rows, prof);
        if (opt.totals) {
            if (opt.tables) {
                for (const auto& t : tables) totals.push_back(t.total());
            } else {
                totals = use_wang ? contract_count_rows(m, rows, wang) : dp_count_rows(m, rows, prof);
            }
        }
        if (opt.weights) {
            if (opt.tables) {
                for (const auto& t : tables) weights.push_back(t.weighted());
            } else {
                weights = use_wang ? contract_weighted_rows(m, rows, wang) : dp_weighted_rows(m, rows, prof);
            }
        }
        for (int n = m; n <= rows; ++n) {
            const auto i = static_cast<std::size_t>(n - 1);
            ShapeResult r{{m, n}, {}, {}, {}};
            if (opt.totals) r.total = totals[i];
            if (opt.tables) r.table = tables[i];
            if (opt.weights) r.weighted = weights[i];
            data.push_back(std::move(r));
        }
    }
    return data;
}

/// Density records of one observable for every shape with min(m,n) >= min_dim.
inline std::vector<DensityRecord> records_for(const Dataset& data, Observable kind, int min_dim) {
    std::vector<DensityRecord> out;
    for (const auto& r : data) {
        if (std::min(r.shape.m, r.shape.n) < min_dim) continue;
        switch (kind) {
            case Observable::kappa:
                if (r.total) out.push_back(density(kind, r.shape, *r.total));
                else if (r.table) out.push_back(density(kind, r.shape, r.table->total()));
                break;
            case Observable::lambda:
                if (r.weighted) out.push_back(density(kind, r.shape, *r.weighted));
                else if (r.table) out.push_back(density(kind, r.shape, r.table->weighted()));
                break;
            case Observable::kappa_hat:
                if (r.table) out.push_back(density(kind, r.shape, peak_of(*r.table).n_hat));
                break;
            case Observable::rho_bar:
                if (r.table) out.push_back(density(kind, r.shape, peak_of(*r.table).c_bar));
                break;
        }
    }
    return out;
}

struct EstimateOptions {
    int min_dim = 10;
    Weighting weighting = Weighting::area_squared;
};

/// Affine fit of one observable; the uncertainty reported alongside the
/// estimate is residual_max.
inline FitResult estimate_constants(const Dataset& data, Observable kind, const EstimateOptions& opt = {}) {
    auto records = records_for(data, kind, opt.min_dim);
    if (records.size() < 2)
        throw InsufficientData("need at least two shapes with min dimension >= " + std::to_string(opt.min_dim) +
                               " carrying data for " + to_string(kind));
    return fit_affine(std::move(records), opt.weighting);
}

// ---- exact inequalities ------------------------------------------------

/// N_hat * (floor((m+1)/2) * floor((n+1)/2) + 1) >= N.
inline bool peak_bound_holds(const CountTable& table) {
    return peak_of(table).n_hat * static_cast<unsigned>(table.c_max() + 1) >= table.total();
}

/// 4 W <= (m+1)(n+1) N, the exact form of lambda <= kappa + (ln(m+1) + ln(n+1) - 2 ln 2)/mn.
inline bool lambda_upper_bound_holds(GridShape s, const BigCount& total, const BigCount& weighted) {
    return weighted * 4u <= total * static_cast<unsigned>((s.m + 1) * (s.n + 1));
}

}  // namespace kingis
