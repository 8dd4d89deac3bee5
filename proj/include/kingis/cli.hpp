#pragma once

// Command-line front end. Everything lives in run() so the driver in tools/
// stays a one-liner and tests can call it with string streams.
//
// Exit status: 0 ok, 1 verification failure or engine disagreement,
// 2 usage error, 3 budget or resource error.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <new>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "kingis/bigcount.hpp"
#include "kingis/catalog.hpp"
#include "kingis/errors.hpp"
#include "kingis/estimate.hpp"
#include "kingis/grid.hpp"
#include "kingis/kinggraph.hpp"
#include "kingis/profile_dp.hpp"
#include "kingis/wang_engine.hpp"

namespace kingis::cli {

inline constexpr const char* kStoreEnv = "KINGIS_STORE";
inline constexpr const char* kDefaultStore = "kingis_results.jsonl";

enum Exit : int { ok = 0, verification_failed = 1, usage = 2, resource = 3 };

struct EngineMismatch : Error {
    using Error::Error;
};

inline std::string resolve_store(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv(kStoreEnv); env && *env) return env;
    return kDefaultStore;
}

/// Fixed-point text in the C locale, independent of the global locale.
inline std::string fixed(double v, int places) {
    std::ostringstream s;
    s.imbue(std::locale::classic());
    s.setf(std::ios::fixed);
    s.precision(places);
    s << v;
    return s.str();
}

inline std::string general(double v, int digits = 17) {
    std::ostringstream s;
    s.imbue(std::locale::classic());
    s.precision(digits);
    s << v;
    return s.str();
}

struct EngineFlags {
    std::string engine = "wang";
    int merge_width = 4;
    unsigned threads = 0;
    std::size_t state_cap = ContractOptions{}.state_cap;

    ContractOptions wang() const {
        ContractOptions o;
        o.merge_width = merge_width;
        o.threads = threads;
        o.state_cap = state_cap;
        return o;
    }
    ProfileOptions profile() const {
        ProfileOptions o;
        o.threads = threads;
        return o;
    }
    std::optional<int> recorded_merge_width() const {
        return engine == "profile" ? std::nullopt : std::optional<int>(merge_width);
    }
};

// Runs the wang and/or profile variant of a computation; "both" insists on
// exact agreement.
template <class T>
T with_engine(const EngineFlags& f, const std::string& what, const std::function<T()>& wang,
              const std::function<T()>& profile) {
    if (f.engine == "wang") return wang();
    if (f.engine == "profile") return profile();
    T a = wang();
    T b = profile();
    if (!(a == b)) throw EngineMismatch("engines disagree on " + what);
    return a;
}

inline BigCount compute_count(GridShape s, const EngineFlags& f) {
    return with_engine<BigCount>(
        f, "N(" + to_string(s) + ")", [&] { return contract_count(s, f.wang()); },
        [&] { return dp_count(s, f.profile()); });
}

inline BigCount compute_weighted(GridShape s, const EngineFlags& f) {
    return with_engine<BigCount>(
        f, "W(" + to_string(s) + ")", [&] { return contract_weighted(s, f.wang()); },
        [&] { return dp_weighted(s, f.profile()); });
}

inline CountTable compute_table(GridShape s, const EngineFlags& f, std::optional<int> max_c = std::nullopt) {
    return with_engine<CountTable>(
        f, "the size table of " + to_string(s),
        [&] {
            ContractOptions o = f.wang();
            o.max_c = max_c;
            return contract_count_by_c(s, o);
        },
        [&] {
            CountTable t = dp_count_by_c(s, f.profile());
            if (max_c)
                for (std::size_t c = static_cast<std::size_t>(*max_c) + 1; c < t.counts.size(); ++c) t.counts[c] = 0;
            return t;
        });
}

inline std::vector<BigCount> compute_count_rows(int width, int rows, const EngineFlags& f) {
    return with_engine<std::vector<BigCount>>(
        f, "N rows of width " + std::to_string(width), [&] { return contract_count_rows(width, rows, f.wang()); },
        [&] { return dp_count_rows(width, rows, f.profile()); });
}

inline Dataset compute_dataset(const DeskGrid& grid, const EngineFlags& f) {
    CollectOptions o;
    o.grid = grid;
    o.merge_width = f.merge_width;
    o.threads = f.threads;
    auto run = [&](EngineKind k) {
        o.engine = k;
        return collect_dataset(o);
    };
    if (f.engine == "wang") return run(EngineKind::wang);
    if (f.engine == "profile") return run(EngineKind::profile);
    Dataset a = run(EngineKind::wang), b = run(EngineKind::profile);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].total != b[i].total || a[i].table != b[i].table || a[i].weighted != b[i].weighted)
            throw EngineMismatch("engines disagree on " + to_string(a[i].shape));
    return a;
}

class Runner {
public:
    Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

    int run(int argc, const char* const* argv) {
        CLI::App app{"Exact counting of independent sets on king graphs", "kingis"};
        app.require_subcommand(1);
        app.set_help_all_flag("--help-all", "Expand all help");

        // count / weighted / constrained
        auto* count = app.add_subcommand("count", "N(m x n), the number of independent sets");
        add_shape(count);
        add_engine(count);
        add_format(count, "text");
        add_store(count, true);

        auto* weighted = app.add_subcommand("weighted", "W(m,n), the total size of all independent sets");
        add_shape(weighted);
        add_engine(weighted);
        add_format(weighted, "text");
        add_store(weighted, true);

        auto* constrained = app.add_subcommand("constrained", "N(m x n, c) for every size c");
        add_shape(constrained);
        add_engine(constrained);
        add_format(constrained, "csv");
        add_store(constrained, true);
        constrained->add_option("--max-c", max_c_, "Track sizes up to this value only; larger sizes print as 0")
            ->check(CLI::NonNegativeNumber);

        auto* table = app.add_subcommand("table", "CSV of N and kappa for m <= M, m + n <= S");
        table->add_option("--max-m", max_m_, "Largest width M")->required()->check(CLI::PositiveNumber);
        table->add_option("--max-sum", max_sum_, "Largest m + n")->required()->check(CLI::Range(2, 1 << 20));
        add_engine(table);
        add_format(table, "csv");

        auto* estimate = app.add_subcommand("estimate", "Fit y = y_inf + k (m+n)/(mn) to finite-size densities");
        estimate->add_option("--kind", kind_, "kappa, kappa_hat, lambda, rho_bar or all")
            ->check(CLI::IsMember({"all", "kappa", "kappa_hat", "lambda", "rho_bar"}));
        estimate->add_option("--min-dim", min_dim_, "Smallest side length used in the fit")->check(CLI::PositiveNumber);
        estimate->add_option("--max-sum", max_sum_est_, "Largest m + n computed");
        estimate->add_option("--weighting", weighting_, "uniform, area or area_squared")
            ->check(CLI::IsMember({"uniform", "area", "area_squared"}));
        estimate->add_option("--input", input_, "Read m,n,N rows (m <= n are used) from a table CSV instead of computing; kappa only");
        add_engine(estimate);
        add_format(estimate, "text");

        auto* verify = app.add_subcommand("verify", "Check stored results against the built-in fixtures");
        verify->add_flag("--compute", compute_, "Compute every fixture and record it before checking");
        add_engine(verify);
        add_store(verify, false);

        auto* exportc = app.add_subcommand("export", "b-file of N over antidiagonals m + n <= S");
        exportc->add_option("--max-sum", max_sum_, "Largest m + n")->required()->check(CLI::Range(2, 1 << 20));
        exportc->add_option("--output", output_, "Write to this file instead of standard output");
        add_engine(exportc);

        auto* oracle = app.add_subcommand("oracle", "Brute-force N, W, size table and tile packings; compare with engines");
        add_shape(oracle);
        oracle->add_option("--merge-width", eng_.merge_width, "Merged tile width for the Wang engine")
            ->check(CLI::Range(1, kMaxMergeWidth));
        oracle->add_option("--threads", eng_.threads, "Worker threads; 0 uses every core");

        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e, out_, err_);
            return code == 0 ? Exit::ok : Exit::usage;
        }

        try {
            if (*count) return do_scalar(ResultMode::count);
            if (*weighted) return do_scalar(ResultMode::weighted);
            if (*constrained) return do_constrained();
            if (*table) return do_table();
            if (*estimate) return do_estimate();
            if (*verify) return do_verify();
            if (*exportc) return do_export();
            if (*oracle) return do_oracle();
        } catch (const EngineMismatch& e) {
            err_ << "error: " << e.what() << '\n';
            return Exit::verification_failed;
        } catch (const IntegrityError& e) {
            err_ << "error: " << e.what() << '\n';
            return Exit::verification_failed;
        } catch (const ResourceError& e) {
            err_ << "error: " << e.what() << '\n';
            return Exit::resource;
        } catch (const IoError& e) {
            err_ << "error: " << e.what() << '\n';
            return Exit::resource;
        } catch (const DomainError& e) {
            err_ << "error: " << e.what() << '\n';
            return Exit::usage;
        } catch (const std::bad_alloc&) {
            err_ << "error: out of memory\n";
            return Exit::resource;
        }
        return Exit::usage;
    }

private:
    void add_shape(CLI::App* sub) {
        sub->add_option("--m", m_, "Width m")->required()->check(CLI::PositiveNumber);
        sub->add_option("--n", n_, "Height n")->required()->check(CLI::PositiveNumber);
    }
    void add_engine(CLI::App* sub) {
        sub->add_option("--engine", eng_.engine, "wang, profile or both (both must agree)")
            ->check(CLI::IsMember({"wang", "profile", "both"}));
        sub->add_option("--merge-width", eng_.merge_width, "Merged tile width for the Wang engine")
            ->check(CLI::Range(1, kMaxMergeWidth));
        sub->add_option("--threads", eng_.threads, "Worker threads; 0 uses every core");
        sub->add_option("--state-cap", eng_.state_cap, "Wang frontier budget in state slots");
    }
    void add_format(CLI::App* sub, const std::string& fallback) {
        sub->add_option("--format", format_, "text, csv or records")
            ->check(CLI::IsMember({"text", "csv", "records"}))
            ->default_str(fallback);
        format_fallback_[sub->get_name()] = fallback;
    }
    void add_store(CLI::App* sub, bool recordable) {
        sub->add_option("--store", store_, std::string("Journal path (default $") + kStoreEnv + " or " + kDefaultStore + ")");
        if (recordable) sub->add_flag("--record", record_, "Append the result to the journal");
    }
    std::string format(const std::string& verb) const {
        return format_.empty() ? format_fallback_.at(verb) : format_;
    }

    double seconds_since(std::chrono::steady_clock::time_point t0) const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    // Records on standard output carry elapsed = 0 so the output stays
    // byte-identical between runs; the journal keeps the measured time.
    void emit_record(ResultRecord r) {
        r.elapsed = 0.0;
        out_ << to_json(r).dump() << '\n';
    }

    void maybe_record(const ResultRecord& r) {
        if (!record_) return;
        ResultStore store(resolve_store(store_));
        store.store(r);
    }

    int do_scalar(ResultMode mode) {
        const GridShape s{m_, n_};
        const auto t0 = std::chrono::steady_clock::now();
        const BigCount v = mode == ResultMode::count ? compute_count(s, eng_) : compute_weighted(s, eng_);
        const ResultRecord rec = make_record(s, v, mode, eng_.engine, eng_.recorded_merge_width(), seconds_since(t0));
        maybe_record(rec);
        const std::string fmt = format(mode == ResultMode::count ? "count" : "weighted");
        if (fmt == "text") out_ << to_decimal(v) << '\n';
        else if (fmt == "csv") out_ << "m,n," << (mode == ResultMode::count ? "N" : "W") << '\n' << s.m << ',' << s.n << ',' << to_decimal(v) << '\n';
        else emit_record(rec);
        return Exit::ok;
    }

    int do_constrained() {
        const GridShape s{m_, n_};
        const auto t0 = std::chrono::steady_clock::now();
        const CountTable t = compute_table(s, eng_, max_c_);
        const ResultRecord rec = make_record(t, eng_.engine, eng_.recorded_merge_width(), seconds_since(t0));
        if (!max_c_) maybe_record(rec);
        const std::string fmt = format("constrained");
        if (fmt == "records") {
            emit_record(rec);
        } else {
            const char sep = fmt == "csv" ? ',' : ' ';
            out_ << 'c' << sep << "count" << '\n';
            for (std::size_t c = 0; c < t.counts.size(); ++c) out_ << c << sep << to_decimal(t.counts[c]) << '\n';
        }
        return Exit::ok;
    }

    int do_table() {
        const std::string fmt = format("table");
        if (fmt != "records") out_ << "m,n,N,kappa\n";
        bool marked = false;
        for (int m = 1; m <= max_m_ && m < max_sum_; ++m) {
            const int rows = max_sum_ - m;
            std::vector<BigCount> values;
            std::string failure;
            try {
                values = compute_count_rows(m, rows, eng_);
            } catch (const BudgetExceeded& e) {
                failure = "BUDGET_EXCEEDED";
                err_ << "width " << m << ": " << e.what() << '\n';
            } catch (const WidthOutOfRange& e) {
                failure = "WIDTH_OUT_OF_RANGE";
                err_ << "width " << m << ": " << e.what() << '\n';
            }
            for (int n = 1; n <= rows; ++n) {
                const GridShape s{m, n};
                if (!failure.empty()) {
                    marked = true;
                    if (fmt == "records") out_ << nlohmann::json{{"m", m}, {"n", n}, {"status", failure}}.dump() << '\n';
                    else out_ << m << ',' << n << ',' << failure << ",\n";
                    continue;
                }
                const BigCount& v = values[static_cast<std::size_t>(n - 1)];
                if (fmt == "records") emit_record(make_record(s, v, ResultMode::count, eng_.engine, eng_.recorded_merge_width()));
                else out_ << m << ',' << n << ',' << to_decimal(v) << ',' << fixed(log_count(v) / static_cast<double>(s.area()), 12) << '\n';
            }
        }
        return marked ? Exit::resource : Exit::ok;
    }

    Dataset dataset_from_csv(const std::string& path) const {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot read " + path);
        Dataset data;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line.rfind("m,", 0) == 0) continue;
            std::vector<std::string> cells;
            std::stringstream ss(line);
            for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
            if (cells.size() < 3) throw ParseError("table row needs m,n,N: " + line);
            if (cells[2] == "BUDGET_EXCEEDED" || cells[2] == "WIDTH_OUT_OF_RANGE") continue;
            ShapeResult r;
            r.shape = {std::stoi(cells[0]), std::stoi(cells[1])};
            require_valid(r.shape);
            // The fit grid is m <= n; transposed rows would count twice.
            if (r.shape.m > r.shape.n) continue;
            r.total = parse_decimal(cells[2]);
            data.push_back(std::move(r));
        }
        return data;
    }

    int do_estimate() {
        const auto weighting = parse_weighting(weighting_);
        Dataset data = input_.empty() ? compute_dataset({min_dim_, max_sum_est_}, eng_) : dataset_from_csv(input_);
        std::vector<Observable> kinds;
        if (kind_ == "all") kinds = {Observable::kappa, Observable::kappa_hat, Observable::lambda, Observable::rho_bar};
        else kinds = {*parse_observable(kind_)};
        if (!input_.empty() && kind_ == "all") kinds = {Observable::kappa};
        const std::string fmt = format("estimate");
        if (fmt == "csv") out_ << "kind,intercept,slope,exp_intercept,residual_max,points\n";
        for (const auto k : kinds) {
            const FitResult f = estimate_constants(data, k, {min_dim_, *weighting});
            const double e = std::exp(f.intercept);
            if (fmt == "csv") {
                out_ << to_string(k) << ',' << general(f.intercept) << ',' << general(f.slope) << ',' << general(e) << ','
                     << general(f.residual_max) << ',' << f.points_used << '\n';
            } else if (fmt == "records") {
                nlohmann::json j{{"kind", to_string(k)},
                                 {"intercept", f.intercept},
                                 {"slope", f.slope},
                                 {"exp_intercept", e},
                                 {"residual_max", f.residual_max},
                                 {"points", f.points_used},
                                 {"weighting", weighting_},
                                 {"min_dim", min_dim_}};
                out_ << j.dump() << '\n';
            } else {
                out_ << to_string(k) << ": intercept " << fixed(f.intercept, 10) << "  slope " << fixed(f.slope, 6);
                if (k != Observable::rho_bar) out_ << "  exp(intercept) " << fixed(e, 9);
                out_ << "  max residual " << general(f.residual_max, 3) << "  shapes " << f.points_used << '\n';
            }
        }
        return Exit::ok;
    }

    int do_verify() {
        ResultStore store(resolve_store(store_));
        if (compute_) {
            for (const auto& fx : builtin_fixtures()) {
                if (store.load(fx.shape, fx.mode)) continue;
                const auto t0 = std::chrono::steady_clock::now();
                ResultRecord rec;
                if (fx.mode == ResultMode::count_by_c) rec = make_record(compute_table(fx.shape, eng_), eng_.engine, eng_.recorded_merge_width());
                else if (fx.mode == ResultMode::count) rec = make_record(fx.shape, compute_count(fx.shape, eng_), fx.mode, eng_.engine, eng_.recorded_merge_width());
                else rec = make_record(fx.shape, compute_weighted(fx.shape, eng_), fx.mode, eng_.engine, eng_.recorded_merge_width());
                rec.elapsed = seconds_since(t0);
                store.store(rec);
            }
        }
        const VerifyReport report = verify_fixtures(store);
        out_ << report.text();
        return report.ok() ? Exit::ok : Exit::verification_failed;
    }

    int do_export() {
        std::map<GridShape, BigCount> values;
        for (int w = 1; 2 * w <= max_sum_; ++w) {
            const auto rows = compute_count_rows(w, max_sum_ - w, eng_);
            for (int n = w; n <= max_sum_ - w; ++n) values[{w, n}] = rows[static_cast<std::size_t>(n - 1)];
        }
        std::vector<std::pair<long, BigCount>> seq;
        for (const auto s : antidiagonal_shapes(max_sum_)) seq.emplace_back(antidiagonal_index(s), values.at(canonicalize(s)));
        const std::string text = export_bfile(seq);
        if (output_.empty()) {
            out_ << text;
        } else {
            std::ofstream f(output_, std::ios::binary | std::ios::trunc);
            if (!f) throw IoError("cannot open " + output_);
            f << text;
            if (!f.flush()) throw IoError("write to " + output_ + " failed");
        }
        return Exit::ok;
    }

    int do_oracle() {
        const GridShape s{m_, n_};
        const CountTable table = brute_force_count_table(s);
        const BigCount total = table.total();
        const BigCount weight = brute_force_weighted(s);
        out_ << "N " << to_decimal(total) << '\n' << "W " << to_decimal(weight) << '\n' << "counts";
        for (const auto& v : table.counts) out_ << ' ' << to_decimal(v);
        out_ << '\n';
        bool agree = true;
        if (static_cast<long>(s.m + 1) * (s.n + 1) <= kBruteForceMaxCells) {
            const BigCount packings = brute_force_tile_packings(s);
            out_ << "packings " << to_decimal(packings) << '\n';
            agree = agree && packings == total;
        }
        EngineFlags both = eng_;
        both.engine = "both";
        try {
            agree = agree && compute_table(s, both) == table && compute_weighted(s, both) == weight &&
                    compute_count(s, both) == total;
        } catch (const EngineMismatch& e) {
            err_ << e.what() << '\n';
            agree = false;
        }
        out_ << "engines " << (agree ? "agree" : "DISAGREE") << '\n';
        return agree ? Exit::ok : Exit::verification_failed;
    }

    std::ostream& out_;
    std::ostream& err_;
    EngineFlags eng_;
    int m_ = 0, n_ = 0;
    std::optional<int> max_c_;
    int max_m_ = 0, max_sum_ = 0;
    std::string format_;
    std::map<std::string, std::string> format_fallback_;
    std::string store_;
    bool record_ = false;
    std::string kind_ = "all";
    int min_dim_ = 10;
    int max_sum_est_ = 40;
    std::string weighting_ = "area_squared";
    std::string input_;
    bool compute_ = false;
    std::string output_;
};

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    return Runner(out, err).run(argc, argv);
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"kingis"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace kingis::cli
