#pragma once

// Result journal, built-in fixtures and sequence export.
//
// The journal is a JSON-lines file. Each line is one self-describing record;
// nothing is ever rewritten, and the in-memory index is rebuilt by
// replaying the file from the top.

#include <nlohmann/json.hpp>

#include <cerrno>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "kingis/bigcount.hpp"
#include "kingis/errors.hpp"
#include "kingis/grid.hpp"

namespace kingis {

enum class ResultMode { count, count_by_c, weighted };

inline std::string to_string(ResultMode m) {
    switch (m) {
        case ResultMode::count: return "count";
        case ResultMode::count_by_c: return "count_by_c";
        case ResultMode::weighted: return "weighted";
    }
    return "?";
}

inline std::optional<ResultMode> parse_result_mode(const std::string& s) {
    for (auto m : {ResultMode::count, ResultMode::count_by_c, ResultMode::weighted})
        if (to_string(m) == s) return m;
    return std::nullopt;
}

inline constexpr int kSchemaVersion = 1;

using Payload = std::variant<std::string, std::vector<std::string>>;

struct ResultRecord {
    GridShape shape;
    ResultMode mode = ResultMode::count;
    Payload payload;
    std::string engine;
    std::optional<int> merge_width;
    double elapsed = 0.0;
    int schema_version = kSchemaVersion;

    friend bool operator==(const ResultRecord&, const ResultRecord&) = default;
};

struct RecordKey {
    GridShape shape;  // canonical
    ResultMode mode = ResultMode::count;

    friend auto operator<=>(const RecordKey&, const RecordKey&) = default;
};

inline RecordKey key_of(GridShape shape, ResultMode mode) { return {canonicalize(shape), mode}; }
inline RecordKey key_of(const ResultRecord& r) { return key_of(r.shape, r.mode); }

inline ResultRecord make_record(GridShape shape, const BigCount& value, ResultMode mode, std::string engine,
                                std::optional<int> merge_width = std::nullopt, double elapsed = 0.0) {
    return {shape, mode, to_decimal(value), std::move(engine), merge_width, elapsed, kSchemaVersion};
}

inline ResultRecord make_record(const CountTable& table, std::string engine, std::optional<int> merge_width = std::nullopt,
                                double elapsed = 0.0) {
    std::vector<std::string> list;
    list.reserve(table.counts.size());
    for (const auto& v : table.counts) list.push_back(to_decimal(v));
    return {table.shape, ResultMode::count_by_c, std::move(list), std::move(engine), merge_width, elapsed, kSchemaVersion};
}

namespace detail {

inline void check_payload(const ResultRecord& r) {
    if (r.mode == ResultMode::count_by_c) {
        const auto* list = std::get_if<std::vector<std::string>>(&r.payload);
        if (!list) throw ParseError("count_by_c payload must be a list");
        for (const auto& s : *list) parse_decimal(s);
    } else {
        const auto* value = std::get_if<std::string>(&r.payload);
        if (!value) throw ParseError(to_string(r.mode) + " payload must be a single decimal string");
        parse_decimal(*value);
    }
}

}  // namespace detail

inline nlohmann::json to_json(const ResultRecord& r) {
    nlohmann::json j;
    const GridShape k = canonicalize(r.shape);
    j["key"] = to_string(k);
    j["m"] = r.shape.m;
    j["n"] = r.shape.n;
    j["mode"] = to_string(r.mode);
    std::visit([&](const auto& p) { j["payload"] = p; }, r.payload);
    j["engine"] = r.engine;
    j["merge_width"] = r.merge_width ? nlohmann::json(*r.merge_width) : nlohmann::json(nullptr);
    j["elapsed"] = r.elapsed;
    j["schema_version"] = r.schema_version;
    return j;
}

inline ResultRecord record_from_json(const nlohmann::json& j) {
    try {
        ResultRecord r;
        r.shape = {j.at("m").get<int>(), j.at("n").get<int>()};
        require_valid(r.shape);
        const auto mode = parse_result_mode(j.at("mode").get<std::string>());
        if (!mode) throw ParseError("unknown mode " + j.at("mode").dump());
        r.mode = *mode;
        const auto& p = j.at("payload");
        if (p.is_array()) r.payload = p.get<std::vector<std::string>>();
        else r.payload = p.get<std::string>();
        r.engine = j.at("engine").get<std::string>();
        if (!j.at("merge_width").is_null()) r.merge_width = j.at("merge_width").get<int>();
        r.elapsed = j.at("elapsed").get<double>();
        r.schema_version = j.at("schema_version").get<int>();
        if (r.schema_version != kSchemaVersion)
            throw ParseError("unsupported schema_version " + std::to_string(r.schema_version));
        detail::check_payload(r);
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed record: ") + e.what());
    }
}

/// Append-only store over one journal file. A missing file is an empty store.
class ResultStore {
public:
    explicit ResultStore(std::filesystem::path journal) : path_(std::move(journal)) { index_ = replay(path_); }

    const std::filesystem::path& path() const { return path_; }

    /// Appends the record. Re-storing an equal payload is allowed and makes
    /// the new record the newest; a different payload is an IntegrityError.
    void store(const ResultRecord& record) {
        detail::check_payload(record);
        const RecordKey key = key_of(record);
        if (const auto it = index_.find(key); it != index_.end() && it->second.payload != record.payload)
            throw IntegrityError("conflicting payload for " + to_string(key.shape) + " " + to_string(key.mode));
        std::ofstream out(path_, std::ios::app | std::ios::binary);
        if (!out) throw IoError("cannot open journal " + path_.string() + ": " + std::strerror(errno));
        out << to_json(record).dump() << '\n';
        out.flush();
        if (!out) throw IoError("write to journal " + path_.string() + " failed");
        index_[key] = record;
    }

    std::optional<ResultRecord> load(GridShape shape, ResultMode mode) const {
        const auto it = index_.find(key_of(shape, mode));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    const std::map<RecordKey, ResultRecord>& records() const { return index_; }

    /// Rebuilds the key -> newest record map from a journal file.
    static std::map<RecordKey, ResultRecord> replay(const std::filesystem::path& journal) {
        std::map<RecordKey, ResultRecord> index;
        std::error_code ec;
        if (!std::filesystem::exists(journal, ec)) return index;
        std::ifstream in(journal, std::ios::binary);
        if (!in) throw IoError("cannot read journal " + journal.string());
        std::string line;
        long number = 0;
        while (std::getline(in, line)) {
            ++number;
            if (line.empty()) continue;
            ResultRecord r;
            try {
                r = record_from_json(nlohmann::json::parse(line));
            } catch (const nlohmann::json::exception& e) {
                throw IntegrityError(journal.string() + ":" + std::to_string(number) + ": " + e.what());
            } catch (const ParseError& e) {
                throw IntegrityError(journal.string() + ":" + std::to_string(number) + ": " + e.what());
            }
            const RecordKey key = key_of(r);
            if (const auto it = index.find(key); it != index.end() && it->second.payload != r.payload)
                throw IntegrityError(journal.string() + ":" + std::to_string(number) + ": conflicting payload for " +
                                     to_string(key.shape) + " " + to_string(key.mode));
            index[key] = std::move(r);
        }
        if (in.bad()) throw IoError("read from journal " + journal.string() + " failed");
        return index;
    }

private:
    std::filesystem::path path_;
    std::map<RecordKey, ResultRecord> index_;
};

// ---- fixtures ----------------------------------------------------------

struct Fixture {
    GridShape shape;
    ResultMode mode = ResultMode::count;
    std::string expected;
    std::string provenance;
    /// For count_by_c fixtures: the size c whose entry is checked.
    std::optional<int> c;
};

using FixtureSet = std::vector<Fixture>;

inline const FixtureSet& builtin_fixtures() {
    static const FixtureSet set = [] {
        FixtureSet f;
        const char* n39[] = {
            "165580141",
            "733007751851",
            "502179158360159299",
            "22771944702872450167161",
            "4140603472432724183285215455",
            "361264217123294193531786810807269",
            "46171388216658592659967120655934594283",
            "4829005428999699203482047276834319460871985",
            "560823794943799981958596276541103531065285978787",
            "61653632830449131139551142952360173537910722679009015",
        };
        for (int k = 1; k <= 10; ++k)
            f.push_back({{k, 39}, ResultMode::count, n39[k - 1], "published table of N for 39 x n, n = " + std::to_string(k), {}});
        const char* w36[] = {
            "394905492",
            "1119872954208",
            "437795895219640704",
            "10488449457877727581896",
            "950690466861189052025808624",
            "40405648811419545702973459599252",
            "2446512847037847019074434950183648624",
            "119561815924055428415685514629635629063188",
            "6391107867299675456409258933225136908100573930",
            "320284968162368720355981263263997702188252565628932",
        };
        for (int k = 1; k <= 10; ++k)
            f.push_back({{k, 36}, ResultMode::weighted, w36[k - 1], "published table of W for 36 x n, n = " + std::to_string(k), {}});
        f.push_back({{3, 3}, ResultMode::count_by_c, "1", "maximum sets, both sides odd: exactly one", 4});
        f.push_back({{5, 4}, ResultMode::count_by_c, "27", "maximum sets, m odd, n even: (n/2+1)^((m+1)/2) = 3^3", 6});
        f.push_back({{3, 6}, ResultMode::count_by_c, "16", "maximum sets, m odd, n even: (n/2+1)^((m+1)/2) = 4^2", 6});
        f.push_back({{7, 2}, ResultMode::count_by_c, "16", "maximum sets, m odd, n even: (n/2+1)^((m+1)/2) = 2^4", 4});
        return f;
    }();
    return set;
}

enum class FixtureStatus { pass, fail, skipped };

inline std::string to_string(FixtureStatus s) {
    switch (s) {
        case FixtureStatus::pass: return "PASS";
        case FixtureStatus::fail: return "FAIL";
        case FixtureStatus::skipped: return "SKIPPED";
    }
    return "?";
}

struct FixtureOutcome {
    Fixture fixture;
    FixtureStatus status = FixtureStatus::skipped;
    std::optional<std::string> actual;
};

struct VerifyReport {
    std::vector<FixtureOutcome> outcomes;

    std::size_t count(FixtureStatus s) const {
        std::size_t k = 0;
        for (const auto& o : outcomes) k += o.status == s;
        return k;
    }
    bool ok() const { return count(FixtureStatus::fail) == 0; }
    int exit_status() const { return ok() ? 0 : 1; }

    std::string text() const {
        std::ostringstream out;
        for (const auto& o : outcomes) {
            out << to_string(o.status) << ' ' << to_string(o.fixture.mode) << ' ' << to_string(o.fixture.shape);
            if (o.fixture.c) out << " c=" << *o.fixture.c;
            out << " expected=" << o.fixture.expected;
            if (o.actual) out << " actual=" << *o.actual;
            out << " (" << o.fixture.provenance << ")\n";
        }
        out << "summary: " << count(FixtureStatus::pass) << " passed, " << count(FixtureStatus::fail) << " failed, "
            << count(FixtureStatus::skipped) << " skipped\n";
        return out.str();
    }
};

inline VerifyReport verify_fixtures(const ResultStore& store, const FixtureSet& fixtures = builtin_fixtures()) {
    VerifyReport report;
    for (const auto& f : fixtures) {
        FixtureOutcome o{f, FixtureStatus::skipped, std::nullopt};
        if (const auto rec = store.load(f.shape, f.mode)) {
            if (f.c) {
                const auto& list = std::get<std::vector<std::string>>(rec->payload);
                const auto c = static_cast<std::size_t>(*f.c);
                o.actual = c < list.size() ? list[c] : std::string("<missing>");
            } else {
                o.actual = std::get<std::string>(rec->payload);
            }
            o.status = *o.actual == f.expected ? FixtureStatus::pass : FixtureStatus::fail;
        }
        report.outcomes.push_back(std::move(o));
    }
    return report;
}

// ---- sequence export ---------------------------------------------------

/// Position of (m, n) when shapes are read by antidiagonals: s = m + n
/// ascending, then m ascending, starting at 1.
inline long antidiagonal_index(GridShape s) {
    require_valid(s);
    const long d = s.m + s.n;
    return (d - 2) * (d - 1) / 2 + s.m;
}

inline std::vector<GridShape> antidiagonal_shapes(int max_sum) {
    std::vector<GridShape> out;
    for (int s = 2; s <= max_sum; ++s)
        for (int m = 1; m < s; ++m) out.push_back({m, s - m});
    return out;
}

inline constexpr const char* kBfileHeader =
    "# N(m x n), independent sets of the m x n king graph; antidiagonals s = m+n ascending, "
    "m ascending within s, index from 1 at (1,1); offset relative to A245013 unverified";

/// Plain-text b-file: the header comment, then one "index value" line per
/// entry, each terminated by a single LF.
inline std::string export_bfile(const std::vector<std::pair<long, BigCount>>& values) {
    std::string out = kBfileHeader;
    out += '\n';
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0 && values[i].first <= values[i - 1].first)
            throw NonMonotoneIndex("b-file indices must strictly increase: " + std::to_string(values[i - 1].first) +
                                   " then " + std::to_string(values[i].first));
        out += std::to_string(values[i].first);
        out += ' ';
        out += to_decimal(values[i].second);
        out += '\n';
    }
    return out;
}

}  // namespace kingis
