#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "kingis/catalog.hpp"
#include "kingis/profile_dp.hpp"
#include "temp_dir.hpp"

using namespace kingis;

using Catalog = TempDir;

namespace {
std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}
}  // namespace

TEST_F(Catalog, StoreThenLoad) {
    ResultStore store(file("j.jsonl"));
    store.store(make_record({2, 39}, BigCount(733007751851), ResultMode::count, "wang", 4, 0.25));
    const auto r = store.load({2, 39}, ResultMode::count);
    ASSERT_TRUE(r);
    EXPECT_EQ(std::get<std::string>(r->payload), "733007751851");
    // The key is canonical, so the transpose finds the same record.
    EXPECT_TRUE(store.load({39, 2}, ResultMode::count));
    EXPECT_FALSE(store.load({2, 39}, ResultMode::weighted));
}

TEST_F(Catalog, AbsentKey) {
    ResultStore store(file("none.jsonl"));
    EXPECT_FALSE(store.load({3, 3}, ResultMode::count));
    EXPECT_TRUE(store.records().empty());
}

TEST_F(Catalog, ConflictingDuplicate) {
    ResultStore store(file("j.jsonl"));
    store.store(make_record({2, 2}, BigCount(5), ResultMode::count, "wang"));
    EXPECT_NO_THROW(store.store(make_record({2, 2}, BigCount(5), ResultMode::count, "profile")));
    EXPECT_EQ(store.load({2, 2}, ResultMode::count)->engine, "profile");  // newest wins
    EXPECT_THROW(store.store(make_record({2, 2}, BigCount(6), ResultMode::count, "wang")), IntegrityError);
}

TEST_F(Catalog, RoundTripEveryField) {
    const auto path = file("j.jsonl");
    ResultRecord a = make_record({5, 36}, dp_weighted({5, 36}), ResultMode::weighted, "profile", std::nullopt, 0.123456789012345);
    ResultRecord b = make_record(dp_count_by_c({4, 3}), "wang", 3, 1e-6);
    {
        ResultStore store(path);
        store.store(a);
        store.store(b);
    }
    ResultStore reopened(path);
    EXPECT_EQ(*reopened.load({5, 36}, ResultMode::weighted), a);
    EXPECT_EQ(*reopened.load({4, 3}, ResultMode::count_by_c), b);
    EXPECT_EQ(reopened.load({4, 3}, ResultMode::count_by_c)->shape, GridShape(4, 3));
}

TEST_F(Catalog, ReplayRebuildsTheSameMap) {
    const auto path = file("j.jsonl");
    ResultStore store(path);
    for (int m = 1; m <= 4; ++m)
        for (int n = 1; n <= 4; ++n) store.store(make_record({m, n}, dp_count({m, n}), ResultMode::count, "profile"));
    const auto replayed = ResultStore::replay(path);
    ASSERT_EQ(replayed.size(), store.records().size());
    for (const auto& [key, rec] : store.records()) EXPECT_EQ(replayed.at(key).payload, rec.payload);
}

TEST_F(Catalog, RejectsBadPayloads) {
    ResultStore store(file("j.jsonl"));
    ResultRecord r = make_record({1, 1}, BigCount(2), ResultMode::count, "wang");
    r.payload = std::string("02");
    EXPECT_THROW(store.store(r), ParseError);
    r.payload = std::vector<std::string>{"1", "1"};
    EXPECT_THROW(store.store(r), ParseError);
}

TEST_F(Catalog, CorruptJournal) {
    const auto path = file("j.jsonl");
    std::ofstream(path) << "{not json\n";
    EXPECT_THROW(ResultStore{path}, IntegrityError);
    std::ofstream(path, std::ios::trunc)
        << to_json(make_record({2, 2}, BigCount(5), ResultMode::count, "wang")).dump() << '\n'
        << to_json(make_record({2, 2}, BigCount(7), ResultMode::count, "wang")).dump() << '\n';
    EXPECT_THROW(ResultStore{path}, IntegrityError);
}

TEST_F(Catalog, UnwritablePath) {
    ResultStore store(dir_ / "missing-dir" / "j.jsonl");
    EXPECT_THROW(store.store(make_record({1, 1}, BigCount(2), ResultMode::count, "wang")), IoError);
}

TEST_F(Catalog, JournalIsOneJsonObjectPerLine) {
    const auto path = file("j.jsonl");
    ResultStore store(path);
    store.store(make_record({1, 1}, BigCount(2), ResultMode::count, "wang", 4));
    const auto j = nlohmann::json::parse(slurp(path));
    EXPECT_EQ(j.at("key"), "1x1");
    EXPECT_EQ(j.at("mode"), "count");
    EXPECT_EQ(j.at("payload"), "2");
    EXPECT_EQ(j.at("engine"), "wang");
    EXPECT_EQ(j.at("merge_width"), 4);
    EXPECT_EQ(j.at("schema_version"), 1);
    EXPECT_TRUE(j.contains("elapsed"));
}

TEST_F(Catalog, VerifyEmptyStoreSkipsEverything) {
    ResultStore store(file("j.jsonl"));
    const VerifyReport r = verify_fixtures(store);
    EXPECT_EQ(r.count(FixtureStatus::skipped), builtin_fixtures().size());
    EXPECT_TRUE(r.ok());
}

TEST_F(Catalog, VerifyPassAndFail) {
    ResultStore store(file("j.jsonl"));
    store.store(make_record({1, 39}, BigCount(165580141), ResultMode::count, "profile"));
    store.store(make_record({2, 39}, BigCount(733007751852), ResultMode::count, "profile"));
    const VerifyReport r = verify_fixtures(store);
    EXPECT_EQ(r.count(FixtureStatus::pass), 1u);
    EXPECT_EQ(r.count(FixtureStatus::fail), 1u);
    EXPECT_FALSE(r.ok());
    EXPECT_EQ(r.exit_status(), 1);
    EXPECT_NE(r.text().find("PASS count 1x39"), std::string::npos);
    EXPECT_NE(r.text().find("FAIL count 2x39 expected=733007751851 actual=733007751852"), std::string::npos);
}

TEST_F(Catalog, VerifySizeResolvedFixture) {
    ResultStore store(file("j.jsonl"));
    store.store(make_record(dp_count_by_c({4, 5}), "profile"));
    const VerifyReport r = verify_fixtures(store);
    EXPECT_NE(r.text().find("PASS count_by_c 5x4 c=6 expected=27 actual=27"), std::string::npos);
}

TEST(Fixtures, Provenance) {
    const auto& f = builtin_fixtures();
    EXPECT_EQ(f.size(), 24u);
    for (const auto& x : f) {
        EXPECT_FALSE(x.provenance.empty());
        EXPECT_NO_THROW(parse_decimal(x.expected));
    }
}

TEST(Bfile, SingleEntry) {
    const std::string text = export_bfile({{1, BigCount(2)}});
    EXPECT_EQ(text, std::string(kBfileHeader) + "\n1 2\n");
}

TEST(Bfile, ThreeEntriesInOrder) {
    const std::string text = export_bfile({{1, 2}, {2, 3}, {3, 3}});
    EXPECT_EQ(text.substr(text.find('\n') + 1), "1 2\n2 3\n3 3\n");
    EXPECT_EQ(text, export_bfile({{1, 2}, {2, 3}, {3, 3}}));
    EXPECT_EQ(text.find(" \n"), std::string::npos);
}

TEST(Bfile, NonMonotone) {
    EXPECT_THROW(export_bfile({{2, 1}, {1, 1}}), NonMonotoneIndex);
    EXPECT_THROW(export_bfile({{1, 1}, {1, 1}}), NonMonotoneIndex);
}

TEST(Bfile, AntidiagonalOrder) {
    const auto shapes = antidiagonal_shapes(4);
    const std::vector<GridShape> expect{{1, 1}, {1, 2}, {2, 1}, {1, 3}, {2, 2}, {3, 1}};
    EXPECT_EQ(shapes, expect);
    for (std::size_t i = 0; i < shapes.size(); ++i) EXPECT_EQ(antidiagonal_index(shapes[i]), static_cast<long>(i + 1));
}
