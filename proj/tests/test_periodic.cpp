#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cellaut/error.hpp"
#include "cellaut/periodic.hpp"
#include "oracles.hpp"

using namespace cellaut;

namespace {

RuleTable eca(unsigned n) { return table_from_rule_number(n, 2, 3); }

std::vector<std::uint64_t> members(const IndexSet& set) {
    std::vector<std::uint64_t> out;
    set.for_each([&](std::uint64_t i) { out.push_back(i); });
    return out;
}

std::string temp_path(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("cellaut_test_" + name);
    std::filesystem::remove(p);
    std::filesystem::remove(p.string() + ".corrupt");
    return p.string();
}

} // namespace

TEST_CASE("successor map matches circular evolution") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 10; ++i) {
        RuleTable t = oracle::random_rule(rng, i % 2 ? 3 : 2, 2 + i % 4);
        for (unsigned k = 1; k <= 7; ++k) {
            OrbitMap a(t, k, OrbitMode::materialized);
            OrbitMap b(t, k, OrbitMode::recomputed);
            for (std::uint64_t x = 0; x < a.space().size; ++x) {
                std::uint64_t y = pack_word(oracle::step_circular(t, a.space().unpack(x)), t.alphabet_size());
                REQUIRE(a.successor(x) == y);
                REQUIRE(b.successor(x) == y);
            }
        }
    }
}

TEST_CASE("trivial periodic sets") {
    for (unsigned k = 1; k <= 12; ++k) {
        CHECK(jointly_periodic_set(eca(204), k).count() == (1u << k));
        CHECK(jointly_periodic_set(eca(170), k).count() == (1u << k));
    }
    CHECK(jointly_periodic_set(eca(0), 5).count() == 1);
}

TEST_CASE("peeling matches orbit detection") {
    for (unsigned k = 1; k <= 8; ++k) {
        for (unsigned r : {30u, 90u, 110u, 116u, 54u, 150u}) {
            CHECK(members(jointly_periodic_set(eca(r), k)) == oracle::periodic_points(eca(r), k));
        }
    }
    std::mt19937_64 rng(29);
    for (int i = 0; i < 10; ++i) {
        RuleTable t = oracle::random_rule(rng, 3, 2);
        for (unsigned k = 1; k <= 6; ++k) {
            CHECK(members(jointly_periodic_set(t, k)) == oracle::periodic_points(t, k));
        }
    }
}

TEST_CASE("worker count and orbit mode do not change the set") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 5; ++i) {
        RuleTable t = oracle::random_rule(rng, 2, 4);
        for (unsigned k : {9u, 13u}) {
            PeriodicOptions one{26, 1, OrbitMode::materialized};
            PeriodicOptions many{26, 4, OrbitMode::recomputed};
            CHECK(jointly_periodic_set(t, k, one) == jointly_periodic_set(t, k, many));
        }
    }
}

TEST_CASE("16-bit in-degree overflow falls back") {
    // constant rule: every one of the 2^17 points maps to 0...0
    IndexSet s = jointly_periodic_set(table_from_rule_number(0, 2, 3), 17);
    CHECK(s.count() == 1);
    CHECK(s.test(0));
}

TEST_CASE("periodic set is closed under rotation and the rule") {
    std::mt19937_64 rng(37);
    for (int i = 0; i < 20; ++i) {
        RuleTable t = oracle::random_rule(rng, 2, 3 + i % 3);
        const unsigned k = 10;
        IndexSet s = jointly_periodic_set(t, k);
        OrbitMap f(t, k);
        s.for_each([&](std::uint64_t x) {
            Word w = unpack_word(x, k, 2);
            REQUIRE(s.test(pack_word(shift_rotate(w, 1), 2)));
            REQUIRE(s.test(f.successor(x)));
        });
    }
}

TEST_CASE("budget") {
    CHECK_THROWS_AS(jointly_periodic_set(eca(30), 12, PeriodicOptions{10, 1, OrbitMode::recomputed}), capacity_error);
    try {
        check_budget(2, 30, 26);
        FAIL("expected capacity_error");
    } catch (const capacity_error& e) {
        CHECK(std::string(e.what()).find("2^30") != std::string::npos);
    }
}

TEST_CASE("density") {
    for (unsigned k = 1; k <= 10; ++k) {
        for (unsigned m = 1; m <= k; ++m) {
            CHECK(is_m_dense(eca(204), k, m).dense);
        }
    }
    CHECK_THROWS_AS(is_m_dense(eca(204), 4, 5), unsupported_error);

    std::mt19937_64 rng(41);
    for (int i = 0; i < 15; ++i) {
        RuleTable t = oracle::random_rule(rng, 2, 3 + i % 2);
        const unsigned k = 9;
        auto points = oracle::periodic_points(t, k);
        bool prev_dense = true;
        for (unsigned m = 1; m <= k; ++m) {
            DensityReport r = is_m_dense(t, k, m);
            auto seen = oracle::windows_of(points, 2, k, m);
            CHECK(r.dense == (seen.size() == (1u << m)));
            CHECK(r.missing.size() == (1u << m) - seen.size());
            CHECK(std::is_sorted(r.missing.begin(), r.missing.end()));
            for (auto w : r.missing) {
                CHECK(seen.count(unpack_word(w, m, 2)) == 0);
            }
            CHECK(r.periodic_count == points.size());
            // dense for m implies dense for every shorter length
            CHECK((prev_dense || !r.dense));
            prev_dense = r.dense;
        }
    }
}

TEST_CASE("v statistic") {
    CHECK(v_statistic_value(1024, 10) == 2.0);
    CHECK(v_statistic_value(1, 7) == 1.0);
    CHECK(v_statistic_value(0, 3) == 0.0);
    VStatSummary s = v_statistic(eca(90), {2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12});
    for (const auto& e : s.entries) {
        REQUIRE(e.periodic_count);
        CHECK(*e.periodic_count == oracle::periodic_points(eca(90), e.k).size());
        CHECK(e.v_k == doctest::Approx(std::pow(double(*e.periodic_count), 1.0 / e.k)));
        CHECK(e.v_k <= 2.0);
    }
    REQUIRE(s.max_v);

    VStatSummary skipped = v_statistic(eca(204), {4, 30}, PeriodicOptions{20, 1, OrbitMode::recomputed});
    REQUIRE(skipped.entries.size() == 2);
    CHECK(skipped.entries[0].v_k == 2.0);
    CHECK_FALSE(skipped.entries[1].periodic_count);
    CHECK_FALSE(skipped.entries[1].error.empty());
}

TEST_CASE("report json round trip") {
    DensityReport r = is_m_dense(eca(30), 6, 3);
    r.rule = "30";
    auto j = report_to_json(r);
    j["missing"] = r.missing;
    DensityReport back = report_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back.rule == "30");
    CHECK(back.k == 6);
    CHECK(back.m == 3);
    CHECK(back.periodic_count == r.periodic_count);
    CHECK(back.missing == r.missing);
    CHECK(back.dense == r.dense);
}

TEST_CASE("fdense ordering, empty input and checkpoint resume") {
    RuleTable t = eca(30);
    std::ostringstream diag;
    std::vector<std::pair<unsigned, unsigned>> order;
    auto collect = [&](const DensityReport& r) { order.emplace_back(r.m, r.k); };
    fdense_report(t, "30", {3}, {}, nullptr, {}, collect);
    CHECK(order.empty());

    fdense_report(t, "30", {4, 3}, {5, 3, 4}, nullptr, {}, collect);
    std::vector<std::pair<unsigned, unsigned>> want{{3, 3}, {3, 4}, {3, 5}, {4, 4}, {4, 5}};
    CHECK(order == want);

    std::string path = temp_path("resume.jsonl");
    std::vector<DensityReport> first, second;
    {
        Checkpoint cp(path, diag);
        fdense_report(t, "30", {3}, {3, 4, 5, 6}, &cp, {}, [&](const DensityReport& r) { first.push_back(r); });
    }
    {
        Checkpoint cp(path, diag);
        CHECK(cp.loaded_count() == 4);
        CHECK(cp.find("30", 2, 3, 3, 5));
        CHECK_FALSE(cp.find("30", 2, 4, 3, 5));
        fdense_report(t, "30", {3}, {3, 4, 5, 6, 7}, &cp, {}, [&](const DensityReport& r) { second.push_back(r); });
    }
    REQUIRE(second.size() == 5);
    for (std::size_t i = 0; i < first.size(); ++i) {
        CHECK(second[i].periodic_count == first[i].periodic_count);
        CHECK(second[i].missing == first[i].missing);
        CHECK(second[i].seconds == first[i].seconds);
    }
    Checkpoint final_cp(path, diag);
    CHECK(final_cp.loaded_count() == 5);
    CHECK(diag.str().empty());
}

TEST_CASE("corrupt checkpoint starts fresh") {
    std::string path = temp_path("corrupt.jsonl");
    {
        std::ofstream out(path);
        out << "{\"rule\":\"30\",\"m\":3\n";
    }
    std::ostringstream diag;
    Checkpoint cp(path, diag);
    CHECK(cp.loaded_count() == 0);
    CHECK(diag.str().find("corrupt") != std::string::npos);
    CHECK(std::filesystem::exists(path + ".corrupt"));
    CHECK_FALSE(std::filesystem::exists(path));
}
