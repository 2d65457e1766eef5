#include "doctest.h"

#include <random>

#include "cellaut/automata.hpp"
#include "cellaut/error.hpp"
#include "cellaut/surjectivity.hpp"
#include "oracles.hpp"

using namespace cellaut;

namespace {

RuleTable eca(unsigned n) { return table_from_rule_number(n, 2, 3); }

} // namespace

TEST_CASE("construction verdicts") {
    SurjectivityVerdict v = decide_surjective(eca(116));
    CHECK_FALSE(v.surjective);
    REQUIRE(v.witness);
    CHECK(format_word(*v.witness).find("010") != std::string::npos);
    CHECK(decide_surjective(eca(204)).surjective);
    CHECK(decide_surjective(eca(170)).surjective);
    CHECK(decide_surjective(eca(30)).surjective);
    CHECK_FALSE(decide_surjective(eca(0)).surjective);
}

TEST_CASE("construction witnesses have no preimage") {
    for (unsigned r = 0; r < 256; ++r) {
        SurjectivityVerdict v = decide_surjective(eca(r));
        if (v.witness) {
            CHECK_MESSAGE(oracle::preimages(eca(r), *v.witness) == 0, "rule " << r);
        }
    }
}

TEST_CASE("construction graph statuses") {
    auto nodes = construction_graph(eca(116));
    bool terminal = false;
    for (const auto& n : nodes) {
        terminal = terminal || n.status == NodeStatus::terminal;
        if (n.parent) {
            CHECK(nodes[*n.parent].level + 1 == n.level);
        }
    }
    CHECK(terminal);
    for (const auto& n : construction_graph(eca(30))) {
        CHECK(n.status != NodeStatus::terminal);
    }
    CHECK_THROWS_AS(construction_graph(eca(30), 2), capacity_error);
}

TEST_CASE("preimage counts") {
    CHECK(preimage_count(eca(116), parse_word("010", 2)) == 0);
    for (std::uint64_t i = 0; i < 64; ++i) {
        CHECK(preimage_count(eca(204), oracle::word_of(i, 6, 2)) == 4);
    }
    for (unsigned len = 1; len <= 8; ++len) {
        for (std::uint64_t i = 0; i < (1u << len); ++i) {
            Word w = oracle::word_of(i, len, 2);
            REQUIRE(preimage_count(eca(30), w) == 4);
        }
    }
    std::mt19937_64 rng(17);
    for (int i = 0; i < 40; ++i) {
        RuleTable t = oracle::random_rule(rng, i % 3 == 0 ? 3 : 2, 2 + i % 3);
        for (int j = 0; j < 5; ++j) {
            unsigned len = 1 + rng() % 5;
            Word w = oracle::word_of(rng() % oracle::ipow(t.alphabet_size(), len), len, t.alphabet_size());
            CHECK(preimage_count(t, w) == oracle::preimages(t, w));
        }
    }
    // 2^70 preimages overflow 64 bits
    Word zeros(70, 0);
    CHECK(preimage_count(table_from_rule_number(0, 2, 2), zeros) == BigInt(1) << 71);
}

TEST_CASE("shortest witness words") {
    auto w116 = find_witness_word(eca(116), 3);
    REQUIRE(w116);
    CHECK(w116->size() <= 3);
    CHECK(preimage_count(eca(116), *w116) == 0);
    CHECK_FALSE(find_witness_word(eca(30), 10));
    CHECK(format_word(*find_witness_word(eca(0), 1)) == "1");
    CHECK(format_word(*find_witness_word(eca(110), 8)) == "01010");
    CHECK(format_word(*find_witness_word(eca(76), 8)) == "111");
}

TEST_CASE("witness search is shortest and least") {
    for (unsigned r = 0; r < 256; ++r) {
        auto w = find_witness_word(eca(r), 6);
        std::optional<Word> brute;
        for (unsigned len = 1; len <= 6 && !brute; ++len) {
            for (std::uint64_t i = 0; i < (1u << len); ++i) {
                Word x = oracle::word_of(i, len, 2);
                if (oracle::preimages(eca(r), x) == 0) {
                    brute = x;
                    break;
                }
            }
        }
        CHECK_MESSAGE(w == brute, "rule " << r);
    }
}

TEST_CASE("construction agrees with the classifier on span 3") {
    for (unsigned r = 0; r < 256; ++r) {
        CHECK(decide_surjective(eca(r)).surjective == (classify(eca(r)) != CaClass::none));
    }
}
