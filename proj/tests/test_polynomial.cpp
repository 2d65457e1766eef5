#include "doctest.h"

#include "cellaut/automata.hpp"
#include "cellaut/error.hpp"
#include "cellaut/polynomial.hpp"
#include "oracles.hpp"

using namespace cellaut;

TEST_CASE("polynomial rules") {
    CHECK(tabular_string(parse_polynomial("x0 + x1*x2", 2, 3)) == "00011110");
    CHECK(rule_number_from_table(parse_polynomial("x1", 2, 3)) == 204);
    CHECK(rule_number_from_table(parse_polynomial("x0 + x2", 2, 3)) == 90);
    CHECK(rule_number_from_table(parse_polynomial("x2", 2, 3)) == 170);
    CHECK(is_balanced(parse_polynomial("x0 + x3 + x2*x5", 2, 6)));
    CHECK(parse_polynomial("x_0 + x_1*x_2", 2, 3) == parse_polynomial("x0+x1*x2", 2, 3));
    CHECK(parse_polynomial("(x0 + x1*x2) mod 2", 2, 3) == parse_polynomial("x0 + x1*x2", 2, 3));
    CHECK(parse_polynomial("x0 + x0", 2, 2) == RuleTable(2, 2, {0, 0, 0, 0}));
    CHECK(parse_polynomial("1", 2, 1) == RuleTable(2, 1, {1, 1}));
}

TEST_CASE("polynomial evaluation matches the table") {
    Polynomial p = parse_polynomial_expr("2*x0*x1 + x2 + 1", 3);
    RuleTable t = table_from_polynomial(p, 3);
    for (std::uint64_t w = 0; w < 27; ++w) {
        Word x = oracle::word_of(w, 3, 3);
        CHECK(t[w] == (2 * x[0] * x[1] + x[2] + 1) % 3);
        CHECK(p.evaluate(x) == t[w]);
    }
    CHECK(p.variable_bound() == 3);
}

TEST_CASE("polynomial arithmetic") {
    Polynomial a = Polynomial::variable(2, 0) + Polynomial::variable(2, 1);
    Polynomial sq = a * a;
    // (x0 + x1)^2 = x0^2 + x1^2 mod 2; as functions on {0,1} this is x0 + x1
    for (std::uint64_t w = 0; w < 4; ++w) {
        Word x = oracle::word_of(w, 2, 2);
        CHECK(sq.evaluate(x) == (x[0] + x[1]) % 2);
    }
    CHECK((Polynomial::constant(5, 7) + Polynomial::constant(5, 4)).evaluate(Word{}) == 1);
}

TEST_CASE("polynomial errors") {
    try {
        parse_polynomial("x0 + x3", 2, 3);
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.position() == 5);
    }
    CHECK_THROWS_AS(parse_polynomial("x0 +", 2, 3), parse_error);
    CHECK_THROWS_AS(parse_polynomial("x0 ** x1", 2, 3), parse_error);
    CHECK_THROWS_AS(parse_polynomial("(x0 + x1", 2, 3), parse_error);
    CHECK_THROWS_AS(parse_polynomial("x0 mod 3", 2, 3), parse_error);
    CHECK_THROWS_AS(parse_polynomial("y0", 2, 3), parse_error);
}
