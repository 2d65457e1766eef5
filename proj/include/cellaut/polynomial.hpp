#ifndef cellaut_polynomial_hpp
#define cellaut_polynomial_hpp

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cellaut/rule.hpp"

namespace cellaut {

/*
 * Polynomial over Z/N in the window variables x0 ... x{s-1}. A monomial is a
 * sorted list of variable indices (repeats allowed); the empty monomial is
 * the constant term. Coefficients are kept reduced mod N and zero terms are
 * dropped.
 */
class Polynomial {
public:
    using Monomial = std::vector<unsigned>;

    explicit Polynomial(unsigned modulus) : modulus_(modulus) {}

    static Polynomial constant(unsigned modulus, unsigned long long value);
    static Polynomial variable(unsigned modulus, unsigned index);

    unsigned modulus() const { return modulus_; }
    const std::map<Monomial, unsigned>& terms() const { return terms_; }

    // Largest variable index plus one, or 0 for a constant.
    unsigned variable_bound() const;

    Polynomial operator+(const Polynomial& other) const;
    Polynomial operator*(const Polynomial& other) const;

    Symbol evaluate(std::span<const Symbol> cells) const;

    std::string to_string() const;

private:
    void add_term(const Monomial& m, unsigned long long coefficient);

    unsigned modulus_;
    std::map<Monomial, unsigned> terms_;
};

/*
 * Grammar (whitespace insignificant):
 *   expr   ::= term ("+" term)* ["mod" N]
 *   term   ::= factor ("*" factor)*
 *   factor ::= integer | "x" ["_"] digits | "(" expr ")"
 * A trailing "mod N" must agree with the declared alphabet size.
 */
Polynomial parse_polynomial_expr(std::string_view expr, unsigned alphabet_size);

// Tabulates the polynomial on every window of the given span. Variables must be below span.
RuleTable table_from_polynomial(const Polynomial& poly, unsigned span);

RuleTable parse_polynomial(std::string_view expr, unsigned alphabet_size, unsigned span);

} // namespace cellaut

#endif
