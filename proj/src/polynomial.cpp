#include "cellaut/polynomial.hpp"

#include <algorithm>
#include <cctype>

#include "cellaut/error.hpp"

namespace cellaut {

Polynomial Polynomial::constant(unsigned modulus, unsigned long long value) {
    Polynomial p(modulus);
    p.add_term({}, value);
    return p;
}

Polynomial Polynomial::variable(unsigned modulus, unsigned index) {
    Polynomial p(modulus);
    p.add_term({index}, 1);
    return p;
}

void Polynomial::add_term(const Monomial& m, unsigned long long coefficient) {
    unsigned c = static_cast<unsigned>((terms_[m] + coefficient % modulus_) % modulus_);
    if (c == 0) {
        terms_.erase(m);
    } else {
        terms_[m] = c;
    }
}

unsigned Polynomial::variable_bound() const {
    unsigned bound = 0;
    for (const auto& [m, c] : terms_) {
        for (unsigned v : m) {
            bound = std::max(bound, v + 1);
        }
    }
    return bound;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
    Polynomial sum = *this;
    for (const auto& [m, c] : other.terms_) {
        sum.add_term(m, c);
    }
    return sum;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
    Polynomial product(modulus_);
    for (const auto& [m1, c1] : terms_) {
        for (const auto& [m2, c2] : other.terms_) {
            Monomial m = m1;
            m.insert(m.end(), m2.begin(), m2.end());
            std::sort(m.begin(), m.end());
            product.add_term(m, static_cast<unsigned long long>(c1) * c2);
        }
    }
    return product;
}

Symbol Polynomial::evaluate(std::span<const Symbol> cells) const {
    unsigned long long total = 0;
    for (const auto& [m, c] : terms_) {
        unsigned long long value = c;
        for (unsigned v : m) {
            value = value * cells[v] % modulus_;
        }
        total = (total + value) % modulus_;
    }
    return static_cast<Symbol>(total);
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) {
        return "0";
    }
    std::string out;
    for (const auto& [m, c] : terms_) {
        if (!out.empty()) {
            out += " + ";
        }
        std::string factors;
        if (c != 1 || m.empty()) {
            factors = std::to_string(c);
        }
        for (unsigned v : m) {
            if (!factors.empty()) {
                factors += "*";
            }
            factors += "x" + std::to_string(v);
        }
        out += factors;
    }
    return out;
}

namespace {

class Parser {
public:
    Parser(std::string_view text, unsigned modulus) : text_(text), modulus_(modulus) {}

    Polynomial parse() {
        Polynomial result = expr();
        skip_space();
        if (match_keyword("mod")) {
            skip_space();
            std::size_t at = pos_;
            unsigned long long n = integer();
            if (n != modulus_) {
                throw parse_error("'mod " + std::to_string(n) + "' disagrees with alphabet size " +
                                      std::to_string(modulus_),
                                  at);
            }
            skip_space();
        }
        if (pos_ != text_.size()) {
            throw parse_error(std::string("unexpected character '") + text_[pos_] + "'", pos_);
        }
        return result;
    }

private:
    Polynomial expr() {
        Polynomial sum = term();
        while (peek() == '+') {
            ++pos_;
            sum = sum + term();
        }
        return sum;
    }

    Polynomial term() {
        Polynomial product = factor();
        while (peek() == '*') {
            ++pos_;
            product = product * factor();
        }
        return product;
    }

    Polynomial factor() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            Polynomial inner = expr();
            skip_space();
            if (match_keyword("mod")) {
                // "(expr mod N)" is accepted with the same consistency rule
                skip_space();
                std::size_t at = pos_;
                if (integer() != modulus_) {
                    throw parse_error("inner 'mod' disagrees with alphabet size", at);
                }
            }
            if (peek() != ')') {
                throw parse_error("expected ')'", pos_);
            }
            ++pos_;
            return inner;
        }
        if (c == 'x' || c == 'X') {
            ++pos_;
            if (pos_ < text_.size() && text_[pos_] == '_') {
                ++pos_;
            }
            if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                throw parse_error("expected variable index after 'x'", pos_);
            }
            return Polynomial::variable(modulus_, static_cast<unsigned>(integer()));
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            return Polynomial::constant(modulus_, integer());
        }
        if (c == '\0') {
            throw parse_error("unexpected end of expression", pos_);
        }
        throw parse_error(std::string("unexpected character '") + c + "'", pos_);
    }

    unsigned long long integer() {
        std::size_t start = pos_;
        unsigned long long value = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            value = value * 10 + static_cast<unsigned>(text_[pos_] - '0');
            if (value > 1000000000ULL) {
                throw parse_error("integer too large", start);
            }
            ++pos_;
        }
        if (pos_ == start) {
            throw parse_error("expected integer", pos_);
        }
        return value;
    }

    bool match_keyword(std::string_view word) {
        if (text_.substr(pos_, word.size()) == word) {
            pos_ += word.size();
            return true;
        }
        return false;
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    // Next non-space character, or '\0' at the end.
    char peek() {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    std::string_view text_;
    unsigned modulus_;
    std::size_t pos_ = 0;
};

} // namespace

Polynomial parse_polynomial_expr(std::string_view expr, unsigned alphabet_size) {
    if (alphabet_size < 2) {
        throw encoding_error("alphabet size must be at least 2");
    }
    return Parser(expr, alphabet_size).parse();
}

RuleTable table_from_polynomial(const Polynomial& poly, unsigned span) {
    if (poly.variable_bound() > span) {
        throw parse_error("variable x" + std::to_string(poly.variable_bound() - 1) + " out of range for span " +
                              std::to_string(span),
                          0);
    }
    const unsigned n = poly.modulus();
    std::uint64_t windows = checked_pow(n, span);
    std::vector<Symbol> table(windows);
    for (std::uint64_t w = 0; w < windows; ++w) {
        table[w] = poly.evaluate(unpack_word(w, span, n));
    }
    return RuleTable(n, span, std::move(table));
}

RuleTable parse_polynomial(std::string_view expr, unsigned alphabet_size, unsigned span) {
    Polynomial poly = parse_polynomial_expr(expr, alphabet_size);
    if (poly.variable_bound() > span) {
        // locate the offending variable for the diagnostic
        std::size_t at = 0;
        for (std::size_t i = 0; i + 1 < expr.size(); ++i) {
            if (expr[i] == 'x' || expr[i] == 'X') {
                std::size_t j = i + 1;
                if (j < expr.size() && expr[j] == '_') {
                    ++j;
                }
                unsigned v = 0;
                bool any = false;
                while (j < expr.size() && std::isdigit(static_cast<unsigned char>(expr[j]))) {
                    v = v * 10 + static_cast<unsigned>(expr[j] - '0');
                    any = true;
                    ++j;
                }
                if (any && v >= span) {
                    at = i;
                    break;
                }
            }
        }
        throw parse_error("variable index " + std::to_string(poly.variable_bound() - 1) + " not below span " +
                              std::to_string(span),
                          at);
    }
    return table_from_polynomial(poly, span);
}

} // namespace cellaut
