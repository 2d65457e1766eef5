#include "cellaut/rule.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

#include "cellaut/error.hpp"

namespace cellaut {

namespace {

// Largest rule table we are willing to materialize.
constexpr std::uint64_t max_window_count = std::uint64_t(1) << 26;
constexpr unsigned max_alphabet = 36;

int digit_value(char c) {
    if (c >= '0' && c <= '9') {
        return c - '0';
    }
    if (c >= 'a' && c <= 'z') {
        return c - 'a' + 10;
    }
    if (c >= 'A' && c <= 'Z') {
        return c - 'A' + 10;
    }
    return -1;
}

char digit_char(Symbol s) {
    return s < 10 ? char('0' + s) : char('a' + (s - 10));
}

} // namespace

BigInt parse_decimal(std::string_view text) {
    if (text.empty()) {
        throw parse_error("empty number", 0);
    }
    BigInt value = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c < '0' || c > '9') {
            throw parse_error(std::string("invalid decimal digit '") + c + "'", i);
        }
        value = value * 10 + (c - '0');
    }
    return value;
}

std::string to_decimal(const BigInt& value) {
    return value.str();
}

std::uint64_t checked_pow(std::uint64_t base, unsigned exponent) {
    std::uint64_t result = 1;
    for (unsigned i = 0; i < exponent; ++i) {
        if (base != 0 && result > std::numeric_limits<std::uint64_t>::max() / base) {
            throw capacity_error(std::to_string(base) + "^" + std::to_string(exponent) +
                                 " does not fit in 64 bits");
        }
        result *= base;
    }
    return result;
}

RuleTable::RuleTable(unsigned alphabet_size, unsigned span, std::vector<Symbol> table)
    : alphabet_size_(alphabet_size), span_(span), table_(std::move(table)) {
    if (alphabet_size < 2 || alphabet_size > max_alphabet) {
        throw encoding_error("alphabet size must be in [2, 36], got " + std::to_string(alphabet_size));
    }
    if (span < 1) {
        throw encoding_error("span must be at least 1");
    }
    std::uint64_t expected = checked_pow(alphabet_size, span);
    if (expected > max_window_count) {
        throw capacity_error("rule table of " + std::to_string(expected) + " windows exceeds limit of " +
                             std::to_string(max_window_count));
    }
    if (table_.size() != expected) {
        throw encoding_error("rule table has " + std::to_string(table_.size()) + " entries, expected N^span = " +
                             std::to_string(expected));
    }
    for (std::size_t w = 0; w < table_.size(); ++w) {
        if (table_[w] >= alphabet_size) {
            throw encoding_error("rule table entry " + std::to_string(w) + " is " + std::to_string(table_[w]) +
                                 ", not a symbol below " + std::to_string(alphabet_size));
        }
    }
}

std::uint64_t RuleTable::window_index(std::span<const Symbol> window) const {
    if (window.size() != span_) {
        throw length_error("window has " + std::to_string(window.size()) + " cells, rule span is " +
                           std::to_string(span_));
    }
    std::uint64_t index = 0;
    for (Symbol a : window) {
        if (a >= alphabet_size_) {
            throw encoding_error("symbol " + std::to_string(a) + " outside alphabet");
        }
        index = index * alphabet_size_ + a;
    }
    return index;
}

Word RuleTable::window_symbols(std::uint64_t window) const {
    return unpack_word(window, span_, alphabet_size_);
}

RuleTable table_from_rule_number(const BigInt& number, unsigned alphabet_size, unsigned span) {
    if (alphabet_size < 2) {
        throw encoding_error("alphabet size must be at least 2");
    }
    std::uint64_t windows = checked_pow(alphabet_size, span);
    if (windows > max_window_count) {
        throw capacity_error("rule table of " + std::to_string(windows) + " windows exceeds limit");
    }
    BigInt bound = boost::multiprecision::pow(BigInt(alphabet_size), static_cast<unsigned>(windows));
    if (number < 0 || number >= bound) {
        throw encoding_error("rule number " + to_decimal(number) + " out of range: must be below N^(N^s) = " +
                             std::to_string(alphabet_size) + "^" + std::to_string(windows));
    }
    std::vector<Symbol> table(windows);
    if (alphabet_size == 2 && windows <= 64) {
        auto bits = static_cast<std::uint64_t>(number);
        for (std::uint64_t w = 0; w < windows; ++w) {
            table[w] = static_cast<Symbol>((bits >> w) & 1u);
        }
    } else {
        BigInt rest = number;
        for (std::uint64_t w = 0; w < windows && rest != 0; ++w) {
            table[w] = static_cast<Symbol>(static_cast<unsigned>(rest % alphabet_size));
            rest /= alphabet_size;
        }
    }
    return RuleTable(alphabet_size, span, std::move(table));
}

BigInt rule_number_from_table(const RuleTable& table) {
    const auto& entries = table.table();
    if (table.alphabet_size() == 2 && entries.size() <= 64) {
        std::uint64_t bits = 0;
        for (std::size_t w = 0; w < entries.size(); ++w) {
            bits |= std::uint64_t(entries[w]) << w;
        }
        return BigInt(bits);
    }
    BigInt value = 0;
    for (std::size_t w = entries.size(); w-- > 0;) {
        value = value * table.alphabet_size() + entries[w];
    }
    return value;
}

namespace {

// Strips ignorable characters, remembering original positions for diagnostics.
std::vector<std::pair<char, std::size_t>> clean_tabular(std::string_view text) {
    std::vector<std::pair<char, std::size_t>> digits;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c)) || c == '_') {
            continue;
        }
        digits.emplace_back(c, i);
    }
    return digits;
}

} // namespace

unsigned infer_span_from_tabular(std::string_view text, unsigned alphabet_size) {
    auto digits = clean_tabular(text);
    std::uint64_t size = 1;
    for (unsigned span = 1; span < 64; ++span) {
        size *= alphabet_size;
        if (size == digits.size()) {
            return span;
        }
        if (size > digits.size()) {
            break;
        }
    }
    throw parse_error("tabular rule length " + std::to_string(digits.size()) + " is not a power of " +
                          std::to_string(alphabet_size),
                      text.size());
}

RuleTable table_from_tabular_string(std::string_view text, unsigned alphabet_size, unsigned span) {
    auto digits = clean_tabular(text);
    std::uint64_t expected = checked_pow(alphabet_size, span);
    if (digits.size() != expected) {
        throw parse_error("tabular rule has " + std::to_string(digits.size()) + " digits, expected " +
                              std::to_string(expected),
                          digits.size() < expected ? text.size() : digits[expected].second);
    }
    std::vector<Symbol> table(expected);
    for (std::size_t w = 0; w < digits.size(); ++w) {
        int v = digit_value(digits[w].first);
        if (v < 0 || static_cast<unsigned>(v) >= alphabet_size) {
            throw parse_error(std::string("invalid base-") + std::to_string(alphabet_size) + " digit '" +
                                  digits[w].first + "'",
                              digits[w].second);
        }
        table[w] = static_cast<Symbol>(v);
    }
    return RuleTable(alphabet_size, span, std::move(table));
}

std::string tabular_string(const RuleTable& table, bool grouped) {
    std::string out;
    const auto& entries = table.table();
    for (std::size_t w = 0; w < entries.size(); ++w) {
        if (grouped && w > 0 && w % 4 == 0) {
            out.push_back(' ');
        }
        out.push_back(digit_char(entries[w]));
    }
    return out;
}

Symbol apply_local(const RuleTable& table, std::span<const Symbol> window) {
    return table[table.window_index(window)];
}

Word evolve_finite(const RuleTable& table, std::span<const Symbol> line) {
    const unsigned s = table.span();
    if (line.size() < s) {
        throw length_error("line of length " + std::to_string(line.size()) + " is shorter than span " +
                           std::to_string(s));
    }
    Word out;
    out.reserve(line.size() - s + 1);
    for (std::size_t i = 0; i + s <= line.size(); ++i) {
        out.push_back(apply_local(table, line.subspan(i, s)));
    }
    return out;
}

Word evolve_circular(const RuleTable& table, std::span<const Symbol> word) {
    const std::size_t k = word.size();
    const unsigned s = table.span();
    const unsigned n = table.alphabet_size();
    Word out(k);
    for (std::size_t i = 0; i < k; ++i) {
        std::uint64_t index = 0;
        for (unsigned j = 0; j < s; ++j) {
            Symbol a = word[(i + j) % k];
            if (a >= n) {
                throw encoding_error("symbol " + std::to_string(a) + " outside alphabet");
            }
            index = index * n + a;
        }
        out[i] = table[index];
    }
    return out;
}

Word shift_rotate(std::span<const Symbol> word, long long r) {
    const auto k = static_cast<long long>(word.size());
    Word out(word.size());
    if (k == 0) {
        return out;
    }
    long long offset = ((r % k) + k) % k;
    for (long long i = 0; i < k; ++i) {
        out[i] = word[(i + offset) % k];
    }
    return out;
}

bool is_balanced(const RuleTable& table) {
    std::vector<std::uint64_t> counts(table.alphabet_size(), 0);
    for (Symbol a : table.table()) {
        ++counts[a];
    }
    const std::uint64_t target = table.window_count() / table.alphabet_size();
    return std::all_of(counts.begin(), counts.end(), [&](std::uint64_t c) { return c == target; });
}

RuleTable compose_with_shift(const RuleTable& table) {
    const std::uint64_t inner = table.window_count();
    std::vector<Symbol> wider(inner * table.alphabet_size());
    for (std::uint64_t w = 0; w < wider.size(); ++w) {
        wider[w] = table[w % inner];
    }
    return RuleTable(table.alphabet_size(), table.span() + 1, std::move(wider));
}

RuleTable reflect(const RuleTable& table) {
    std::vector<Symbol> out(table.window_count());
    for (std::uint64_t w = 0; w < out.size(); ++w) {
        Word cells = table.window_symbols(w);
        std::reverse(cells.begin(), cells.end());
        out[w] = table[table.window_index(cells)];
    }
    return RuleTable(table.alphabet_size(), table.span(), std::move(out));
}

RuleTable permute_symbols(const RuleTable& table, std::span<const Symbol> permutation) {
    const unsigned n = table.alphabet_size();
    if (permutation.size() != n) {
        throw encoding_error("permutation size does not match alphabet");
    }
    Word inverse(n, n);
    for (unsigned a = 0; a < n; ++a) {
        if (permutation[a] >= n || inverse[permutation[a]] != n) {
            throw encoding_error("not a permutation of the alphabet");
        }
        inverse[permutation[a]] = static_cast<Symbol>(a);
    }
    // g(x) = pi(f(pi^-1(x))) cellwise
    std::vector<Symbol> out(table.window_count());
    for (std::uint64_t w = 0; w < out.size(); ++w) {
        Word cells = table.window_symbols(w);
        for (auto& c : cells) {
            c = inverse[c];
        }
        out[w] = permutation[table[table.window_index(cells)]];
    }
    return RuleTable(n, table.span(), std::move(out));
}

std::uint64_t pack_word(std::span<const Symbol> word, unsigned alphabet_size) {
    std::uint64_t index = 0;
    for (Symbol a : word) {
        if (a >= alphabet_size) {
            throw encoding_error("symbol " + std::to_string(a) + " outside alphabet");
        }
        index = index * alphabet_size + a;
    }
    return index;
}

Word unpack_word(std::uint64_t index, unsigned length, unsigned alphabet_size) {
    Word word(length);
    for (unsigned j = length; j-- > 0;) {
        word[j] = static_cast<Symbol>(index % alphabet_size);
        index /= alphabet_size;
    }
    return word;
}

Word parse_word(std::string_view text, unsigned alphabet_size) {
    Word word;
    word.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        int v = digit_value(text[i]);
        if (v < 0 || static_cast<unsigned>(v) >= alphabet_size) {
            throw parse_error(std::string("invalid symbol '") + text[i] + "'", i);
        }
        word.push_back(static_cast<Symbol>(v));
    }
    return word;
}

std::string format_word(std::span<const Symbol> word) {
    std::string out;
    out.reserve(word.size());
    for (Symbol a : word) {
        out.push_back(digit_char(a));
    }
    return out;
}

} // namespace cellaut
