#ifndef cellaut_rule_hpp
#define cellaut_rule_hpp

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cellaut/bigint.hpp"

namespace cellaut {

using Symbol = std::uint8_t;
using Word = std::vector<Symbol>;

/*
 * Local rule F : A^span -> A of a one-dimensional cellular automaton over
 * the alphabet {0, ..., N-1}.
 *
 * Windows are one-sided: (f x)_i = F(x_i, ..., x_{i+span-1}). A window
 * (a_0, ..., a_{s-1}) has index sum_j a_j * N^(s-1-j), so the leftmost cell is
 * the most significant digit and table() lists outputs in ascending window
 * order.
 */
class RuleTable {
public:
    // Throws encoding_error unless table.size() == N^span and all entries are < N.
    RuleTable(unsigned alphabet_size, unsigned span, std::vector<Symbol> table);

    unsigned alphabet_size() const { return alphabet_size_; }
    unsigned span() const { return span_; }
    // N^span
    std::uint64_t window_count() const { return table_.size(); }
    const std::vector<Symbol>& table() const { return table_; }

    Symbol operator[](std::uint64_t window) const { return table_[window]; }

    // Packed index of a window of exactly span() symbols.
    std::uint64_t window_index(std::span<const Symbol> window) const;
    Word window_symbols(std::uint64_t window) const;

    bool operator==(const RuleTable&) const = default;

private:
    unsigned alphabet_size_;
    unsigned span_;
    std::vector<Symbol> table_;
};

// N^e, throwing capacity_error when it does not fit in 64 bits.
std::uint64_t checked_pow(std::uint64_t base, unsigned exponent);

/*
 * Rule numbers follow the Wolfram convention: digit w (base N) of the number
 * is the output on window w. Note this is the reverse of the tabular string
 * for N = 2 (rule 30 has tabular string "01111000").
 */
RuleTable table_from_rule_number(const BigInt& number, unsigned alphabet_size, unsigned span);
BigInt rule_number_from_table(const RuleTable& table);

// Tabular strings list outputs in ascending window order; spaces and
// underscores are ignored.
RuleTable table_from_tabular_string(std::string_view text, unsigned alphabet_size, unsigned span);
std::string tabular_string(const RuleTable& table, bool grouped = false);

// Infers the span from the cleaned string length (must be an exact power of N).
unsigned infer_span_from_tabular(std::string_view text, unsigned alphabet_size);

Symbol apply_local(const RuleTable& table, std::span<const Symbol> window);

// Output has length line.size() - span + 1; throws length_error if the line is shorter than the span.
Word evolve_finite(const RuleTable& table, std::span<const Symbol> line);

// output[i] = F(x[i], x[i+1 mod k], ..., x[i+s-1 mod k]).
Word evolve_circular(const RuleTable& table, std::span<const Symbol> word);

// output[i] = word[(i + r) mod k]; r may be negative.
Word shift_rotate(std::span<const Symbol> word, long long r);

bool is_balanced(const RuleTable& table);

// Rule of f composed with the shift: span s+1 table ignoring the first cell.
RuleTable compose_with_shift(const RuleTable& table);

// Left-right mirror image of the rule.
RuleTable reflect(const RuleTable& table);

// Conjugates the rule by a symbol permutation applied to inputs and outputs.
RuleTable permute_symbols(const RuleTable& table, std::span<const Symbol> permutation);

// CircularWord packing: index = sum_j symbols[j] * N^(k-1-j).
std::uint64_t pack_word(std::span<const Symbol> word, unsigned alphabet_size);
Word unpack_word(std::uint64_t index, unsigned length, unsigned alphabet_size);

// Digit characters '0'..'9','a'..'z' <-> symbols.
Word parse_word(std::string_view text, unsigned alphabet_size);
std::string format_word(std::span<const Symbol> word);

} // namespace cellaut

#endif
