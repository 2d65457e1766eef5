#ifndef cellaut_enumeration_hpp
#define cellaut_enumeration_hpp

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cellaut/automata.hpp"
#include "cellaut/bigint.hpp"
#include "cellaut/rule.hpp"

namespace cellaut {

/*
 * Which rules a sweep visits: an inclusive range, an explicit list, or a
 * seeded uniform sample. The shard (index, total) keeps the rules whose
 * position in that sequence is congruent to index mod total.
 */
struct SweepSpec {
    unsigned alphabet_size = 2;
    unsigned span = 3;
    std::optional<BigInt> first;
    std::optional<BigInt> last;
    std::vector<BigInt> rules;
    std::uint64_t sample_count = 0;
    std::uint64_t seed = 0;
    unsigned shard_index = 0;
    unsigned shard_total = 1;
    unsigned jobs = 0;
    // Refuse sequences longer than this.
    std::uint64_t max_rules = std::uint64_t(1) << 32;
};

struct SweepRecord {
    BigInt rule;
    CaClass cls = CaClass::none;
};

struct SurveyResult {
    std::array<std::uint64_t, 4> counts{};
    std::vector<BigInt> surjective;
    // every visited rule, ascending by rule number
    std::vector<SweepRecord> records;
    double seconds = 0.0;
    unsigned shard_index = 0;
    unsigned shard_total = 1;

    std::uint64_t total() const { return counts[0] + counts[1] + counts[2] + counts[3]; }
};

// Balance prefilter first, then classify; results ordered by rule number.
SurveyResult sweep(const SweepSpec& spec);

struct VerifyItem {
    std::string text;
    std::optional<BigInt> rule;
    std::optional<CaClass> cls;
    std::string error;  // parse or encoding failure
    bool pass = false;  // class >= surjective
};

struct VerifyReport {
    std::vector<VerifyItem> items;
    std::size_t discrepancies = 0;
};

// Classifies each decimal rule number; never drops a failing item.
VerifyReport verify_list(const std::vector<std::string>& rules, unsigned alphabet_size, unsigned span);

// Least table (lexicographic in window order) over reflections and symbol permutations.
RuleTable canonicalize(const RuleTable& table);

} // namespace cellaut

#endif
