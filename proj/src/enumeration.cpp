#include "cellaut/enumeration.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>
#include <thread>

#include "cellaut/error.hpp"
#include "cellaut/periodic.hpp"

namespace cellaut {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Rule at a given position of the sweep sequence.
class RuleSequence {
public:
    explicit RuleSequence(const SweepSpec& spec) : spec_(spec) {
        windows_ = checked_pow(spec.alphabet_size, spec.span);
        bound_ = boost::multiprecision::pow(BigInt(spec.alphabet_size), static_cast<unsigned>(windows_));
        int sources = (spec.first || spec.last ? 1 : 0) + (!spec.rules.empty() ? 1 : 0) + (spec.sample_count ? 1 : 0);
        if (sources > 1) {
            throw encoding_error("sweep takes exactly one of: range, explicit list, sample");
        }
        if (spec.shard_total == 0 || spec.shard_index >= spec.shard_total) {
            throw encoding_error("shard index must be below shard total");
        }
        if (spec.sample_count) {
            length_ = spec.sample_count;
        } else if (!spec.rules.empty()) {
            length_ = spec.rules.size();
        } else if (spec.first || spec.last) {
            BigInt first = spec.first.value_or(0);
            BigInt last = spec.last.value_or(bound_ - 1);
            if (first < 0 || last >= bound_) {
                throw encoding_error("rule range must lie in [0, N^(N^s)) = [0, " + to_decimal(bound_) + ")");
            }
            first_ = first;
            if (last < first) {
                length_ = 0;
            } else {
                BigInt len = last - first + 1;
                if (len > spec.max_rules) {
                    throw capacity_error("range of " + to_decimal(len) + " rules exceeds the sweep limit of " +
                                         std::to_string(spec.max_rules) + "; use shards, a sample, or a list");
                }
                length_ = static_cast<std::uint64_t>(len);
            }
        } else {
            // the full rule space
            if (bound_ > spec.max_rules) {
                throw capacity_error("full rule space of " + to_decimal(bound_) +
                                     " rules is too large; give a range, a list, or a sample");
            }
            first_ = 0;
            length_ = static_cast<std::uint64_t>(bound_);
        }
    }

    std::uint64_t length() const { return length_; }

    RuleTable at(std::uint64_t pos) const {
        if (spec_.sample_count) {
            std::mt19937_64 rng(splitmix64(spec_.seed ^ splitmix64(pos)));
            std::vector<Symbol> table(windows_);
            std::uniform_int_distribution<unsigned> digit(0, spec_.alphabet_size - 1);
            for (auto& entry : table) {
                entry = static_cast<Symbol>(digit(rng));
            }
            return RuleTable(spec_.alphabet_size, spec_.span, std::move(table));
        }
        if (!spec_.rules.empty()) {
            return table_from_rule_number(spec_.rules[pos], spec_.alphabet_size, spec_.span);
        }
        return table_from_rule_number(first_ + pos, spec_.alphabet_size, spec_.span);
    }

private:
    const SweepSpec& spec_;
    std::uint64_t windows_ = 0;
    BigInt bound_;
    BigInt first_ = 0;
    std::uint64_t length_ = 0;
};

} // namespace

SurveyResult sweep(const SweepSpec& spec) {
    auto start = std::chrono::steady_clock::now();
    RuleSequence sequence(spec);

    std::vector<std::uint64_t> positions;
    for (std::uint64_t pos = spec.shard_index; pos < sequence.length(); pos += spec.shard_total) {
        positions.push_back(pos);
    }
    std::vector<SweepRecord> records(positions.size());

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            RuleTable table = sequence.at(positions[i]);
            records[i].rule = rule_number_from_table(table);
            records[i].cls = is_balanced(table) ? classify(table) : CaClass::none;
        }
    };
    const unsigned jobs = resolve_jobs(spec.jobs);
    if (jobs <= 1 || positions.size() < 256) {
        work(0, positions.size());
    } else {
        std::vector<std::jthread> threads;
        const std::size_t chunk = (positions.size() + jobs - 1) / jobs;
        for (unsigned t = 0; t < jobs; ++t) {
            std::size_t begin = std::min(positions.size(), t * chunk);
            threads.emplace_back(work, begin, std::min(positions.size(), begin + chunk));
        }
    }

    std::stable_sort(records.begin(), records.end(),
                     [](const SweepRecord& a, const SweepRecord& b) { return a.rule < b.rule; });

    SurveyResult result;
    result.shard_index = spec.shard_index;
    result.shard_total = spec.shard_total;
    for (const auto& r : records) {
        ++result.counts[static_cast<int>(r.cls)];
        if (r.cls != CaClass::none) {
            result.surjective.push_back(r.rule);
        }
    }
    result.records = std::move(records);
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

VerifyReport verify_list(const std::vector<std::string>& rules, unsigned alphabet_size, unsigned span) {
    VerifyReport report;
    for (const auto& text : rules) {
        VerifyItem item;
        item.text = text;
        try {
            item.rule = parse_decimal(text);
            item.cls = classify(table_from_rule_number(*item.rule, alphabet_size, span));
            item.pass = *item.cls != CaClass::none;
        } catch (const error& e) {
            item.error = e.what();
        }
        if (!item.pass) {
            ++report.discrepancies;
        }
        report.items.push_back(std::move(item));
    }
    return report;
}

RuleTable canonicalize(const RuleTable& table) {
    Word permutation(table.alphabet_size());
    std::iota(permutation.begin(), permutation.end(), Symbol(0));
    RuleTable best = table;
    const RuleTable mirrored = reflect(table);
    do {
        for (const RuleTable* base : {&table, &mirrored}) {
            RuleTable candidate = permute_symbols(*base, permutation);
            if (candidate.table() < best.table()) {
                best = std::move(candidate);
            }
        }
    } while (std::next_permutation(permutation.begin(), permutation.end()));
    return best;
}

} // namespace cellaut
