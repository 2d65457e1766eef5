#include "cellaut/fixtures.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "cellaut/error.hpp"
#include "cellaut/surjectivity.hpp"

#ifndef CELLAUT_DEFAULT_DATA_DIR
#define CELLAUT_DEFAULT_DATA_DIR "data"
#endif

namespace cellaut {

std::vector<std::string> read_rule_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw error("cannot read rule list " + path);
    }
    std::vector<std::string> rules;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        auto begin = line.find_first_not_of(" \t\r,");
        if (begin == std::string::npos) {
            continue;
        }
        auto end = line.find_last_not_of(" \t\r,");
        rules.push_back(line.substr(begin, end - begin + 1));
    }
    return rules;
}

std::string data_directory() {
    if (const char* env = std::getenv("CELLAUT_DATA_DIR")) {
        return env;
    }
    return CELLAUT_DEFAULT_DATA_DIR;
}

namespace {

unsigned parse_unsigned(std::string_view text, std::size_t offset) {
    if (text.empty()) {
        throw parse_error("expected a number", offset);
    }
    unsigned value = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] < '0' || text[i] > '9') {
            throw parse_error(std::string("invalid digit '") + text[i] + "'", offset + i);
        }
        value = value * 10 + static_cast<unsigned>(text[i] - '0');
        if (value > 1000000) {
            throw parse_error("number too large", offset);
        }
    }
    return value;
}

} // namespace

std::vector<unsigned> parse_k_list(std::string_view text) {
    std::set<unsigned> ks;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string_view::npos) {
            comma = text.size();
        }
        std::string_view item = text.substr(pos, comma - pos);
        while (!item.empty() && item.front() == ' ') {
            item.remove_prefix(1);
            ++pos;
        }
        while (!item.empty() && item.back() == ' ') {
            item.remove_suffix(1);
        }
        if (auto dash = item.find('-'); dash != std::string_view::npos) {
            unsigned lo = parse_unsigned(item.substr(0, dash), pos);
            unsigned hi = parse_unsigned(item.substr(dash + 1), pos + dash + 1);
            if (hi < lo) {
                throw parse_error("empty range", pos);
            }
            for (unsigned k = lo; k <= hi; ++k) {
                ks.insert(k);
            }
        } else {
            ks.insert(parse_unsigned(item, pos));
        }
        pos = comma + 1;
    }
    return {ks.begin(), ks.end()};
}

std::vector<DensityExpectation> read_density_expectations(const std::string& path) {
    std::vector<DensityExpectation> out;
    for (const auto& line : read_rule_list(path)) {
        std::istringstream fields(line);
        DensityExpectation e;
        std::string list;
        if (!(fields >> e.map >> e.m >> list)) {
            throw parse_error("malformed density expectation '" + line + "'", 0);
        }
        e.dense_k = parse_k_list(list);
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<DensityCheckRow> reproduce_table1(const std::vector<std::string>& tabular_rules,
                                        const std::vector<DensityExpectation>& expectations, unsigned k_max,
                                        const PeriodicOptions& options) {
    std::vector<DensityCheckRow> rows;
    for (const auto& e : expectations) {
        if (e.map < 1 || e.map > tabular_rules.size()) {
            throw encoding_error("expectation names map " + std::to_string(e.map) + " which is not in the fixture list");
        }
        DensityCheckRow row;
        row.map = e.map;
        row.m = e.m;
        RuleTable table = table_from_tabular_string(tabular_rules[e.map - 1], 2, 4);
        for (unsigned k = e.m; k <= k_max; ++k) {
            row.k_values.push_back(k);
            row.expected.push_back(std::binary_search(e.dense_k.begin(), e.dense_k.end(), k));
            IndexSet periodic = jointly_periodic_set(table, k, options);
            row.observed.push_back(density_of_set(periodic, 2, k, e.m).dense);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<SurjectivityCheckRow> reproduce_table2(const std::vector<std::string>& tabular_rules) {
    std::vector<SurjectivityCheckRow> rows;
    for (std::size_t i = 0; i < tabular_rules.size(); ++i) {
        SurjectivityCheckRow row;
        row.map = static_cast<unsigned>(i + 1);
        RuleTable table = table_from_tabular_string(tabular_rules[i], 2, 4);
        row.tabular = tabular_string(table, true);
        row.cls = classify(table);
        row.construction_surjective = decide_surjective(table).surjective;
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace cellaut
