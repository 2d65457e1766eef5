#ifndef cellaut_fixtures_hpp
#define cellaut_fixtures_hpp

#include <string>
#include <string_view>
#include <vector>

#include "cellaut/automata.hpp"
#include "cellaut/periodic.hpp"

namespace cellaut {

// Non-empty lines of a rule list file, with '#' comments stripped and whitespace trimmed.
std::vector<std::string> read_rule_list(const std::string& path);

// Directory holding the bundled fixture files (CELLAUT_DATA_DIR env var, else the build-time path).
std::string data_directory();

// "11,13,15" or "10-20" or a mix; ascending, deduplicated.
std::vector<unsigned> parse_k_list(std::string_view text);

// One reference density cell: the k values at which map is expected m-dense.
struct DensityExpectation {
    unsigned map = 0;
    unsigned m = 0;
    std::vector<unsigned> dense_k;
};

std::vector<DensityExpectation> read_density_expectations(const std::string& path);

struct DensityCheckRow {
    unsigned map = 0;
    unsigned m = 0;
    std::vector<unsigned> k_values;  // m .. k_max
    std::vector<bool> expected;
    std::vector<bool> observed;

    bool matches() const { return expected == observed; }
};

// Recomputes every expectation for k in [m, k_max] using the span-4 tabular fixtures.
std::vector<DensityCheckRow> reproduce_table1(const std::vector<std::string>& tabular_rules,
                                        const std::vector<DensityExpectation>& expectations, unsigned k_max,
                                        const PeriodicOptions& options);

struct SurjectivityCheckRow {
    unsigned map = 0;
    std::string tabular;
    CaClass cls = CaClass::none;
    bool construction_surjective = false;

    bool passes() const { return cls != CaClass::none && construction_surjective; }
};

// Classifies every fixture with both surjectivity procedures.
std::vector<SurjectivityCheckRow> reproduce_table2(const std::vector<std::string>& tabular_rules);

} // namespace cellaut

#endif
