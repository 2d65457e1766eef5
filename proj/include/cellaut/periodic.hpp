#ifndef cellaut_periodic_hpp
#define cellaut_periodic_hpp

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cellaut/rule.hpp"

namespace cellaut {

// The N^k circular words of length k, indexed as in pack_word.
struct ConfigSpace {
    unsigned alphabet_size;
    unsigned length;
    std::uint64_t size;

    ConfigSpace(unsigned alphabet_size, unsigned length);

    std::uint64_t pack(std::span<const Symbol> word) const { return pack_word(word, alphabet_size); }
    Word unpack(std::uint64_t index) const { return unpack_word(index, length, alphabet_size); }
};

// Fixed-size bitset over configuration indices.
class IndexSet {
public:
    IndexSet() = default;
    explicit IndexSet(std::uint64_t size, bool value = false);

    std::uint64_t size() const { return size_; }
    bool test(std::uint64_t i) const { return (bits_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::uint64_t i) { bits_[i >> 6] |= std::uint64_t(1) << (i & 63); }
    void reset(std::uint64_t i) { bits_[i >> 6] &= ~(std::uint64_t(1) << (i & 63)); }
    std::uint64_t count() const;

    template <class F>
    void for_each(F&& f) const {
        for (std::size_t w = 0; w < bits_.size(); ++w) {
            std::uint64_t b = bits_[w];
            while (b) {
                f(std::uint64_t(w) * 64 + static_cast<unsigned>(__builtin_ctzll(b)));
                b &= b - 1;
            }
        }
    }

    bool operator==(const IndexSet&) const = default;

private:
    std::uint64_t size_ = 0;
    std::vector<std::uint64_t> bits_;
};

enum class OrbitMode { materialized, recomputed };

// The functional graph x -> f(x) on a ConfigSpace.
class OrbitMap {
public:
    OrbitMap(const RuleTable& table, unsigned length, OrbitMode mode = OrbitMode::recomputed);

    const ConfigSpace& space() const { return space_; }
    OrbitMode mode() const { return mode_; }

    std::uint64_t successor(std::uint64_t index) const {
        return mode_ == OrbitMode::materialized ? successor_[index] : compute(index);
    }

    // Image under evolve_circular, computed directly on the packed index.
    std::uint64_t compute(std::uint64_t index) const;

private:
    RuleTable table_;
    ConfigSpace space_;
    OrbitMode mode_;
    std::vector<std::uint32_t> successor_;
};

struct PeriodicOptions {
    // Largest admissible N^k is 2^budget_log2.
    unsigned budget_log2 = 26;
    // Worker threads; 0 means hardware concurrency.
    unsigned jobs = 0;
    OrbitMode mode = OrbitMode::recomputed;
};

// Default budget, overridable by CELLAUT_BUDGET_LOG2.
unsigned default_budget_log2();

unsigned resolve_jobs(unsigned jobs);

// Throws capacity_error when N^k exceeds the budget.
void check_budget(unsigned alphabet_size, unsigned k, unsigned budget_log2);

/*
 * Per(f) intersected with P_k: indices lying on a cycle of the successor
 * map. In-degrees are counted (16-bit counters, retried with 32-bit ones on
 * overflow) and in-degree-zero nodes are peeled until only cyclic nodes remain.
 */
IndexSet jointly_periodic_set(const RuleTable& table, unsigned k, const PeriodicOptions& options = {});

struct DensityReport {
    std::string rule;
    unsigned alphabet_size = 2;
    unsigned span = 0;
    unsigned k = 0;
    unsigned m = 0;
    std::uint64_t periodic_count = 0;  // P
    double v_k = 0.0;                 // P^(1/k)
    bool dense = false;
    // m-words (packed) absent from every jointly periodic point, ascending.
    std::vector<std::uint64_t> missing;
    double seconds = 0.0;
};

// V_k = P^(1/k); exact when P is a power of two.
double v_statistic_value(std::uint64_t periodic_count, unsigned k);

// m-density of an already computed jointly periodic set (cyclic windows; m <= k).
DensityReport density_of_set(const IndexSet& periodic, unsigned alphabet_size, unsigned k, unsigned m);

DensityReport is_m_dense(const RuleTable& table, unsigned k, unsigned m, const PeriodicOptions& options = {});

struct VStatEntry {
    unsigned k = 0;
    std::optional<std::uint64_t> periodic_count;
    double v_k = 0.0;
    std::string error;  // set when the k was skipped (capacity)
};

struct VStatSummary {
    std::vector<VStatEntry> entries;
    // max of v_k over computed k; empirical lower estimate of V
    std::optional<double> max_v;
};

VStatSummary v_statistic(const RuleTable& table, const std::vector<unsigned>& ks,
                         const PeriodicOptions& options = {});

nlohmann::json report_to_json(const DensityReport& report, std::size_t sample_size = 8);
DensityReport report_from_json(const nlohmann::json& j);

/*
 * Append-only JSON-lines checkpoint of completed (rule, m, k) reports.
 * Each record is flushed and fsync'd. A file that cannot be parsed is moved
 * aside (".corrupt" suffix) with a warning and the run starts fresh.
 */
class Checkpoint {
public:
    Checkpoint(std::string path, std::ostream& diagnostics);

    std::optional<DensityReport> find(const std::string& rule, unsigned alphabet_size, unsigned span, unsigned m,
                                      unsigned k) const;
    void record(const DensityReport& report);
    std::size_t loaded_count() const { return loaded_.size(); }

private:
    std::string path_;
    std::vector<DensityReport> loaded_;
};

/*
 * FDense over all (m, k) with k in ks and k >= m. One jointly periodic set is
 * computed per k and shared by every m. Reports are passed to sink in
 * ascending (m, k) order. Pairs found in the checkpoint are not recomputed.
 */
void fdense_report(const RuleTable& table, const std::string& rule_id, const std::vector<unsigned>& m_values,
                   const std::vector<unsigned>& ks, Checkpoint* checkpoint, const PeriodicOptions& options,
                   const std::function<void(const DensityReport&)>& sink);

} // namespace cellaut

#endif
