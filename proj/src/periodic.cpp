#include "cellaut/periodic.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <cstdlib>
#include <fcntl.h>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>
#include <unistd.h>

#include "cellaut/error.hpp"

namespace cellaut {

ConfigSpace::ConfigSpace(unsigned alphabet_size, unsigned length)
    : alphabet_size(alphabet_size), length(length), size(checked_pow(alphabet_size, length)) {
    if (length < 1) {
        throw encoding_error("period k must be at least 1");
    }
}

IndexSet::IndexSet(std::uint64_t size, bool value)
    : size_(size), bits_((size + 63) / 64, value ? ~std::uint64_t(0) : 0) {
    if (value && size % 64 != 0) {
        bits_.back() = (std::uint64_t(1) << (size % 64)) - 1;
    }
}

std::uint64_t IndexSet::count() const {
    std::uint64_t total = 0;
    for (auto b : bits_) {
        total += static_cast<std::uint64_t>(std::popcount(b));
    }
    return total;
}

unsigned default_budget_log2() {
    if (const char* env = std::getenv("CELLAUT_BUDGET_LOG2")) {
        char* end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1 && v <= 32) {
            return static_cast<unsigned>(v);
        }
    }
    return 26;
}

unsigned resolve_jobs(unsigned jobs) {
    if (jobs != 0) {
        return jobs;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void check_budget(unsigned alphabet_size, unsigned k, unsigned budget_log2) {
    if (budget_log2 > 32) {
        throw capacity_error("budget 2^" + std::to_string(budget_log2) + " exceeds the 2^32 index limit");
    }
    const std::uint64_t budget = std::uint64_t(1) << budget_log2;
    std::uint64_t size = 1;
    for (unsigned i = 0; i < k; ++i) {
        size *= alphabet_size;
        if (size > budget) {
            throw capacity_error("configuration space " + std::to_string(alphabet_size) + "^" + std::to_string(k) +
                                 " exceeds memory budget 2^" + std::to_string(budget_log2));
        }
    }
}

OrbitMap::OrbitMap(const RuleTable& table, unsigned length, OrbitMode mode)
    : table_(table), space_(table.alphabet_size(), length), mode_(mode) {
    if (space_.size > (std::uint64_t(1) << 32)) {
        throw capacity_error("configuration space exceeds 2^32 indices");
    }
    if (mode_ == OrbitMode::materialized) {
        successor_.resize(space_.size);
        for (std::uint64_t x = 0; x < space_.size; ++x) {
            successor_[x] = static_cast<std::uint32_t>(compute(x));
        }
    }
}

std::uint64_t OrbitMap::compute(std::uint64_t index) const {
    const unsigned n = space_.alphabet_size;
    const unsigned k = space_.length;
    const unsigned s = table_.span();
    const std::uint64_t windows = table_.window_count();

    Symbol digits[64];
    if (n == 2) {
        for (unsigned j = 0; j < k; ++j) {
            digits[j] = static_cast<Symbol>((index >> (k - 1 - j)) & 1u);
        }
    } else {
        for (unsigned j = k; j-- > 0;) {
            digits[j] = static_cast<Symbol>(index % n);
            index /= n;
        }
    }
    std::uint64_t w = 0;
    for (unsigned j = 0; j + 1 < s; ++j) {
        w = w * n + digits[j % k];
    }
    std::uint64_t out = 0;
    for (unsigned i = 0; i < k; ++i) {
        w = (w * n + digits[(i + s - 1) % k]) % windows;
        out = out * n + table_[w];
    }
    return out;
}

namespace {

// Counts in-degrees into counters; returns false when a counter overflowed.
template <class Counter>
bool count_in_degrees(const OrbitMap& orbit, std::vector<Counter>& counters, unsigned jobs) {
    const std::uint64_t size = orbit.space().size;
    counters.assign(size, 0);
    std::atomic<bool> overflow{false};
    auto work = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t x = begin; x < end; ++x) {
            std::atomic_ref<Counter> c(counters[orbit.successor(x)]);
            if (c.fetch_add(1, std::memory_order_relaxed) == std::numeric_limits<Counter>::max()) {
                overflow.store(true, std::memory_order_relaxed);
            }
        }
    };
    if (jobs <= 1 || size < (1u << 16)) {
        work(0, size);
    } else {
        std::vector<std::jthread> threads;
        const std::uint64_t chunk = (size + jobs - 1) / jobs;
        for (unsigned t = 0; t < jobs; ++t) {
            std::uint64_t begin = std::min(size, t * chunk);
            std::uint64_t end = std::min(size, begin + chunk);
            threads.emplace_back(work, begin, end);
        }
    }
    return !overflow.load();
}

// Peels in-degree-zero chains; what survives is the cyclic part.
template <class Counter>
IndexSet peel(const OrbitMap& orbit, std::vector<Counter>& counters) {
    const std::uint64_t size = orbit.space().size;
    IndexSet alive(size, true);
    for (std::uint64_t x = 0; x < size; ++x) {
        std::uint64_t y = x;
        while (counters[y] == 0 && alive.test(y)) {
            alive.reset(y);
            y = orbit.successor(y);
            --counters[y];
        }
    }
    return alive;
}

template <class Counter>
std::optional<IndexSet> try_peel(const OrbitMap& orbit, unsigned jobs) {
    std::vector<Counter> counters;
    if (!count_in_degrees(orbit, counters, jobs)) {
        return std::nullopt;
    }
    return peel(orbit, counters);
}

} // namespace

IndexSet jointly_periodic_set(const RuleTable& table, unsigned k, const PeriodicOptions& options) {
    if (k < 1) {
        throw encoding_error("period k must be at least 1");
    }
    check_budget(table.alphabet_size(), k, options.budget_log2);
    OrbitMap orbit(table, k, options.mode);
    const unsigned jobs = resolve_jobs(options.jobs);
    if (auto set = try_peel<std::uint16_t>(orbit, jobs)) {
        return std::move(*set);
    }
    return *try_peel<std::uint32_t>(orbit, jobs);
}

double v_statistic_value(std::uint64_t periodic_count, unsigned k) {
    if (periodic_count == 0) {
        return 0.0;
    }
    return std::exp2(std::log2(static_cast<double>(periodic_count)) / k);
}

DensityReport density_of_set(const IndexSet& periodic, unsigned alphabet_size, unsigned k, unsigned m) {
    if (m < 1 || m > k) {
        throw unsupported_error("m-density needs 1 <= m <= k (got m = " + std::to_string(m) +
                                ", k = " + std::to_string(k) + ")");
    }
    const std::uint64_t words = checked_pow(alphabet_size, m);
    if (words > (std::uint64_t(1) << 32)) {
        throw capacity_error("presence table for m = " + std::to_string(m) + " is too large");
    }
    DensityReport report;
    report.alphabet_size = alphabet_size;
    report.k = k;
    report.m = m;
    report.periodic_count = periodic.count();
    report.v_k = v_statistic_value(report.periodic_count, k);

    IndexSet present(words, false);
    Symbol digits[64];
    periodic.for_each([&](std::uint64_t x) {
        for (unsigned j = k; j-- > 0;) {
            digits[j] = static_cast<Symbol>(x % alphabet_size);
            x /= alphabet_size;
        }
        // rolling cyclic window of length m starting at every position
        std::uint64_t w = 0;
        for (unsigned j = 0; j + 1 < m; ++j) {
            w = w * alphabet_size + digits[j];
        }
        for (unsigned i = 0; i < k; ++i) {
            w = (w * alphabet_size + digits[(i + m - 1) % k]) % words;
            present.set(w);
        }
    });
    for (std::uint64_t w = 0; w < words; ++w) {
        if (!present.test(w)) {
            report.missing.push_back(w);
        }
    }
    report.dense = report.missing.empty();
    return report;
}

DensityReport is_m_dense(const RuleTable& table, unsigned k, unsigned m, const PeriodicOptions& options) {
    if (m < 1 || m > k) {
        throw unsupported_error("m-density needs 1 <= m <= k (got m = " + std::to_string(m) +
                                ", k = " + std::to_string(k) + ")");
    }
    auto start = std::chrono::steady_clock::now();
    IndexSet periodic = jointly_periodic_set(table, k, options);
    DensityReport report = density_of_set(periodic, table.alphabet_size(), k, m);
    report.span = table.span();
    report.rule = tabular_string(table);
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

VStatSummary v_statistic(const RuleTable& table, const std::vector<unsigned>& ks, const PeriodicOptions& options) {
    VStatSummary summary;
    for (unsigned k : ks) {
        VStatEntry entry;
        entry.k = k;
        try {
            std::uint64_t p = jointly_periodic_set(table, k, options).count();
            entry.periodic_count = p;
            entry.v_k = v_statistic_value(p, k);
            summary.max_v = std::max(summary.max_v.value_or(0.0), entry.v_k);
        } catch (const capacity_error& e) {
            entry.error = e.what();
        }
        summary.entries.push_back(std::move(entry));
    }
    return summary;
}

nlohmann::json report_to_json(const DensityReport& report, std::size_t sample_size) {
    nlohmann::json sample = nlohmann::json::array();
    for (std::size_t i = 0; i < report.missing.size() && i < sample_size; ++i) {
        sample.push_back(format_word(unpack_word(report.missing[i], report.m, report.alphabet_size)));
    }
    return {
        {"rule", report.rule},
        {"N", report.alphabet_size},
        {"span", report.span},
        {"k", report.k},
        {"m", report.m},
        {"P", report.periodic_count},
        {"v_k", report.v_k},
        {"dense", report.dense},
        {"missing_count", report.missing.size()},
        {"missing_sample", sample},
        {"seconds", report.seconds},
    };
}

DensityReport report_from_json(const nlohmann::json& j) {
    DensityReport r;
    r.rule = j.at("rule").get<std::string>();
    r.alphabet_size = j.at("N").get<unsigned>();
    r.span = j.at("span").get<unsigned>();
    r.k = j.at("k").get<unsigned>();
    r.m = j.at("m").get<unsigned>();
    r.periodic_count = j.at("P").get<std::uint64_t>();
    r.v_k = j.at("v_k").get<double>();
    r.dense = j.at("dense").get<bool>();
    r.seconds = j.at("seconds").get<double>();
    if (j.contains("missing")) {
        r.missing = j.at("missing").get<std::vector<std::uint64_t>>();
    }
    if (r.dense != r.missing.empty()) {
        throw parse_error("report is inconsistent: dense flag disagrees with missing words", 0);
    }
    return r;
}

Checkpoint::Checkpoint(std::string path, std::ostream& diagnostics) : path_(std::move(path)) {
    std::ifstream in(path_);
    if (!in) {
        return;
    }
    std::string line;
    std::size_t line_no = 0;
    try {
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) {
                continue;
            }
            auto j = nlohmann::json::parse(line);
            loaded_.push_back(report_from_json(j.at("result")));
            const auto& r = loaded_.back();
            if (j.at("rule").get<std::string>() != r.rule || j.at("m").get<unsigned>() != r.m ||
                j.at("k").get<unsigned>() != r.k) {
                throw parse_error("record header disagrees with its result", 0);
            }
        }
    } catch (const std::exception& e) {
        diagnostics << "warning: checkpoint " << path_ << " is corrupt at line " << line_no << " (" << e.what()
                    << "); starting fresh\n";
        loaded_.clear();
        in.close();
        std::rename(path_.c_str(), (path_ + ".corrupt").c_str());
    }
}

std::optional<DensityReport> Checkpoint::find(const std::string& rule, unsigned alphabet_size, unsigned span,
                                              unsigned m, unsigned k) const {
    for (const auto& r : loaded_) {
        if (r.rule == rule && r.alphabet_size == alphabet_size && r.span == span && r.m == m && r.k == k) {
            return r;
        }
    }
    return std::nullopt;
}

void Checkpoint::record(const DensityReport& report) {
    nlohmann::json result = report_to_json(report);
    result["missing"] = report.missing;
    nlohmann::json record = {{"rule", report.rule}, {"m", report.m}, {"k", report.k}, {"result", result}};
    std::string line = record.dump() + "\n";

    int fd = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
    if (fd < 0) {
        throw error("cannot open checkpoint " + path_);
    }
    std::size_t written = 0;
    while (written < line.size()) {
        ssize_t n = ::write(fd, line.data() + written, line.size() - written);
        if (n < 0) {
            ::close(fd);
            throw error("write to checkpoint " + path_ + " failed");
        }
        written += static_cast<std::size_t>(n);
    }
    ::fsync(fd);
    ::close(fd);
    loaded_.push_back(report);
}

void fdense_report(const RuleTable& table, const std::string& rule_id, const std::vector<unsigned>& m_values,
                   const std::vector<unsigned>& ks, Checkpoint* checkpoint, const PeriodicOptions& options,
                   const std::function<void(const DensityReport&)>& sink) {
    std::vector<unsigned> ms = m_values;
    std::vector<unsigned> kset = ks;
    std::sort(ms.begin(), ms.end());
    ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
    std::sort(kset.begin(), kset.end());
    kset.erase(std::unique(kset.begin(), kset.end()), kset.end());

    // slots in (m, k) output order
    struct Slot {
        unsigned m, k;
        std::optional<DensityReport> report;
    };
    std::vector<Slot> slots;
    for (unsigned m : ms) {
        for (unsigned k : kset) {
            if (k >= m) {
                slots.push_back({m, k, std::nullopt});
                if (checkpoint) {
                    slots.back().report = checkpoint->find(rule_id, table.alphabet_size(), table.span(), m, k);
                }
            }
        }
    }
    // one job per k that still has work
    std::vector<unsigned> pending_k;
    for (unsigned k : kset) {
        bool needed = std::any_of(slots.begin(), slots.end(), [&](const Slot& s) { return s.k == k && !s.report; });
        if (needed) {
            check_budget(table.alphabet_size(), k, options.budget_log2);
            pending_k.push_back(k);
        }
    }

    std::mutex mutex;
    std::condition_variable cv;
    std::size_t next_emit = 0;
    std::exception_ptr failure;

    auto emit_ready = [&] {
        // caller holds mutex
        while (next_emit < slots.size() && slots[next_emit].report) {
            sink(*slots[next_emit].report);
            ++next_emit;
        }
    };

    const std::uint64_t budget = std::uint64_t(1) << options.budget_log2;
    std::uint64_t in_flight = 0;
    std::size_t next_job = 0;
    const unsigned workers = std::max(1u, std::min<unsigned>(resolve_jobs(options.jobs),
                                                             static_cast<unsigned>(pending_k.size())));
    // intra-k parallelism only when jobs are run one at a time
    PeriodicOptions inner = options;
    inner.jobs = workers > 1 ? 1 : options.jobs;

    auto worker = [&] {
        for (;;) {
            unsigned k;
            std::uint64_t cost;
            {
                std::unique_lock lock(mutex);
                if (next_job >= pending_k.size() || failure) {
                    return;
                }
                k = pending_k[next_job];
                cost = checked_pow(table.alphabet_size(), k);
                // memory admission: wait until the job fits beside the running ones
                cv.wait(lock, [&] { return in_flight == 0 || in_flight + cost <= budget || failure; });
                if (failure || next_job >= pending_k.size() || pending_k[next_job] != k) {
                    if (failure) {
                        return;
                    }
                    continue;
                }
                ++next_job;
                in_flight += cost;
            }
            try {
                auto start = std::chrono::steady_clock::now();
                IndexSet periodic = jointly_periodic_set(table, k, inner);
                double base_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                std::vector<DensityReport> done;
                for (const auto& slot : slots) {
                    if (slot.k != k || slot.report) {
                        continue;
                    }
                    auto t0 = std::chrono::steady_clock::now();
                    DensityReport r = density_of_set(periodic, table.alphabet_size(), k, slot.m);
                    r.rule = rule_id;
                    r.span = table.span();
                    r.seconds = base_seconds +
                                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                    done.push_back(std::move(r));
                }
                std::lock_guard lock(mutex);
                for (auto& r : done) {
                    if (checkpoint) {
                        checkpoint->record(r);
                    }
                    for (auto& slot : slots) {
                        if (slot.k == r.k && slot.m == r.m) {
                            slot.report = std::move(r);
                            break;
                        }
                    }
                }
                in_flight -= cost;
                emit_ready();
            } catch (...) {
                std::lock_guard lock(mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                in_flight -= cost;
            }
            cv.notify_all();
        }
    };

    {
        std::lock_guard lock(mutex);
        emit_ready();
    }
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> threads;
        for (unsigned t = 0; t < workers; ++t) {
            threads.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    std::lock_guard lock(mutex);
    emit_ready();
}

} // namespace cellaut
