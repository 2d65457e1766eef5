#include "cli.hpp"

#include <iomanip>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cellaut/automata.hpp"
#include "cellaut/enumeration.hpp"
#include "cellaut/error.hpp"
#include "cellaut/fixtures.hpp"
#include "cellaut/periodic.hpp"
#include "cellaut/polynomial.hpp"
#include "cellaut/rule.hpp"
#include "cellaut/surjectivity.hpp"

namespace cellaut::cli {

namespace {

using nlohmann::json;

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RuleSource {
    std::optional<std::string> number;
    std::optional<std::string> tabular;
    std::optional<std::string> poly;
    std::optional<unsigned> span;
    unsigned alphabet = 2;

    void attach(CLI::App* cmd) {
        auto* r = cmd->add_option("--rule", number, "rule number (decimal, digit w = output on window w)");
        auto* t = cmd->add_option("--tabular", tabular, "tabular rule, outputs in ascending window order");
        auto* p = cmd->add_option("--poly", poly, "polynomial in x0..x{span-1}, e.g. \"x0 + x1*x2\"");
        r->excludes(t, p);
        t->excludes(p);
        cmd->add_option("--span", span, "window width s")->check(CLI::Range(1u, 26u));
        cmd->add_option("--alphabet", alphabet, "alphabet size N")->check(CLI::Range(2u, 36u));
    }

    RuleTable load() const {
        int given = (number ? 1 : 0) + (tabular ? 1 : 0) + (poly ? 1 : 0);
        if (given != 1) {
            throw usage_error("exactly one of --rule, --tabular, --poly is required");
        }
        if (number) {
            return table_from_rule_number(parse_decimal(*number), alphabet, span.value_or(3));
        }
        if (tabular) {
            unsigned s = span ? *span : infer_span_from_tabular(*tabular, alphabet);
            return table_from_tabular_string(*tabular, alphabet, s);
        }
        if (!span) {
            throw usage_error("--poly needs --span");
        }
        return parse_polynomial(*poly, alphabet, *span);
    }
};

// Integers that may exceed 64 bits go out as numbers when they fit, strings otherwise.
json big_json(const BigInt& value) {
    if (value <= std::numeric_limits<std::uint64_t>::max()) {
        return static_cast<std::uint64_t>(value);
    }
    return to_decimal(value);
}

std::vector<unsigned> k_values(const std::optional<unsigned>& k_min, const std::optional<unsigned>& k_max,
                               const std::optional<std::string>& k_set) {
    std::vector<unsigned> ks;
    if (k_set) {
        ks = parse_k_list(*k_set);
    }
    if (k_min || k_max) {
        if (!k_min || !k_max) {
            throw usage_error("--k-min and --k-max go together");
        }
        for (unsigned k = *k_min; k <= *k_max; ++k) {
            ks.push_back(k);
        }
    }
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    if (!ks.empty() && ks.front() == 0) {
        throw usage_error("k values must be positive");
    }
    return ks;
}

std::string density_row(const DensityReport& r) {
    std::ostringstream os;
    os << "k=" << std::setw(2) << r.k << " m=" << std::setw(2) << r.m << " P=" << std::setw(10) << r.periodic_count
       << " V_k=" << std::fixed << std::setprecision(6) << r.v_k << " " << (r.dense ? "dense" : "not dense");
    if (!r.dense) {
        os << " (" << r.missing.size() << " missing)";
    }
    return os.str();
}

std::string k_summary(const std::vector<unsigned>& ks, const std::vector<bool>& flags) {
    std::string out;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (flags[i]) {
            out += (out.empty() ? "" : ",") + std::to_string(ks[i]);
        }
    }
    return out.empty() ? "-" : out;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cellular automata surjectivity and jointly periodic point toolkit"};
    app.require_subcommand(1);
    std::string format = "json";
    app.add_option("--format", format, "output mode")->check(CLI::IsMember({"json", "table"}));

    RuleSource source;
    auto attach = [&](CLI::App* cmd, bool with_format = true) {
        source.attach(cmd);
        if (with_format) {
            cmd->add_option("--format", format, "output mode")->check(CLI::IsMember({"json", "table"}));
        }
        return cmd;
    };

    auto* classify_cmd = attach(app.add_subcommand("classify", "four-way class via the pair graph"));
    auto* decide_cmd = attach(app.add_subcommand("decide-ap", "Amoroso-Patt construction algorithm"));

    auto* preimage_cmd = attach(app.add_subcommand("preimage", "count preimages of a finite word"));
    std::string word_text;
    preimage_cmd->add_option("--word", word_text, "target word")->required();

    auto* witness_cmd = attach(app.add_subcommand("witness", "shortest word without preimage"));
    unsigned max_len = 12;
    witness_cmd->add_option("--max-len", max_len, "longest word to search")->check(CLI::Range(1u, 64u));

    auto* evolve_cmd = attach(app.add_subcommand("evolve", "apply the rule to a finite or circular word"));
    std::string input_text;
    unsigned steps = 1;
    bool circular = false;
    evolve_cmd->add_option("--input", input_text, "input word")->required();
    evolve_cmd->add_option("--steps", steps, "number of applications")->check(CLI::Range(1u, 100000u));
    evolve_cmd->add_flag("--circular", circular, "treat the input as a circular word");

    std::vector<unsigned> m_values;
    std::optional<unsigned> k_min, k_max;
    std::optional<std::string> k_set;
    unsigned budget_log2 = default_budget_log2();
    unsigned jobs = 0;
    std::optional<std::string> checkpoint_path;
    std::string mode = "recomputed";

    auto add_k_flags = [&](CLI::App* cmd) {
        cmd->add_option("--k-min", k_min, "smallest period k");
        cmd->add_option("--k-max", k_max, "largest period k");
        cmd->add_option("--k-set", k_set, "explicit k values, e.g. 10,12,14-16");
        cmd->add_option("--budget-log2", budget_log2, "largest configuration space 2^b (env CELLAUT_BUDGET_LOG2)")
            ->check(CLI::Range(1u, 32u));
        cmd->add_option("--jobs", jobs, "worker threads (default: all cores)");
        cmd->add_option("--orbit-mode", mode, "successor map storage")
            ->check(CLI::IsMember({"recomputed", "materialized"}));
    };

    auto* fdense_cmd = attach(app.add_subcommand("fdense", "m-density of the jointly periodic points"));
    fdense_cmd->add_option("--m", m_values, "word length(s) m")->required()->check(CLI::Range(1u, 32u));
    fdense_cmd->add_option("--checkpoint", checkpoint_path, "append-only JSONL checkpoint for resuming");
    add_k_flags(fdense_cmd);

    auto* vstat_cmd = attach(app.add_subcommand("vstat", "V_k = P^(1/k) per period"));
    add_k_flags(vstat_cmd);

    auto* enumerate_cmd = app.add_subcommand("enumerate", "sweep a rule space and classify");
    SweepSpec sweep_spec;
    std::optional<std::string> first_text, last_text, list_file, shard_text;
    bool surjective_only = false;
    enumerate_cmd->add_option("--span", sweep_spec.span, "window width s")->check(CLI::Range(1u, 26u));
    enumerate_cmd->add_option("--alphabet", sweep_spec.alphabet_size, "alphabet size N")->check(CLI::Range(2u, 36u));
    enumerate_cmd->add_option("--first", first_text, "first rule number of the range");
    enumerate_cmd->add_option("--last", last_text, "last rule number of the range (inclusive)");
    enumerate_cmd->add_option("--list-file", list_file, "file of rule numbers, one per line");
    enumerate_cmd->add_option("--sample", sweep_spec.sample_count, "classify COUNT uniformly random rules");
    enumerate_cmd->add_option("--seed", sweep_spec.seed, "sampling seed");
    enumerate_cmd->add_option("--shard", shard_text, "shard i/n of the sequence");
    enumerate_cmd->add_option("--jobs", sweep_spec.jobs, "worker threads (default: all cores)");
    enumerate_cmd->add_flag("--surjective-only", surjective_only, "emit per-rule lines only for class >= 1");
    enumerate_cmd->add_option("--format", format, "output mode")->check(CLI::IsMember({"json", "table"}));

    auto* verify_cmd = app.add_subcommand("verify-list", "check that listed rule numbers are surjective");
    std::optional<std::string> verify_file;
    unsigned verify_span = 6;
    unsigned verify_alphabet = 2;
    verify_cmd->add_option("--file", verify_file, "rule list (default: bundled span-6 list)");
    verify_cmd->add_option("--span", verify_span, "window width s")->check(CLI::Range(1u, 26u));
    verify_cmd->add_option("--alphabet", verify_alphabet, "alphabet size N")->check(CLI::Range(2u, 36u));
    verify_cmd->add_option("--format", format, "output mode")->check(CLI::IsMember({"json", "table"}));

    auto* dfa_cmd = attach(app.add_subcommand("export-dfa", "subset construction from the full state set"), false);
    std::string dfa_format = "dot";
    dfa_cmd->add_option("--format", dfa_format, "output mode")->check(CLI::IsMember({"dot", "json"}));

    std::optional<std::string> data_dir;
    auto* table1_cmd = app.add_subcommand("repro-table1", "recompute the reference 10-/13-density cells");
    unsigned table1_k_max = 18;
    table1_cmd->add_option("--k-max", table1_k_max, "largest k to check")->check(CLI::Range(1u, 26u));
    table1_cmd->add_option("--data-dir", data_dir, "fixture directory");
    table1_cmd->add_option("--jobs", jobs, "worker threads (default: all cores)");
    table1_cmd->add_option("--format", format, "output mode")->check(CLI::IsMember({"json", "table"}));

    auto* table2_cmd = app.add_subcommand("repro-table2", "classify the 32 span-4 fixtures both ways");
    table2_cmd->add_option("--data-dir", data_dir, "fixture directory");
    table2_cmd->add_option("--format", format, "output mode")->check(CLI::IsMember({"json", "table"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    const bool json_mode = format == "json";

    std::mutex out_mutex;
    auto emit = [&](const json& j) {
        std::lock_guard lock(out_mutex);
        out << j.dump() << "\n";
    };

    try {
        if (classify_cmd->parsed()) {
            RuleTable t = source.load();
            ClassifyDetail d = classify_detail(t);
            json j = {{"rule", to_decimal(rule_number_from_table(t))},
                      {"N", t.alphabet_size()},
                      {"span", t.span()},
                      {"class", static_cast<int>(d.result)},
                      {"class_name", class_name(d.result)}};
            if (d.result == CaClass::open) {
                j["openness_criterion"] = "ClassifyCA";
            }
            if (json_mode) {
                emit(j);
            } else {
                out << "rule " << to_decimal(rule_number_from_table(t)) << " (N=" << t.alphabet_size()
                    << ", span=" << t.span() << "): " << static_cast<int>(d.result) << " " << class_name(d.result);
                if (d.result == CaClass::open) {
                    out << " (per ClassifyCA source)";
                }
                out << "\n  balanced=" << d.balanced << " states=" << d.state_count
                    << " pair_vertices=" << d.pair_vertex_count << " components=" << d.component_count
                    << " nontrivial=" << d.nontrivial_count << "\n";
            }
            return 0;
        }
        if (decide_cmd->parsed()) {
            RuleTable t = source.load();
            SurjectivityVerdict v = decide_surjective(t);
            json j = {{"rule", to_decimal(rule_number_from_table(t))}, {"surjective", v.surjective}};
            if (v.witness) {
                j["witness"] = format_word(*v.witness);
            }
            if (json_mode) {
                emit(j);
            } else {
                out << (v.surjective ? "surjective" : "not surjective");
                if (v.witness) {
                    out << ", no preimage for " << format_word(*v.witness);
                }
                out << " (" << v.distinct_sets << " distinct window sets)\n";
            }
            return 0;
        }
        if (preimage_cmd->parsed()) {
            RuleTable t = source.load();
            Word w = parse_word(word_text, t.alphabet_size());
            if (w.empty()) {
                throw usage_error("--word must be non-empty");
            }
            BigInt count = preimage_count(t, w);
            if (json_mode) {
                emit({{"rule", to_decimal(rule_number_from_table(t))}, {"word", word_text}, {"count", big_json(count)}});
            } else {
                out << word_text << ": " << to_decimal(count) << " preimages\n";
            }
            return 0;
        }
        if (witness_cmd->parsed()) {
            RuleTable t = source.load();
            auto w = find_witness_word(t, max_len);
            if (json_mode) {
                json j = {{"rule", to_decimal(rule_number_from_table(t))}, {"max_len", max_len}};
                j["witness"] = w ? json(format_word(*w)) : json(nullptr);
                emit(j);
            } else {
                out << (w ? format_word(*w) : std::string("none up to length ") + std::to_string(max_len)) << "\n";
            }
            return 0;
        }
        if (evolve_cmd->parsed()) {
            RuleTable t = source.load();
            Word w = parse_word(input_text, t.alphabet_size());
            for (unsigned i = 0; i < steps; ++i) {
                w = circular ? evolve_circular(t, w) : evolve_finite(t, w);
            }
            if (json_mode) {
                emit({{"rule", to_decimal(rule_number_from_table(t))},
                      {"input", input_text},
                      {"steps", steps},
                      {"circular", circular},
                      {"output", format_word(w)}});
            } else {
                out << format_word(w) << "\n";
            }
            return 0;
        }
        if (fdense_cmd->parsed() || vstat_cmd->parsed()) {
            RuleTable t = source.load();
            std::vector<unsigned> ks = k_values(k_min, k_max, k_set);
            PeriodicOptions options;
            options.budget_log2 = budget_log2;
            options.jobs = jobs;
            options.mode = mode == "materialized" ? OrbitMode::materialized : OrbitMode::recomputed;
            const std::string rule_id = to_decimal(rule_number_from_table(t));

            if (fdense_cmd->parsed()) {
                std::optional<Checkpoint> checkpoint;
                if (checkpoint_path) {
                    checkpoint.emplace(*checkpoint_path, err);
                }
                fdense_report(t, rule_id, m_values, ks, checkpoint ? &*checkpoint : nullptr, options,
                              [&](const DensityReport& r) {
                                  if (json_mode) {
                                      emit(report_to_json(r));
                                  } else {
                                      out << density_row(r) << "\n";
                                  }
                              });
                return 0;
            }
            VStatSummary summary = v_statistic(t, ks, options);
            int status = 0;
            for (const auto& e : summary.entries) {
                if (!e.error.empty()) {
                    err << "k=" << e.k << ": " << e.error << "\n";
                    status = 1;
                    continue;
                }
                if (json_mode) {
                    emit({{"rule", rule_id},
                          {"N", t.alphabet_size()},
                          {"span", t.span()},
                          {"k", e.k},
                          {"P", *e.periodic_count},
                          {"v_k", e.v_k}});
                } else {
                    out << "k=" << std::setw(2) << e.k << " P=" << std::setw(10) << *e.periodic_count
                        << " V_k=" << std::fixed << std::setprecision(6) << e.v_k << "\n";
                }
            }
            if (json_mode) {
                json s = {{"rule", rule_id}, {"summary", true}};
                s["max_v_k"] = summary.max_v ? json(*summary.max_v) : json(nullptr);
                emit(s);
            } else if (summary.max_v) {
                out << "max V_k = " << std::fixed << std::setprecision(6) << *summary.max_v << "\n";
            }
            return status;
        }
        if (enumerate_cmd->parsed()) {
            if (first_text) {
                sweep_spec.first = parse_decimal(*first_text);
            }
            if (last_text) {
                sweep_spec.last = parse_decimal(*last_text);
            }
            if (list_file) {
                for (const auto& line : read_rule_list(*list_file)) {
                    sweep_spec.rules.push_back(parse_decimal(line));
                }
            }
            if (shard_text) {
                auto slash = shard_text->find('/');
                if (slash == std::string::npos) {
                    throw usage_error("--shard expects i/n");
                }
                try {
                    sweep_spec.shard_index = static_cast<unsigned>(std::stoul(shard_text->substr(0, slash)));
                    sweep_spec.shard_total = static_cast<unsigned>(std::stoul(shard_text->substr(slash + 1)));
                } catch (const std::exception&) {
                    throw usage_error("--shard expects i/n");
                }
            }
            SurveyResult result = sweep(sweep_spec);
            for (const auto& r : result.records) {
                if (surjective_only && r.cls == CaClass::none) {
                    continue;
                }
                if (json_mode) {
                    emit({{"rule", big_json(r.rule)}, {"class", static_cast<int>(r.cls)}, {"class_name", class_name(r.cls)}});
                } else {
                    out << to_decimal(r.rule) << " " << class_name(r.cls) << "\n";
                }
            }
            json summary = {{"summary", true},
                            {"N", sweep_spec.alphabet_size},
                            {"span", sweep_spec.span},
                            {"total", result.total()},
                            {"counts",
                             {{"none", result.counts[0]},
                              {"surjective", result.counts[1]},
                              {"open", result.counts[2]},
                              {"injective", result.counts[3]}}},
                            {"surjective_count", result.surjective.size()},
                            {"shard", std::to_string(result.shard_index) + "/" + std::to_string(result.shard_total)},
                            {"seconds", result.seconds}};
            if (json_mode) {
                emit(summary);
            } else {
                out << "total " << result.total() << ": none " << result.counts[0] << ", surjective "
                    << result.counts[1] << ", open " << result.counts[2] << ", injective " << result.counts[3]
                    << "\n";
            }
            return 0;
        }
        if (verify_cmd->parsed()) {
            std::string path = verify_file.value_or(data_directory() + "/span6_surjective.txt");
            VerifyReport report = verify_list(read_rule_list(path), verify_alphabet, verify_span);
            for (const auto& item : report.items) {
                if (json_mode) {
                    json j = {{"rule", item.text}, {"pass", item.pass}};
                    if (item.cls) {
                        j["class"] = static_cast<int>(*item.cls);
                        j["class_name"] = class_name(*item.cls);
                    }
                    if (!item.error.empty()) {
                        j["error"] = item.error;
                    }
                    emit(j);
                } else {
                    out << std::setw(22) << item.text << " "
                        << (item.cls ? std::string(class_name(*item.cls)) : "error: " + item.error)
                        << (item.pass ? "" : "  <-- discrepancy") << "\n";
                }
            }
            if (json_mode) {
                emit({{"summary", true}, {"checked", report.items.size()}, {"discrepancies", report.discrepancies}});
            } else {
                out << report.items.size() << " checked, " << report.discrepancies << " discrepancies\n";
            }
            return report.discrepancies == 0 ? 0 : 1;
        }
        if (dfa_cmd->parsed()) {
            RuleTable t = source.load();
            SubsetDfa dfa = export_dfa(t);
            if (dfa_format == "dot") {
                out << to_dot(dfa);
            } else {
                json states = json::array();
                json transitions = json::array();
                for (std::uint32_t i = 0; i < dfa.states.size(); ++i) {
                    states.push_back(dfa.members(i));
                    for (unsigned b = 0; b < dfa.alphabet_size; ++b) {
                        const auto& target = dfa.transitions[std::size_t(i) * dfa.alphabet_size + b];
                        transitions.push_back({{"from", i}, {"symbol", b}, {"to", target ? json(*target) : json(nullptr)}});
                    }
                }
                emit({{"rule", to_decimal(rule_number_from_table(t))}, {"states", states}, {"transitions", transitions}});
            }
            return 0;
        }
        if (table1_cmd->parsed()) {
            std::string dir = data_dir.value_or(data_directory());
            PeriodicOptions options;
            options.jobs = jobs;
            auto rows = reproduce_table1(read_rule_list(dir + "/span4_maps.txt"),
                                         read_density_expectations(dir + "/span4_density_reference.txt"), table1_k_max, options);
            bool all = true;
            for (const auto& row : rows) {
                all = all && row.matches();
                if (json_mode) {
                    json expected = json::array(), observed = json::array();
                    for (std::size_t i = 0; i < row.k_values.size(); ++i) {
                        if (row.expected[i]) {
                            expected.push_back(row.k_values[i]);
                        }
                        if (row.observed[i]) {
                            observed.push_back(row.k_values[i]);
                        }
                    }
                    emit({{"map", row.map},
                          {"m", row.m},
                          {"k_max", table1_k_max},
                          {"expected_dense_k", expected},
                          {"observed_dense_k", observed},
                          {"match", row.matches()}});
                } else {
                    out << "map " << std::setw(2) << row.map << " m=" << row.m
                        << " expected " << k_summary(row.k_values, row.expected) << " observed "
                        << k_summary(row.k_values, row.observed) << (row.matches() ? "  ok" : "  MISMATCH") << "\n";
                }
            }
            return all ? 0 : 1;
        }
        if (table2_cmd->parsed()) {
            std::string dir = data_dir.value_or(data_directory());
            auto rows = reproduce_table2(read_rule_list(dir + "/span4_maps.txt"));
            bool all = true;
            for (const auto& row : rows) {
                all = all && row.passes();
                if (json_mode) {
                    emit({{"map", row.map},
                          {"tabular", row.tabular},
                          {"class", static_cast<int>(row.cls)},
                          {"class_name", class_name(row.cls)},
                          {"construction_surjective", row.construction_surjective},
                          {"pass", row.passes()}});
                } else {
                    out << "map " << std::setw(2) << row.map << "  " << row.tabular << "  " << class_name(row.cls)
                        << (row.passes() ? "" : "  FAIL") << "\n";
                }
            }
            return all ? 0 : 1;
        }
    } catch (const usage_error& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace cellaut::cli
