#include "cellaut/surjectivity.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

#include "cellaut/automata.hpp"
#include "cellaut/error.hpp"

namespace cellaut {

namespace {

struct WindowSetHash {
    std::size_t operator()(const WindowSet& set) const {
        std::size_t h = 0x9e3779b97f4a7c15ull;
        for (auto word : set) {
            h ^= word + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    }
};

void set_bit(WindowSet& set, std::uint64_t i) {
    set[i / 64] |= std::uint64_t(1) << (i % 64);
}

bool is_empty(const WindowSet& set) {
    return std::all_of(set.begin(), set.end(), [](std::uint64_t w) { return w == 0; });
}

// Precomputed successor pieces: extension[u * N + a] is the set of windows
// u.d with F(u.d) = a, for (s-1)-gram u.
class Construction {
public:
    explicit Construction(const RuleTable& table)
        : table_(table),
          alphabet_(table.alphabet_size()),
          windows_(table.window_count()),
          states_(windows_ / alphabet_),
          words_((windows_ + 63) / 64) {
        if (table.span() < 2) {
            throw unsupported_error("construction algorithm needs span >= 2");
        }
        extension_.assign(states_ * alphabet_, WindowSet(words_, 0));
        for (std::uint64_t w = 0; w < windows_; ++w) {
            std::uint64_t prefix = w / alphabet_;
            set_bit(extension_[prefix * alphabet_ + table[w]], w);
        }
    }

    WindowSet root(Symbol b) const {
        WindowSet set(words_, 0);
        for (std::uint64_t w = 0; w < windows_; ++w) {
            if (table_[w] == b) {
                set_bit(set, w);
            }
        }
        return set;
    }

    WindowSet successor(const WindowSet& node, Symbol a) const {
        // collect the distinct suffix states first
        std::vector<bool> suffix(states_, false);
        for (std::size_t i = 0; i < words_; ++i) {
            std::uint64_t bits = node[i];
            while (bits) {
                unsigned b = static_cast<unsigned>(__builtin_ctzll(bits));
                bits &= bits - 1;
                suffix[(i * 64 + b) % states_] = true;
            }
        }
        WindowSet next(words_, 0);
        for (std::uint64_t u = 0; u < states_; ++u) {
            if (suffix[u]) {
                const auto& ext = extension_[u * alphabet_ + a];
                for (std::size_t i = 0; i < words_; ++i) {
                    next[i] |= ext[i];
                }
            }
        }
        return next;
    }

    unsigned alphabet() const { return alphabet_; }

private:
    const RuleTable& table_;
    unsigned alphabet_;
    std::uint64_t windows_;
    std::uint64_t states_;
    std::size_t words_;
    std::vector<WindowSet> extension_;
};

Word label_path(const std::vector<SubsetNode>& nodes, std::uint32_t index) {
    Word word;
    std::optional<std::uint32_t> at = index;
    while (at) {
        word.push_back(nodes[*at].label);
        at = nodes[*at].parent;
    }
    std::reverse(word.begin(), word.end());
    return word;
}

// Runs the construction; stops at the first terminal node when stop_at_terminal.
std::vector<SubsetNode> run_construction(const RuleTable& table, bool stop_at_terminal, std::size_t max_nodes,
                                         std::optional<Word>& witness, std::size_t& distinct) {
    Construction c(table);
    std::vector<SubsetNode> nodes;
    std::unordered_map<WindowSet, std::uint32_t, WindowSetHash> seen;
    std::deque<std::uint32_t> queue;

    auto add = [&](WindowSet set, unsigned level, std::optional<std::uint32_t> parent, Symbol label) {
        if (nodes.size() >= max_nodes) {
            throw capacity_error("construction graph exceeded " + std::to_string(max_nodes) + " nodes");
        }
        auto index = static_cast<std::uint32_t>(nodes.size());
        auto [it, inserted] = seen.emplace(set, index);
        SubsetNode node{std::move(set), level, inserted ? NodeStatus::extended : NodeStatus::frontier, parent, label};
        nodes.push_back(std::move(node));
        if (inserted) {
            queue.push_back(index);
        }
    };

    for (unsigned b = 0; b < c.alphabet(); ++b) {
        WindowSet r = c.root(Symbol(b));
        if (is_empty(r)) {
            // a symbol never produced: the single-letter word is an orphan
            witness = Word{Symbol(b)};
            distinct = seen.size();
            return nodes;
        }
        add(std::move(r), 0, std::nullopt, Symbol(b));
    }

    while (!queue.empty()) {
        std::uint32_t i = queue.front();
        queue.pop_front();
        for (unsigned a = 0; a < c.alphabet(); ++a) {
            WindowSet next = c.successor(nodes[i].members, Symbol(a));
            if (is_empty(next)) {
                nodes[i].status = NodeStatus::terminal;
                if (!witness) {
                    Word w = label_path(nodes, i);
                    w.push_back(Symbol(a));
                    witness = std::move(w);
                }
                if (stop_at_terminal) {
                    distinct = seen.size();
                    return nodes;
                }
                continue;
            }
            add(std::move(next), nodes[i].level + 1, i, Symbol(a));
        }
    }
    distinct = seen.size();
    return nodes;
}

} // namespace

SurjectivityVerdict decide_surjective(const RuleTable& table) {
    SurjectivityVerdict verdict;
    std::optional<Word> witness;
    std::size_t distinct = 0;
    // the memo bounds the node count by N * (distinct sets + 1)
    run_construction(table, true, SIZE_MAX, witness, distinct);
    verdict.distinct_sets = distinct;
    verdict.surjective = !witness.has_value();
    verdict.witness = std::move(witness);
    return verdict;
}

std::vector<SubsetNode> construction_graph(const RuleTable& table, std::size_t max_nodes) {
    std::optional<Word> witness;
    std::size_t distinct = 0;
    return run_construction(table, false, max_nodes, witness, distinct);
}

BigInt preimage_count(const RuleTable& table, std::span<const Symbol> word) {
    const unsigned n = table.alphabet_size();
    for (Symbol a : word) {
        if (a >= n) {
            throw encoding_error("symbol " + std::to_string(a) + " outside alphabet");
        }
    }
    if (table.span() == 1) {
        BigInt count = 1;
        for (Symbol b : word) {
            count *= static_cast<unsigned>(std::count(table.table().begin(), table.table().end(), b));
        }
        return count;
    }
    Semiautomaton sa(table);
    const std::uint32_t states = sa.state_count();
    // paths through the semiautomaton spelling the word, by end state
    std::vector<BigInt> count(states, 1);
    std::vector<BigInt> next(states);
    for (Symbol b : word) {
        std::fill(next.begin(), next.end(), 0);
        for (std::uint32_t u = 0; u < states; ++u) {
            if (count[u] == 0) {
                continue;
            }
            for (unsigned a = 0; a < n; ++a) {
                if (sa.output(u, Symbol(a)) == b) {
                    next[sa.target(u, Symbol(a))] += count[u];
                }
            }
        }
        count.swap(next);
    }
    BigInt total = 0;
    for (const auto& c : count) {
        total += c;
    }
    return total;
}

std::optional<Word> find_witness_word(const RuleTable& table, unsigned max_len) {
    if (max_len == 0) {
        return std::nullopt;
    }
    if (table.span() == 1) {
        for (unsigned b = 0; b < table.alphabet_size(); ++b) {
            if (std::find(table.table().begin(), table.table().end(), Symbol(b)) == table.table().end()) {
                return Word{Symbol(b)};
            }
        }
        return std::nullopt;
    }
    Semiautomaton sa(table);
    const std::uint32_t states = sa.state_count();
    const unsigned n = sa.alphabet_size();
    using StateSet = std::vector<bool>;

    // BFS over reachable subsets of states, symbols in ascending order
    std::map<StateSet, Word> seen;
    std::deque<const std::pair<const StateSet, Word>*> queue;
    auto [root, _] = seen.emplace(StateSet(states, true), Word{});
    queue.push_back(&*root);

    while (!queue.empty()) {
        const auto* entry = queue.front();
        queue.pop_front();
        const StateSet& set = entry->first;
        const Word& prefix = entry->second;
        if (prefix.size() >= max_len) {
            break;
        }
        for (unsigned b = 0; b < n; ++b) {
            StateSet next(states, false);
            bool empty = true;
            for (std::uint32_t u = 0; u < states; ++u) {
                if (!set[u]) {
                    continue;
                }
                for (unsigned a = 0; a < n; ++a) {
                    if (sa.output(u, Symbol(a)) == b) {
                        next[sa.target(u, Symbol(a))] = true;
                        empty = false;
                    }
                }
            }
            Word word = prefix;
            word.push_back(Symbol(b));
            if (empty) {
                return word;
            }
            auto [it, inserted] = seen.emplace(std::move(next), std::move(word));
            if (inserted) {
                queue.push_back(&*it);
            }
        }
    }
    return std::nullopt;
}

} // namespace cellaut
