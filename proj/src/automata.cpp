#include "cellaut/automata.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>

#include "cellaut/error.hpp"

namespace cellaut {

Semiautomaton::Semiautomaton(const RuleTable& table) : alphabet_size_(table.alphabet_size()) {
    if (table.span() < 2) {
        throw unsupported_error("semiautomaton needs span >= 2, got span " + std::to_string(table.span()));
    }
    std::uint64_t states = table.window_count() / alphabet_size_;
    if (states > (std::uint64_t(1) << 24)) {
        throw capacity_error("semiautomaton with " + std::to_string(states) + " states is too large");
    }
    state_count_ = static_cast<std::uint32_t>(states);
    target_.resize(table.window_count());
    output_.resize(table.window_count());
    // window index = u * N + a; its last s-1 cells are (u * N + a) mod N^(s-1)
    for (std::uint64_t w = 0; w < table.window_count(); ++w) {
        target_[w] = static_cast<std::uint32_t>(w % states);
        output_[w] = table[w];
    }
}

bool Digraph::has_edge(std::uint32_t from, std::uint32_t to) const {
    const auto& adj = out[from];
    return std::find(adj.begin(), adj.end(), to) != adj.end();
}

Digraph build_pair_graph(const Semiautomaton& sa) {
    const std::uint32_t n = sa.state_count();
    const unsigned alphabet = sa.alphabet_size();
    Digraph g;
    g.out.resize(std::size_t(n) * n);
    for (std::uint32_t u = 0; u < n; ++u) {
        for (std::uint32_t v = 0; v < n; ++v) {
            auto& adj = g.out[std::size_t(u) * n + v];
            for (unsigned a = 0; a < alphabet; ++a) {
                for (unsigned b = 0; b < alphabet; ++b) {
                    if (sa.output(u, Symbol(a)) == sa.output(v, Symbol(b))) {
                        adj.push_back(sa.target(u, Symbol(a)) * n + sa.target(v, Symbol(b)));
                    }
                }
            }
        }
    }
    return g;
}

std::size_t SccDecomposition::nontrivial_count() const {
    return static_cast<std::size_t>(std::count(trivial.begin(), trivial.end(), false));
}

SccDecomposition strongly_connected_components(const Digraph& graph) {
    const std::uint32_t n = graph.vertex_count();
    constexpr std::uint32_t unvisited = UINT32_MAX;

    std::vector<std::uint32_t> index(n, unvisited);
    std::vector<std::uint32_t> lowlink(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::uint32_t> stack;
    std::vector<std::uint32_t> raw_component(n, unvisited);
    std::uint32_t next_index = 0;
    std::uint32_t raw_count = 0;

    // explicit DFS frames: (vertex, next edge position)
    std::vector<std::pair<std::uint32_t, std::size_t>> frames;

    for (std::uint32_t root = 0; root < n; ++root) {
        if (index[root] != unvisited) {
            continue;
        }
        frames.emplace_back(root, 0);
        index[root] = lowlink[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;

        while (!frames.empty()) {
            auto& [v, edge] = frames.back();
            const auto& adj = graph.out[v];
            if (edge < adj.size()) {
                std::uint32_t w = adj[edge++];
                if (index[w] == unvisited) {
                    index[w] = lowlink[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    lowlink[v] = std::min(lowlink[v], index[w]);
                }
                continue;
            }
            std::uint32_t finished = v;
            frames.pop_back();
            if (!frames.empty()) {
                std::uint32_t parent = frames.back().first;
                lowlink[parent] = std::min(lowlink[parent], lowlink[finished]);
            }
            if (lowlink[finished] == index[finished]) {
                std::uint32_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    raw_component[w] = raw_count;
                } while (w != finished);
                ++raw_count;
            }
        }
    }

    // renumber by smallest contained vertex
    SccDecomposition scc;
    scc.component_of.assign(n, 0);
    std::vector<std::uint32_t> renumber(raw_count, unvisited);
    for (std::uint32_t v = 0; v < n; ++v) {
        std::uint32_t& id = renumber[raw_component[v]];
        if (id == unvisited) {
            id = static_cast<std::uint32_t>(scc.components.size());
            scc.components.emplace_back();
        }
        scc.component_of[v] = id;
        scc.components[id].push_back(v);
    }
    scc.trivial.resize(scc.components.size());
    for (std::size_t c = 0; c < scc.components.size(); ++c) {
        const auto& members = scc.components[c];
        scc.trivial[c] = members.size() == 1 && !graph.has_edge(members[0], members[0]);
    }
    return scc;
}

Digraph condensation(const Digraph& graph, const SccDecomposition& scc) {
    Digraph h;
    h.out.resize(scc.components.size());
    for (std::uint32_t v = 0; v < graph.vertex_count(); ++v) {
        std::uint32_t cv = scc.component_of[v];
        for (std::uint32_t w : graph.out[v]) {
            std::uint32_t cw = scc.component_of[w];
            if (cv != cw) {
                h.out[cv].push_back(cw);
            }
        }
    }
    for (auto& adj : h.out) {
        std::sort(adj.begin(), adj.end());
        adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    }
    return h;
}

std::string_view class_name(CaClass c) {
    switch (c) {
    case CaClass::none:
        return "none";
    case CaClass::surjective:
        return "surjective";
    case CaClass::open:
        return "open";
    case CaClass::injective:
        return "injective";
    }
    return "unknown";
}

namespace {

std::vector<bool> closure(const Digraph& g, const std::vector<std::uint32_t>& sources) {
    std::vector<bool> seen(g.vertex_count(), false);
    std::vector<std::uint32_t> work;
    for (auto s : sources) {
        if (!seen[s]) {
            seen[s] = true;
            work.push_back(s);
        }
    }
    while (!work.empty()) {
        auto v = work.back();
        work.pop_back();
        for (auto w : g.out[v]) {
            if (!seen[w]) {
                seen[w] = true;
                work.push_back(w);
            }
        }
    }
    return seen;
}

Digraph reversed(const Digraph& g) {
    Digraph r;
    r.out.resize(g.vertex_count());
    for (std::uint32_t v = 0; v < g.vertex_count(); ++v) {
        for (auto w : g.out[v]) {
            r.out[w].push_back(v);
        }
    }
    return r;
}

bool is_symbol_bijection(const RuleTable& table) {
    std::vector<bool> hit(table.alphabet_size(), false);
    for (Symbol a : table.table()) {
        if (hit[a]) {
            return false;
        }
        hit[a] = true;
    }
    return true;
}

} // namespace

ClassifyDetail classify_detail(const RuleTable& table, bool skip_balance_check) {
    ClassifyDetail detail;
    detail.balanced = is_balanced(table);

    if (table.span() == 1) {
        // pointwise symbol map: balanced exactly when bijective
        detail.state_count = 1;
        detail.result = is_symbol_bijection(table) ? CaClass::injective : CaClass::none;
        return detail;
    }
    if (!detail.balanced && !skip_balance_check) {
        return detail;
    }

    Semiautomaton sa(table);
    const std::uint32_t n = sa.state_count();
    detail.state_count = n;
    Digraph pairs = build_pair_graph(sa);
    detail.pair_vertex_count = pairs.vertex_count();

    SccDecomposition scc = strongly_connected_components(pairs);
    detail.component_count = scc.components.size();
    detail.nontrivial_count = scc.nontrivial_count();

    const std::uint32_t diag = scc.component_of[0];
    detail.diagonal_component_size = scc.components[diag].size();
    if (detail.diagonal_component_size != n) {
        detail.result = CaClass::none;
        return detail;
    }
    detail.diagonal_in_one_component = true;
    for (std::uint32_t u = 0; u < n; ++u) {
        if (scc.component_of[std::size_t(u) * n + u] != diag) {
            detail.diagonal_in_one_component = false;
        }
    }
    if (!detail.diagonal_in_one_component) {
        throw std::logic_error("diagonal component has n vertices but does not hold every diagonal pair");
    }

    if (detail.nontrivial_count == 1) {
        detail.result = CaClass::injective;
        return detail;
    }

    Digraph h = condensation(pairs, scc);
    std::vector<std::uint32_t> nontrivial;
    for (std::uint32_t c = 0; c < scc.components.size(); ++c) {
        if (!scc.trivial[c]) {
            nontrivial.push_back(c);
        }
    }
    std::vector<bool> forward = closure(h, nontrivial);
    std::vector<bool> backward = closure(reversed(h), nontrivial);
    auto in_core = [&](std::uint32_t c) { return forward[c] && backward[c]; };

    std::size_t degree = 0;
    if (in_core(diag)) {
        for (auto w : h.out[diag]) {
            degree += in_core(w) ? 1 : 0;
        }
        for (std::uint32_t c = 0; c < h.vertex_count(); ++c) {
            if (c != diag && in_core(c) && std::binary_search(h.out[c].begin(), h.out[c].end(), diag)) {
                ++degree;
            }
        }
    }
    detail.diagonal_degree_in_core = degree;
    detail.result = degree == 0 ? CaClass::open : CaClass::surjective;
    return detail;
}

CaClass classify(const RuleTable& table) {
    return classify_detail(table).result;
}

Permutivity is_permutive(const RuleTable& table) {
    const unsigned n = table.alphabet_size();
    const std::uint64_t rest = table.window_count() / n;  // N^(s-1)
    Permutivity p{true, true};
    std::vector<bool> hit(n);
    // left: window = a * N^(s-1) + tail
    for (std::uint64_t tail = 0; tail < rest && p.left; ++tail) {
        std::fill(hit.begin(), hit.end(), false);
        for (unsigned a = 0; a < n; ++a) {
            Symbol out = table[a * rest + tail];
            if (hit[out]) {
                p.left = false;
                break;
            }
            hit[out] = true;
        }
    }
    // right: window = head * N + a
    for (std::uint64_t head = 0; head < rest && p.right; ++head) {
        std::fill(hit.begin(), hit.end(), false);
        for (unsigned a = 0; a < n; ++a) {
            Symbol out = table[head * n + a];
            if (hit[out]) {
                p.right = false;
                break;
            }
            hit[out] = true;
        }
    }
    return p;
}

std::vector<std::uint32_t> SubsetDfa::members(std::uint32_t dfa_state) const {
    std::vector<std::uint32_t> out;
    const auto& set = states[dfa_state];
    for (std::uint32_t u = 0; u < nfa_state_count; ++u) {
        if ((set[u / 64] >> (u % 64)) & 1u) {
            out.push_back(u);
        }
    }
    return out;
}

std::string SubsetDfa::label(std::uint32_t dfa_state) const {
    std::string out = "{";
    bool first = true;
    for (auto u : members(dfa_state)) {
        if (!first) {
            out += ", ";
        }
        first = false;
        out += "u" + std::to_string(u);
    }
    return out + "}";
}

SubsetDfa export_dfa(const RuleTable& table, std::size_t max_states) {
    Semiautomaton sa(table);
    const std::uint32_t n = sa.state_count();
    const unsigned alphabet = sa.alphabet_size();
    const std::size_t words = (n + 63) / 64;

    SubsetDfa dfa;
    dfa.alphabet_size = alphabet;
    dfa.nfa_state_count = n;
    dfa.state_length = table.span() - 1;

    SubsetDfa::StateSet full(words, 0);
    for (std::uint32_t u = 0; u < n; ++u) {
        full[u / 64] |= std::uint64_t(1) << (u % 64);
    }
    std::map<SubsetDfa::StateSet, std::uint32_t> seen;
    seen.emplace(full, 0);
    dfa.states.push_back(full);

    for (std::uint32_t i = 0; i < dfa.states.size(); ++i) {
        for (unsigned b = 0; b < alphabet; ++b) {
            SubsetDfa::StateSet next(words, 0);
            bool empty = true;
            for (std::uint32_t u = 0; u < n; ++u) {
                if (!((dfa.states[i][u / 64] >> (u % 64)) & 1u)) {
                    continue;
                }
                for (unsigned a = 0; a < alphabet; ++a) {
                    if (sa.output(u, Symbol(a)) == b) {
                        std::uint32_t v = sa.target(u, Symbol(a));
                        next[v / 64] |= std::uint64_t(1) << (v % 64);
                        empty = false;
                    }
                }
            }
            if (empty) {
                dfa.transitions.push_back(std::nullopt);
                continue;
            }
            auto [it, inserted] = seen.emplace(next, static_cast<std::uint32_t>(dfa.states.size()));
            if (inserted) {
                if (dfa.states.size() >= max_states) {
                    throw capacity_error("subset construction exceeded " + std::to_string(max_states) + " states");
                }
                dfa.states.push_back(std::move(next));
            }
            dfa.transitions.push_back(it->second);
        }
    }
    return dfa;
}

std::string to_dot(const SubsetDfa& dfa) {
    std::ostringstream out;
    out << "digraph subset_dfa {\n";
    out << "  rankdir=LR;\n";
    out << "  // u<i> is the state holding (s-1)-gram i, most significant cell first\n";
    for (std::uint32_t i = 0; i < dfa.states.size(); ++i) {
        out << "  s" << i << " [label=\"" << dfa.label(i) << "\"" << (i == 0 ? ", shape=doublecircle" : "")
            << "];\n";
    }
    for (std::uint32_t i = 0; i < dfa.states.size(); ++i) {
        for (unsigned b = 0; b < dfa.alphabet_size; ++b) {
            const auto& t = dfa.transitions[std::size_t(i) * dfa.alphabet_size + b];
            if (t) {
                out << "  s" << i << " -> s" << *t << " [label=\"" << b << "\"];\n";
            }
        }
    }
    out << "}\n";
    return out.str();
}

} // namespace cellaut
