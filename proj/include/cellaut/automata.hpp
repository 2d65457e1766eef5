#ifndef cellaut_automata_hpp
#define cellaut_automata_hpp

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cellaut/rule.hpp"

namespace cellaut {

/*
 * De Bruijn semiautomaton of a rule of span s >= 2. States are the packed
 * (s-1)-grams; reading symbol a from state u follows the window u.a to the
 * state holding its last s-1 cells and emits F(u.a).
 */
class Semiautomaton {
public:
    explicit Semiautomaton(const RuleTable& table);

    unsigned alphabet_size() const { return alphabet_size_; }
    std::uint32_t state_count() const { return state_count_; }

    std::uint32_t target(std::uint32_t state, Symbol a) const { return target_[state * alphabet_size_ + a]; }
    Symbol output(std::uint32_t state, Symbol a) const { return output_[state * alphabet_size_ + a]; }

private:
    unsigned alphabet_size_;
    std::uint32_t state_count_;
    std::vector<std::uint32_t> target_;
    std::vector<Symbol> output_;
};

// Plain adjacency-list digraph.
struct Digraph {
    std::vector<std::vector<std::uint32_t>> out;

    std::uint32_t vertex_count() const { return static_cast<std::uint32_t>(out.size()); }
    bool has_edge(std::uint32_t from, std::uint32_t to) const;
};

/*
 * Product of the semiautomaton with itself: vertex (u, v) has index
 * u * n + v, and (u, v) -> (u', v') whenever u -> u' and v -> v' carry the
 * same output symbol.
 */
Digraph build_pair_graph(const Semiautomaton& sa);

struct SccDecomposition {
    // Components are numbered in order of their smallest vertex.
    std::vector<std::uint32_t> component_of;
    std::vector<std::vector<std::uint32_t>> components;
    // A component is trivial when it is a single vertex without a self-loop.
    std::vector<bool> trivial;

    std::size_t nontrivial_count() const;
};

// Tarjan's algorithm, iterative.
SccDecomposition strongly_connected_components(const Digraph& graph);

// Acyclic graph on components with deduplicated edges.
Digraph condensation(const Digraph& graph, const SccDecomposition& scc);

enum class CaClass : int { none = 0, surjective = 1, open = 2, injective = 3 };

std::string_view class_name(CaClass c);

// Intermediate data of a classification, for reports and tests.
struct ClassifyDetail {
    CaClass result = CaClass::none;
    bool balanced = false;
    std::uint32_t state_count = 0;
    std::uint32_t pair_vertex_count = 0;
    std::size_t component_count = 0;
    std::size_t nontrivial_count = 0;
    std::size_t diagonal_component_size = 0;
    // Only meaningful when the diagonal component has exactly state_count vertices.
    bool diagonal_in_one_component = false;
    std::size_t diagonal_degree_in_core = 0;
};

/*
 * Four-way classification through the pair graph:
 *   unbalanced                                         -> none
 *   component of (0,0) does not have exactly n vertices -> none
 *   exactly one non-trivial component                  -> injective
 *   diagonal isolated in the core of the condensation  -> open
 *   otherwise                                          -> surjective
 * where the core is the part of the condensation both reachable from and
 * co-reachable to non-trivial components. The openness step mirrors
 * Sutner's ClassifyCA and is not independently validated beyond permutive rules.
 *
 * skip_balance_check runs the graph pipeline on unbalanced rules too.
 */
ClassifyDetail classify_detail(const RuleTable& table, bool skip_balance_check = false);

CaClass classify(const RuleTable& table);

struct Permutivity {
    bool left = false;
    bool right = false;
};

Permutivity is_permutive(const RuleTable& table);

/*
 * Subset construction on the semiautomaton read as an NFA over output
 * symbols, starting from the set of all states. Subsets are bitmasks over
 * states, with bit i for state u_i.
 */
struct SubsetDfa {
    using StateSet = std::vector<std::uint64_t>;

    unsigned alphabet_size = 0;
    std::uint32_t nfa_state_count = 0;
    unsigned state_length = 0;
    std::vector<StateSet> states;  // states[0] is the full set
    // transitions[i * alphabet_size + b]; nullopt when the successor is empty
    std::vector<std::optional<std::uint32_t>> transitions;

    std::vector<std::uint32_t> members(std::uint32_t dfa_state) const;
    // "{u0, u1, u3}"
    std::string label(std::uint32_t dfa_state) const;
};

// Throws capacity_error when more than max_states subsets are reached.
SubsetDfa export_dfa(const RuleTable& table, std::size_t max_states = 1u << 20);

// Graphviz text; nodes are subsets, edges labeled by output symbol, empty successors omitted.
std::string to_dot(const SubsetDfa& dfa);

} // namespace cellaut

#endif
