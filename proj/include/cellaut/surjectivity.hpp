#ifndef cellaut_surjectivity_hpp
#define cellaut_surjectivity_hpp

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cellaut/bigint.hpp"
#include "cellaut/rule.hpp"

namespace cellaut {

// Set of windows (packed s-tuples) as a bitmask.
using WindowSet = std::vector<std::uint64_t>;

enum class NodeStatus { extended, frontier, terminal };

// A node of the Amoroso-Patt construction graph.
struct SubsetNode {
    WindowSet members;
    unsigned level = 0;
    NodeStatus status = NodeStatus::extended;
    // Back pointer for witness extraction; root nodes have no parent.
    std::optional<std::uint32_t> parent;
    Symbol label = 0;
};

struct SurjectivityVerdict {
    bool surjective = true;
    // A word with no preimage; present iff not surjective.
    std::optional<Word> witness;
    // Distinct window sets met during the construction.
    std::size_t distinct_sets = 0;
};

/*
 * Amoroso-Patt construction algorithm. Level 0 holds, for every symbol b,
 * the windows mapped to b. A node's successor under a keeps the windows
 * a_2..a_s d (for a_1..a_s in the node) that map to a. Nodes repeating an
 * earlier set are frontier nodes and are not extended. A node with an empty
 * successor is terminal and proves non-surjectivity: the labels from its
 * root, followed by the offending symbol, spell a word without preimage.
 *
 * All roots share one breadth-first queue and one memo table, so the
 * witness is a shortest orphan word.
 */
SurjectivityVerdict decide_surjective(const RuleTable& table);

// Same construction, but returns the explored node list (bounded by max_nodes).
std::vector<SubsetNode> construction_graph(const RuleTable& table, std::size_t max_nodes = 1u << 20);

// Number of words of length |w| + s - 1 whose finite image is w (transfer matrix over (s-1)-grams).
BigInt preimage_count(const RuleTable& table, std::span<const Symbol> word);

// Shortest word of length <= max_len with no preimage, lexicographically least among the shortest.
std::optional<Word> find_witness_word(const RuleTable& table, unsigned max_len);

} // namespace cellaut

#endif
