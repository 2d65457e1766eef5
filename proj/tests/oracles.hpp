#ifndef cellaut_tests_oracles_hpp
#define cellaut_tests_oracles_hpp

// Brute-force reference implementations, deliberately naive.

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "cellaut/rule.hpp"

namespace oracle {

using cellaut::RuleTable;
using cellaut::Symbol;
using cellaut::Word;

inline std::uint64_t ipow(std::uint64_t b, unsigned e) {
    std::uint64_t r = 1;
    while (e--) {
        r *= b;
    }
    return r;
}

inline Word word_of(std::uint64_t index, unsigned length, unsigned n) {
    Word w(length);
    for (unsigned i = length; i-- > 0;) {
        w[i] = Symbol(index % n);
        index /= n;
    }
    return w;
}

inline Symbol local(const RuleTable& t, const Word& x, std::size_t at, bool circular) {
    std::uint64_t w = 0;
    for (unsigned j = 0; j < t.span(); ++j) {
        w = w * t.alphabet_size() + x[circular ? (at + j) % x.size() : at + j];
    }
    return t.table()[w];
}

inline Word step_circular(const RuleTable& t, const Word& x) {
    Word y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] = local(t, x, i, true);
    }
    return y;
}

inline Word step_finite(const RuleTable& t, const Word& x) {
    Word y;
    for (std::size_t i = 0; i + t.span() <= x.size(); ++i) {
        y.push_back(local(t, x, i, false));
    }
    return y;
}

// Circular words of length k lying on a cycle of f: iterate up to N^k times looking for a return.
inline std::vector<std::uint64_t> periodic_points(const RuleTable& t, unsigned k) {
    const unsigned n = t.alphabet_size();
    const std::uint64_t size = ipow(n, k);
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 0; i < size; ++i) {
        Word x = word_of(i, k, n);
        Word y = x;
        for (std::uint64_t step = 0; step < size; ++step) {
            y = step_circular(t, y);
            if (y == x) {
                out.push_back(i);
                break;
            }
        }
    }
    return out;
}

// Same set, walking each orbit only until its first repeated state.
inline std::vector<std::uint64_t> periodic_points_rho(const RuleTable& t, unsigned k) {
    const unsigned n = t.alphabet_size();
    const std::uint64_t size = ipow(n, k);
    std::vector<std::uint64_t> out;
    std::set<Word> walk;
    for (std::uint64_t i = 0; i < size; ++i) {
        const Word x = word_of(i, k, n);
        walk.clear();
        Word y = x;
        while (walk.insert(y).second) {
            y = step_circular(t, y);
        }
        if (y == x) {
            out.push_back(i);
        }
    }
    return out;
}

inline std::uint64_t preimages(const RuleTable& t, const Word& w) {
    const unsigned len = static_cast<unsigned>(w.size()) + t.span() - 1;
    std::uint64_t count = 0;
    for (std::uint64_t i = 0; i < ipow(t.alphabet_size(), len); ++i) {
        if (step_finite(t, word_of(i, len, t.alphabet_size())) == w) {
            ++count;
        }
    }
    return count;
}

// Injective on every circular word length up to max_k.
inline bool circular_bijection(const RuleTable& t, unsigned max_k) {
    for (unsigned k = 1; k <= max_k; ++k) {
        std::set<Word> images;
        for (std::uint64_t i = 0; i < ipow(t.alphabet_size(), k); ++i) {
            if (!images.insert(step_circular(t, word_of(i, k, t.alphabet_size()))).second) {
                return false;
            }
        }
    }
    return true;
}

// Changing the cell at position `cell` always changes the output (for every context).
inline bool permutive_at(const RuleTable& t, unsigned cell) {
    const unsigned n = t.alphabet_size();
    for (std::uint64_t w = 0; w < t.window_count(); ++w) {
        Word x = word_of(w, t.span(), n);
        std::set<Symbol> outputs;
        for (unsigned a = 0; a < n; ++a) {
            x[cell] = Symbol(a);
            std::uint64_t idx = 0;
            for (Symbol c : x) {
                idx = idx * n + c;
            }
            outputs.insert(t.table()[idx]);
        }
        if (outputs.size() != n) {
            return false;
        }
    }
    return true;
}

// Every cyclic m-window of every periodic point.
inline std::set<Word> windows_of(const std::vector<std::uint64_t>& points, unsigned n, unsigned k, unsigned m) {
    std::set<Word> seen;
    for (auto p : points) {
        Word x = word_of(p, k, n);
        for (unsigned i = 0; i < k; ++i) {
            Word w;
            for (unsigned j = 0; j < m; ++j) {
                w.push_back(x[(i + j) % k]);
            }
            seen.insert(w);
        }
    }
    return seen;
}

inline RuleTable random_rule(std::mt19937_64& rng, unsigned n, unsigned span) {
    std::vector<Symbol> t(ipow(n, span));
    std::uniform_int_distribution<unsigned> d(0, n - 1);
    for (auto& e : t) {
        e = Symbol(d(rng));
    }
    return RuleTable(n, span, std::move(t));
}

} // namespace oracle

#endif
