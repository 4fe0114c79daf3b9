#pragma once

#include <string>
#include <vector>

#include "wsim/automaton.hh"
#include "wsim/tree.hh"

namespace wsim::test {

inline std::string fixture(const std::string& name) {
    return std::string(WSIM_FIXTURE_DIR) + "/" + name;
}

inline Weight pt(long num, long den = 1) {
    return Weight::rational(SemiringKind::PlusTimes, mpq_class(num, den));
}

inline Weight mp(long num, long den = 1) {
    return Weight::rational(SemiringKind::MaxPlus, mpq_class(num, den));
}

inline Weight bw(bool b) { return Weight::boolean(b); }

struct Trans {
    std::string symbol;
    int src;
    int dst;
    Weight weight;
};

inline WeightedAutomaton make_automaton(SemiringKind kind, int states,
                                        std::vector<std::string> alphabet,
                                        const std::vector<std::pair<int, Weight>>& initial,
                                        const std::vector<std::pair<int, Weight>>& final,
                                        const std::vector<Trans>& transitions) {
    WeightedAutomaton a(kind, states, std::move(alphabet));
    for (const auto& [q, w] : initial) a.initial.set(0, q, w);
    for (const auto& [q, w] : final) a.final.set(q, 0, w);
    for (const auto& t : transitions) {
        int s = a.symbol_index(t.symbol);
        a.transitions.at(static_cast<std::size_t>(s)).set(t.src, t.dst, t.weight);
    }
    return a;
}

/// The two-state / one-state plus-times pair whose unique forward witness
/// is (1 1) and whose largest backward witness is (1; 2).
inline WeightedAutomaton collapse_a() {
    return make_automaton(SemiringKind::PlusTimes, 2, {"a"}, {{0, pt(1)}},
                          {{0, pt(1, 4)}, {1, pt(1, 8)}},
                          {{"a", 0, 0, pt(1, 8)},
                           {"a", 0, 1, pt(1, 4)},
                           {"a", 1, 0, pt(1, 2)},
                           {"a", 1, 1, pt(3, 8)}});
}

inline WeightedAutomaton collapse_b() {
    return make_automaton(SemiringKind::PlusTimes, 1, {"a"}, {{0, pt(1)}}, {{0, pt(3, 8)}},
                          {{"a", 0, 0, pt(5, 8)}});
}

/// Equal languages but no forward or backward simulation in either
/// direction: two crossed two-cycles behind an a/b branch.
inline WeightedAutomaton crossed_loops_a() {
    return make_automaton(SemiringKind::PlusTimes, 4, {"a", "b"}, {{0, pt(1)}}, {{3, pt(1, 2)}},
                          {{"a", 0, 1, pt(1, 2)},
                           {"b", 0, 2, pt(1, 2)},
                           {"a", 1, 3, pt(1)},
                           {"a", 2, 3, pt(1)},
                           {"a", 3, 1, pt(1, 2)}});
}

inline WeightedAutomaton crossed_loops_b() {
    return make_automaton(SemiringKind::PlusTimes, 4, {"a", "b"}, {{0, pt(1)}}, {{3, pt(1, 2)}},
                          {{"a", 0, 1, pt(1, 2)},
                           {"b", 0, 2, pt(1, 2)},
                           {"a", 1, 3, pt(1)},
                           {"a", 2, 3, pt(1)},
                           {"a", 3, 2, pt(1, 2)}});
}

/// Geometric language (1/2)^{n+1}; the right-hand automaton realizes it
/// with period-two bookkeeping, defeating forward simulation at every
/// transformation depth.
inline WeightedAutomaton geometric_a() {
    return make_automaton(SemiringKind::PlusTimes, 1, {"a"}, {{0, pt(1)}}, {{0, pt(1, 2)}},
                          {{"a", 0, 0, pt(1, 2)}});
}

inline WeightedAutomaton geometric_b() {
    return make_automaton(SemiringKind::PlusTimes, 5, {"a"}, {{1, pt(2, 3)}, {2, pt(1, 3)}},
                          {{1, pt(3, 4)}, {4, pt(3, 4)}},
                          {{"a", 0, 1, pt(1)},
                           {"a", 1, 0, pt(1, 4)},
                           {"a", 2, 4, pt(1)},
                           {"a", 3, 4, pt(1)},
                           {"a", 4, 3, pt(1, 4)}});
}

inline bool same_structure(const WeightedAutomaton& a, const WeightedAutomaton& b) {
    return a.kind == b.kind && a.states == b.states && a.alphabet == b.alphabet &&
           a.transitions == b.transitions && a.initial == b.initial && a.final == b.final;
}

inline WeightedTreeAutomaton make_tree_automaton(
    SemiringKind kind, int states, std::vector<RankedAlphabet::Symbol> symbols,
    const std::vector<std::pair<int, Weight>>& initial,
    const std::vector<std::tuple<std::string, int, std::vector<int>, Weight>>& transitions) {
    RankedAlphabet sigma;
    sigma.symbols = std::move(symbols);
    WeightedTreeAutomaton a(kind, states, sigma);
    for (const auto& [q, w] : initial) a.initial.set(0, q, w);
    for (const auto& [name, src, tuple, w] : transitions) {
        int s = a.alphabet.index_of(name);
        a.transitions.at(static_cast<std::size_t>(s)).set(src, a.tuple_index(s, tuple), w);
    }
    return a;
}

}  // namespace wsim::test
