#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wsim/matrix.hh"

namespace wsim {

/// A word is a sequence of symbol indices into the automaton's alphabet.
using Word = std::vector<int>;

/// Semiring-weighted word automaton: transition matrix per symbol, an
/// initial row vector and a final column vector.  States are 0..states-1.
struct WeightedAutomaton {
    SemiringKind kind = SemiringKind::PlusTimes;
    int states = 0;
    std::vector<std::string> alphabet;     // ordered, unique names
    std::vector<Matrix> transitions;       // one states x states matrix per symbol
    Matrix initial;                        // 1 x states
    Matrix final;                          // states x 1
    std::vector<std::string> state_names;  // optional; empty or size == states

    WeightedAutomaton() : initial(kind, 1, 0), final(kind, 0, 1) {}
    WeightedAutomaton(SemiringKind k, int n, std::vector<std::string> sigma);

    int symbol_index(const std::string& name) const;  // -1 when absent
    const std::string& state_label(int q) const;
    void validate() const;
};

/// True when the two automata share the same semiring and the same symbol
/// set (order may differ).
bool compatible(const WeightedAutomaton& a, const WeightedAutomaton& b);

/// Word as symbol indices of `a`; unknown names raise UsageError.
Word parse_word(const WeightedAutomaton& a, const std::vector<std::string>& symbols);
std::string format_word(const WeightedAutomaton& a, const Word& w);

/// alpha * M(a1) * ... * M(ak) * beta; the empty word gives alpha * beta.
Weight word_weight(const WeightedAutomaton& a, const Word& w);

/// Reverses every transition matrix and swaps the initial/final vectors.
WeightedAutomaton transpose_automaton(const WeightedAutomaton& a);

/// Restricts to states that reach acceptance with non-zero accumulated
/// weight.  Preserves the weighted language.  If nothing survives, the
/// canonical one-state automaton of the empty language is returned.
WeightedAutomaton remove_trap_states(const WeightedAutomaton& a);

struct RandomAutomatonParams {
    SemiringKind kind = SemiringKind::PlusTimes;
    int states = 1;
    int alphabet_size = 1;
    mpq_class density = mpq_class(1, 2);  // in [0,1]
    std::vector<Weight> pool;             // weights for present transitions/finals
    std::uint64_t seed = 0;
};

/// Each (src, symbol, dst) transition exists with probability `density`,
/// weights drawn uniformly from the pool; one uniformly chosen state gets
/// initial weight one; each state is final with probability `density`.
/// Deterministic for a fixed seed.
WeightedAutomaton random_automaton(const RandomAutomatonParams& params);

WeightedAutomaton load_automaton(std::istream& is);
WeightedAutomaton load_automaton_file(const std::string& path);
void save_automaton(const WeightedAutomaton& a, std::ostream& os);
void save_automaton_file(const WeightedAutomaton& a, const std::string& path);

}  // namespace wsim
