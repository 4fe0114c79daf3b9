#pragma once

#include <vector>

#include "wsim/simulation.hh"

namespace wsim {

struct PESpec {
    enum class Mode { Fpe, Bpe } mode = Mode::Fpe;
    std::vector<int> states;  // the parameter P
};

/// Forward partial execution: replaces each state in P by its one-step
/// behaviors (an acceptance state when it can accept, and a pending-symbol
/// state per outgoing transition target).  Preserves the weighted language;
/// new states are deduplicated and ordered: acceptance first, then
/// (symbol, state) pairs lexicographically, then surviving states ascending.
WeightedAutomaton fpe(const WeightedAutomaton& a, const std::vector<int>& p);

/// Backward partial execution, the transposed counterpart of fpe:
/// bpe(A, P) coincides with transpose(fpe(transpose(A), P)).
WeightedAutomaton bpe(const WeightedAutomaton& a, const std::vector<int>& p);

WeightedAutomaton apply_pe(const WeightedAutomaton& a, const PESpec& spec);

/// Parameter heuristics: states that reach acceptance with non-zero weight
/// in at most `depth` steps (fpe), and states reachable from a non-zero
/// initial entry in at most `depth` steps (bpe).
std::vector<int> fpe_param(const WeightedAutomaton& a, int depth);
std::vector<int> bpe_param(const WeightedAutomaton& a, int depth);

/// The canonical backward simulation matrix from A to fpe(A, P): rows are
/// states of A, columns states of fpe(A, P); a replaced state maps onto its
/// one-step behaviors with its own weights, a surviving state onto itself.
Matrix fpe_backward_witness(const WeightedAutomaton& a, const std::vector<int>& p);

}  // namespace wsim
