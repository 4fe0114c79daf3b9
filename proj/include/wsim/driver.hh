#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wsim/partial_execution.hh"
#include "wsim/simulation.hh"

namespace wsim {

struct LangInclOptions {
    Direction dir = Direction::Fwd;
    int max_depth = 3;          // partial-execution ladder; depth 0 is untransformed
    int max_len = 8;            // counterexample word length bound
    double budget_seconds = 60.0;
};

struct Verdict {
    enum class Kind { Included, NotIncluded, Unknown } kind = Kind::Unknown;
    Direction dir = Direction::Fwd;
    std::optional<Matrix> witness;  // verifies on the transformed pair
    int pe_depth = -1;              // ladder index that produced the witness
    std::optional<Word> counterexample;
    std::optional<std::pair<Weight, Weight>> weights;  // L(A)(w), L(B)(w)
    std::string detail;
};

/// Interleaves simulation search over a partial-execution ladder with a
/// breadth-first counterexample scan; the first definitive answer wins.
/// Depth 0 searches the untransformed pair; depth k >= 1 applies the
/// transformation with the heuristic parameter sets of depth k-1.
Verdict language_inclusion(const WeightedAutomaton& a, const WeightedAutomaton& b,
                           const LangInclOptions& options);

/// Shortest word of length <= max_len whose weights violate the pointwise
/// order, scanning lengths breadth-first.
std::optional<Word> find_counterexample(const WeightedAutomaton& a,
                                        const WeightedAutomaton& b, int max_len);

struct OracleRow {
    Word word;
    Weight weight_a;
    Weight weight_b;
    bool leq;
};

/// Weights of every word up to the bound, in length-then-lexicographic
/// order, with the pointwise comparison.
std::vector<OracleRow> oracle_compare(const WeightedAutomaton& a,
                                      const WeightedAutomaton& b, int max_len);

}  // namespace wsim
