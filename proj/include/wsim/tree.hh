#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wsim/simulation.hh"

namespace wsim {

/// Arity-indexed symbol set.  A nonempty tree language needs at least one
/// arity-0 symbol.
struct RankedAlphabet {
    struct Symbol {
        std::string name;
        int arity = 0;
    };
    std::vector<Symbol> symbols;

    int index_of(const std::string& name) const;  // -1 when absent
    bool has_nullary() const;
    void validate() const;
};

struct Tree {
    int symbol = 0;
    std::vector<Tree> children;

    bool operator==(const Tree& other) const = default;
};

/// Term syntax: `f(c,c)`; a nullary symbol may be written without parens.
Tree parse_tree(const RankedAlphabet& sigma, const std::string& text);
std::string tree_to_string(const RankedAlphabet& sigma, const Tree& t);

/// Depth of a single node is 1.
int tree_depth(const Tree& t);

/// All trees of depth <= max_depth in a fixed order.
std::vector<Tree> enumerate_trees(const RankedAlphabet& sigma, int max_depth);

/// Weighted tree automaton: per symbol of arity k a states x states^k
/// matrix whose columns are indexed by state tuples in row-major order
/// (leftmost child most significant), plus an initial row vector.  Arity-0
/// matrices play the role of the final vector.
struct WeightedTreeAutomaton {
    SemiringKind kind = SemiringKind::PlusTimes;
    int states = 0;
    RankedAlphabet alphabet;
    std::vector<Matrix> transitions;
    Matrix initial;  // 1 x states
    std::vector<std::string> state_names;

    WeightedTreeAutomaton() : initial(kind, 1, 0) {}
    WeightedTreeAutomaton(SemiringKind k, int n, RankedAlphabet sigma);

    /// Column index of a state tuple, row-major.
    int tuple_index(int symbol, const std::vector<int>& tuple) const;
    void validate() const;
};

bool compatible(const WeightedTreeAutomaton& a, const WeightedTreeAutomaton& b);

/// alpha . Phi(t) where Phi(a(t0..tk)) = M(a) (Phi(t0) (x) ... (x) Phi(tk)).
Weight tree_weight(const WeightedTreeAutomaton& a, const Tree& t);

struct TreeMonomial {
    Weight coeff;
    std::vector<int> vars;  // product of these X entries
};

struct TreeConstraint {
    Weight lhs_const;
    std::vector<TreeMonomial> lhs;
    Weight rhs_const;
    std::vector<TreeMonomial> rhs;
    ConstraintTag tag;
};

/// Polynomial constraint system over the entries of a candidate tree
/// simulation matrix; degree is bounded by the maximum arity.
struct TreeConstraintSystem {
    SemiringKind kind = SemiringKind::PlusTimes;
    Direction dir = Direction::Fwd;
    int var_rows = 0;
    int var_cols = 0;
    std::vector<TreeConstraint> constraints;

    int var_count() const { return var_rows * var_cols; }
    int var_index(int r, int c) const { return r * var_cols + c; }
    int max_degree() const;
    std::size_t count_family(ConstraintTag::Family f) const;
};

TreeConstraintSystem assemble_tree_constraints(const WeightedTreeAutomaton& a,
                                               const WeightedTreeAutomaton& b,
                                               Direction dir);

VerifyReport verify_tree_sim(const WeightedTreeAutomaton& a, const WeightedTreeAutomaton& b,
                             Direction dir, const Matrix& x);

struct TreeSearchConfig {
    std::uint64_t seed = 1;
    int starts = 12;
    int sweeps = 40;
};

/// Boolean: complete (greatest-fixpoint descent forward, exact backtracking
/// backward).  Plus-times and max-plus: multi-start randomized coordinate
/// descent with exact verification; incomplete, so a miss reports Unknown,
/// never NoSimulation.
SearchOutcome find_tree_sim(const WeightedTreeAutomaton& a, const WeightedTreeAutomaton& b,
                            Direction dir, const TreeSearchConfig& config = {});

/// Forward partial execution for tree automata: replaces each state in P by
/// its one-step behaviors (symbol, state tuple).  Preserves the tree
/// language.
WeightedTreeAutomaton tree_fpe(const WeightedTreeAutomaton& a, const std::vector<int>& p);

WeightedTreeAutomaton load_tree_automaton(std::istream& is);
WeightedTreeAutomaton load_tree_automaton_file(const std::string& path);
void save_tree_automaton(const WeightedTreeAutomaton& a, std::ostream& os);
void save_tree_automaton_file(const WeightedTreeAutomaton& a, const std::string& path);

}  // namespace wsim
