#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wsim/automaton.hh"

namespace wsim {

enum class Direction { Fwd, Bwd };

std::string direction_name(Direction dir);
Direction direction_from_name(const std::string& name);

/// Provenance of one scalar simulation constraint.
struct ConstraintTag {
    enum class Family { Initial, Step, Final } family = Family::Initial;
    int symbol = -1;  // alphabet index for Step
    int row = -1;     // constrained entry row (automaton-specific meaning)
    int col = -1;
};

struct LinearTerm {
    int var;
    Weight coeff;
};

/// One inequality  lhs_const (+) sum lhs  <=  rhs_const (+) sum rhs
/// where (+) and the products inside the sums are the semiring operations.
struct SrConstraint {
    Weight lhs_const;
    std::vector<LinearTerm> lhs;
    Weight rhs_const;
    std::vector<LinearTerm> rhs;
    ConstraintTag tag;
};

/// Linear inequality system over the entries of a candidate simulation
/// matrix X.  Variable (r, c) of the X shape has index r * var_cols + c.
struct ConstraintSystem {
    SemiringKind kind = SemiringKind::PlusTimes;
    Direction dir = Direction::Fwd;
    int var_rows = 0;
    int var_cols = 0;
    std::vector<SrConstraint> constraints;

    int var_count() const { return var_rows * var_cols; }
    int var_index(int r, int c) const { return r * var_cols + c; }
    /// Total number of stored (non-zero) coefficients.
    std::size_t coefficient_count() const;
};

/// Builds the forward constraints
///   alpha_A <= alpha_B X,  X M_A(a) <= M_B(a) X,  X beta_A <= beta_B
/// or their backward duals.  Forward candidates are |Q_B| x |Q_A|,
/// backward candidates |Q_A| x |Q_B|.
ConstraintSystem assemble_constraints(const WeightedAutomaton& a,
                                      const WeightedAutomaton& b, Direction dir);

std::string describe_tag(const ConstraintSystem& cs, const WeightedAutomaton& a,
                         const ConstraintTag& tag);

struct VerifyReport {
    bool ok = false;
    int violated_index = -1;        // index into constraints when !ok
    std::string first_violation;    // human-readable description
    std::size_t checked = 0;
};

/// Exact entrywise check of every constraint; reports the first violated one.
VerifyReport verify_sim_matrix(const WeightedAutomaton& a, const WeightedAutomaton& b,
                               Direction dir, const Matrix& x);

struct SearchOutcome {
    enum class Tag { Found, NoSimulation, Unknown } tag = Tag::Unknown;
    std::optional<Matrix> witness;  // present iff Found; always re-verified
    std::string detail;

    bool found() const { return tag == Tag::Found; }
};

/// Complete search for the word case: LP feasibility for plus-times,
/// homogenized two-sided descent for max-plus, greatest-fixpoint descent
/// for Boolean.  Any Found witness is re-verified before returning.
SearchOutcome find_simulation(const WeightedAutomaton& a, const WeightedAutomaton& b,
                              Direction dir);

/// Greatest simulation matrix for the Boolean semiring: descending
/// iteration from the all-ones matrix through the step and final (fwd) or
/// step and initial (bwd) constraints, then a final check of the remaining
/// vector constraint.  Complete.
SearchOutcome boolean_greatest_simulation(const WeightedAutomaton& a,
                                          const WeightedAutomaton& b, Direction dir);

}  // namespace wsim
