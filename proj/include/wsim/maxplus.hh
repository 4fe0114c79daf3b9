#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wsim/simulation.hh"

namespace wsim {

/// Homogeneous two-sided max-plus system  L (x) x <= R (x) x  over a column
/// vector of max-plus variables; one distinguished scaling variable must be
/// finite in any useful solution.
struct TwoSidedSystem {
    Matrix lhs;  // k x v, max-plus
    Matrix rhs;  // k x v, max-plus
    int star_index = 0;
    /// Rows whose left side has a finite coefficient while the right side is
    /// identically -inf; such a row forces its left variables to -inf.
    std::vector<int> forcing_rows;

    TwoSidedSystem(Matrix l, Matrix r, int star);
    int vars() const { return lhs.cols(); }
    int rows() const { return lhs.rows(); }
};

/// Eliminates the affine constants of a max-plus constraint system by
/// multiplying them with a fresh scaling variable (the last one).  A
/// solution with a finite scaling variable shifts back to a solution of the
/// original system: X = X' - x_star.
TwoSidedSystem homogenize(const ConstraintSystem& cs);

/// Greatest x with A (x) x <= y:  x_j = min over rows i with finite A_{i,j}
/// of y_i - A_{i,j}.  A component with no finite A entry in its column has
/// no upper bound at all; that is not representable, so it is rejected.
Matrix residuate(const Matrix& a, const Matrix& y);

/// Cap-and-descend iteration from the zero vector.  Returns the greatest
/// solution below the cap when its scaling variable is finite, and nullopt
/// otherwise.  Components falling below the divergence bound
/// D = (v+1)(2W+1) (after clearing denominators; W = max absolute finite
/// entry) are -inf in every capped solution and are cut to -inf.
/// The optional trace records the value vector after every update.
std::optional<std::vector<Weight>> solve_two_sided(
    const TwoSidedSystem& sys, std::vector<std::vector<Weight>>* trace = nullptr);

/// Bipartite mean payoff game.  Min owns `min_succ` vertices, Max owns
/// `max_succ` vertices; edges alternate sides.  Max wins a play when the
/// liminf of the average edge weight is >= 0.
struct MeanPayoffGame {
    struct Edge {
        int dst;
        mpq_class weight;
    };
    std::vector<std::vector<Edge>> min_succ;
    std::vector<std::vector<Edge>> max_succ;
    std::vector<std::string> min_names;
    std::vector<std::string> max_names;
    int initial = 0;  // a Min vertex

    int vertex_count() const {
        return static_cast<int>(min_succ.size() + max_succ.size());
    }
};

/// The simulation game of a forward max-plus simulation problem: Min
/// vertices are the homogenized variables, Max vertices are the constraint
/// rows; Max wins from the scaling variable iff a forward simulation
/// matrix exists.
MeanPayoffGame build_sim_game(const WeightedAutomaton& a, const WeightedAutomaton& b);

enum class GameWinner { MaxWins, MinWins };

/// Value iteration for K = 4 |V|^3 W steps, then rounding the average to
/// the nearest rational with denominator <= |V| decides the game exactly.
/// Vertices without successors lose for their owner.
GameWinner mpg_winner(const MeanPayoffGame& g);

/// Debug dump: one edge per line, "src dst weight".
void dump_game(const MeanPayoffGame& g, std::ostream& os);

}  // namespace wsim
