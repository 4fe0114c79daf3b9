#pragma once

#include <gmpxx.h>

#include <optional>
#include <utility>
#include <vector>

#include "wsim/simulation.hh"

namespace wsim {

/// Rows mean  c . x <= b  with the implicit bound x >= 0 on every variable.
/// Stored coefficients are non-zero.
struct LpRow {
    std::vector<std::pair<int, mpq_class>> coeffs;
    mpq_class bound;
};

struct LinearSystem {
    int var_count = 0;
    std::vector<LpRow> rows;
};

/// Turns a plus-times constraint system into Ax <= b rows: variable terms
/// of each semiring inequality move to one side, constants to the other.
/// Positivity of the semiring becomes the implicit x >= 0.
LinearSystem to_linear_system(const ConstraintSystem& cs);

/// Exact-rational feasibility: Some(x) with x >= 0 satisfying every row, or
/// None iff the system is infeasible.  Phase 1 is a simplex with Bland's
/// rule (termination guaranteed); a feasible point is then polished by a
/// bounded phase 2 that pushes the coordinate sum up, so the reported
/// witness is deterministic and, on bounded systems, extremal.
std::optional<std::vector<mpq_class>> lp_feasible(const LinearSystem& sys);

}  // namespace wsim
