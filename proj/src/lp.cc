#include "wsim/lp.hh"

#include <map>
#include <chrono>
#include <cstdio>

namespace wsim {

LinearSystem to_linear_system(const ConstraintSystem& cs) {
    if (cs.kind != SemiringKind::PlusTimes)
        throw UsageError("to_linear_system needs a plus-times constraint system");
    LinearSystem sys;
    sys.var_count = cs.var_count();
    for (const auto& c : cs.constraints) {
        std::map<int, mpq_class> acc;
        for (const auto& t : c.lhs) acc[t.var] += t.coeff.value();
        for (const auto& t : c.rhs) acc[t.var] -= t.coeff.value();
        LpRow row;
        row.bound = c.rhs_const.value() - c.lhs_const.value();
        for (const auto& [var, coeff] : acc)
            if (coeff != 0) row.coeffs.emplace_back(var, coeff);
        sys.rows.push_back(std::move(row));
    }
    return sys;
}

namespace {

/// Tableau simplex over exact rationals.  Rows are kept sparse; the
/// objective row is dense.  Entering columns follow Bland's rule (lowest
/// index), leaving rows break ratio ties by lowest basis variable, so runs
/// are deterministic and phase 1 cannot cycle.
class Simplex {
public:
    Simplex(const LinearSystem& sys) : n_(sys.var_count) {
        m_ = static_cast<int>(sys.rows.size());
        cols_ = n_ + m_;  // decision variables then slacks
        rows_.resize(static_cast<std::size_t>(m_));
        rhs_.resize(static_cast<std::size_t>(m_));
        basis_.resize(static_cast<std::size_t>(m_));
        for (int i = 0; i < m_; ++i) {
            const LpRow& r = sys.rows[static_cast<std::size_t>(i)];
            bool negate = r.bound < 0;
            for (const auto& [v, c] : r.coeffs)
                if (c != 0) rows_[static_cast<std::size_t>(i)][v] = negate ? -c : c;
            rows_[static_cast<std::size_t>(i)][n_ + i] = negate ? mpq_class(-1) : mpq_class(1);
            rhs_[static_cast<std::size_t>(i)] = negate ? mpq_class(-r.bound) : r.bound;
            if (negate) {
                int art = cols_++;
                rows_[static_cast<std::size_t>(i)][art] = 1;
                basis_[static_cast<std::size_t>(i)] = art;
                artificial_.push_back(art);
            } else {
                basis_[static_cast<std::size_t>(i)] = n_ + i;
            }
        }
        first_artificial_ = n_ + m_;
    }

    /// Runs phase 1; true iff the system is feasible.
    bool feasible_phase() {
        obj_.assign(static_cast<std::size_t>(cols_), mpq_class(0));
        obj_value_ = 0;
        // Maximize -(sum of artificials): price out the artificial basis.
        // The current value is -(sum of their right-hand sides).
        for (int i = 0; i < m_; ++i) {
            if (basis_[static_cast<std::size_t>(i)] >= first_artificial_) {
                for (const auto& [j, v] : rows_[static_cast<std::size_t>(i)])
                    obj_[static_cast<std::size_t>(j)] += v;
                obj_value_ -= rhs_[static_cast<std::size_t>(i)];
            }
        }
        for (int a : artificial_) obj_[static_cast<std::size_t>(a)] -= 1;
        run(/*forbid_artificials=*/false, /*pivot_budget=*/-1);
        if (obj_value_ != 0) return false;
        drive_out_artificials();
        return true;
    }

    /// Phase 2: push the coordinate sum of the decision variables up.
    /// Bounded by a pivot budget; stops early on an unbounded ray.  Any
    /// intermediate basis is feasible, so the final point always is.
    void polish_phase() {
        obj_.assign(static_cast<std::size_t>(cols_), mpq_class(0));
        obj_value_ = 0;
        for (int j = 0; j < n_; ++j) obj_[static_cast<std::size_t>(j)] = 1;
        for (int i = 0; i < m_; ++i) {
            int b = basis_[static_cast<std::size_t>(i)];
            if (b < n_) {
                // Price out basic decision variables.
                for (const auto& [j, v] : rows_[static_cast<std::size_t>(i)])
                    obj_[static_cast<std::size_t>(j)] -= v;
                obj_value_ += rhs_[static_cast<std::size_t>(i)];
            }
        }
        run(/*forbid_artificials=*/true, /*pivot_budget=*/2 * (m_ + n_) + 64);
    }

    std::vector<mpq_class> solution() const {
        std::vector<mpq_class> x(static_cast<std::size_t>(n_), mpq_class(0));
        for (int i = 0; i < m_; ++i) {
            int b = basis_[static_cast<std::size_t>(i)];
            if (b < n_) x[static_cast<std::size_t>(b)] = rhs_[static_cast<std::size_t>(i)];
        }
        return x;
    }

private:
    void run(bool forbid_artificials, long pivot_budget) {
        for (long pivots = 0; pivot_budget < 0 || pivots < pivot_budget; ++pivots) {
            int e = -1;
            int limit = forbid_artificials ? first_artificial_ : cols_;
            for (int j = 0; j < limit; ++j) {
                if (obj_[static_cast<std::size_t>(j)] > 0) {
                    e = j;
                    break;
                }
            }
            if (e < 0) return;  // optimal
            int leave = -1;
            mpq_class best_ratio;
            for (int i = 0; i < m_; ++i) {
                auto it = rows_[static_cast<std::size_t>(i)].find(e);
                if (it == rows_[static_cast<std::size_t>(i)].end() || it->second <= 0) continue;
                mpq_class ratio = rhs_[static_cast<std::size_t>(i)] / it->second;
                if (leave < 0 || ratio < best_ratio ||
                    (ratio == best_ratio &&
                     basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave < 0) return;  // unbounded ray; keep the current point
            pivot(leave, e);
        }
    }

    void pivot(int leave, int enter) {
        auto& prow = rows_[static_cast<std::size_t>(leave)];
        mpq_class piv = prow.at(enter);
        if (piv != 1) {
            for (auto& [j, v] : prow) v /= piv;
            rhs_[static_cast<std::size_t>(leave)] /= piv;
        }
        for (int i = 0; i < m_; ++i) {
            if (i == leave) continue;
            auto& row = rows_[static_cast<std::size_t>(i)];
            auto it = row.find(enter);
            if (it == row.end()) continue;
            mpq_class factor = it->second;
            for (const auto& [j, v] : prow) {
                auto jt = row.find(j);
                if (jt == row.end()) {
                    mpq_class nv = -factor * v;
                    if (nv != 0) row.emplace(j, std::move(nv));
                } else {
                    jt->second -= factor * v;
                    if (jt->second == 0) row.erase(jt);
                }
            }
            rhs_[static_cast<std::size_t>(i)] -= factor * rhs_[static_cast<std::size_t>(leave)];
        }
        mpq_class ofactor = obj_[static_cast<std::size_t>(enter)];
        if (ofactor != 0) {
            for (const auto& [j, v] : prow) obj_[static_cast<std::size_t>(j)] -= ofactor * v;
            obj_value_ += ofactor * rhs_[static_cast<std::size_t>(leave)];
        }
        basis_[static_cast<std::size_t>(leave)] = enter;
    }

    void drive_out_artificials() {
        for (int i = 0; i < m_; ++i) {
            if (basis_[static_cast<std::size_t>(i)] < first_artificial_) continue;
            const auto& row = rows_[static_cast<std::size_t>(i)];
            int enter = -1;
            for (const auto& [j, v] : row) {
                if (j < first_artificial_ && v != 0) {
                    enter = j;
                    break;
                }
            }
            if (enter >= 0)
                pivot(i, enter);
            // An all-artificial row is redundant (its rhs is zero here);
            // it can stay basic at value zero.
        }
    }

    int n_;
    int m_;
    int cols_;
    int first_artificial_;
    std::vector<std::map<int, mpq_class>> rows_;
    std::vector<mpq_class> rhs_;
    std::vector<int> basis_;
    std::vector<int> artificial_;
    std::vector<mpq_class> obj_;
    mpq_class obj_value_;
};

}  // namespace

std::optional<std::vector<mpq_class>> lp_feasible(const LinearSystem& sys) {
    for (const auto& r : sys.rows)
        for (const auto& [v, c] : r.coeffs)
            if (v < 0 || v >= sys.var_count) throw UsageError("row references an undeclared variable");
    Simplex simplex(sys);
    auto t0 = std::chrono::steady_clock::now();
    bool feas = simplex.feasible_phase();
    fprintf(stderr, "phase1: %.2fs feas=%d\n", std::chrono::duration<double>(std::chrono::steady_clock::now()-t0).count(), (int)feas);
    if (!feas) return std::nullopt;
    t0 = std::chrono::steady_clock::now();
    simplex.polish_phase();
    fprintf(stderr, "phase2: %.2fs\n", std::chrono::duration<double>(std::chrono::steady_clock::now()-t0).count());
    std::vector<mpq_class> x = simplex.solution();
    // Exact re-evaluation of every row; a failure is a solver defect.
    for (const auto& r : sys.rows) {
        mpq_class lhs(0);
        for (const auto& [v, c] : r.coeffs) lhs += c * x[static_cast<std::size_t>(v)];
        if (lhs > r.bound) throw Error("internal: simplex produced an infeasible point");
    }
    return x;
}

}  // namespace wsim
