#include "wsim/simulation.hh"

#include <sstream>

#include "wsim/lp.hh"
#include "wsim/maxplus.hh"

namespace wsim {

std::string direction_name(Direction dir) {
    return dir == Direction::Fwd ? "fwd" : "bwd";
}

Direction direction_from_name(const std::string& name) {
    if (name == "fwd") return Direction::Fwd;
    if (name == "bwd") return Direction::Bwd;
    throw UsageError("direction must be 'fwd' or 'bwd', got '" + name + "'");
}

std::size_t ConstraintSystem::coefficient_count() const {
    std::size_t n = 0;
    for (const auto& c : constraints) n += c.lhs.size() + c.rhs.size();
    return n;
}

namespace {

void require_compatible(const WeightedAutomaton& a, const WeightedAutomaton& b) {
    if (a.kind != b.kind) throw UsageError("automata use different semirings");
    if (!compatible(a, b)) throw UsageError("automata use different alphabets");
}

/// b's symbol index for each of a's symbols; alphabets are equal as sets.
std::vector<int> symbol_map(const WeightedAutomaton& a, const WeightedAutomaton& b) {
    std::vector<int> map;
    map.reserve(a.alphabet.size());
    for (const auto& s : a.alphabet) map.push_back(b.symbol_index(s));
    return map;
}

void push_term(std::vector<LinearTerm>& terms, int var, const Weight& coeff) {
    if (!coeff.is_zero()) terms.push_back({var, coeff});
}

}  // namespace

ConstraintSystem assemble_constraints(const WeightedAutomaton& a,
                                      const WeightedAutomaton& b, Direction dir) {
    require_compatible(a, b);
    const int n = a.states;
    const int m = b.states;
    const auto bmap = symbol_map(a, b);
    const Weight zero = Weight::zero(a.kind);

    ConstraintSystem cs;
    cs.kind = a.kind;
    cs.dir = dir;

    if (dir == Direction::Fwd) {
        cs.var_rows = m;
        cs.var_cols = n;
        // alpha_A <= alpha_B X : one constraint per column p of X.
        for (int p = 0; p < n; ++p) {
            SrConstraint c{a.initial.at(0, p), {}, zero, {}, {ConstraintTag::Family::Initial, -1, -1, p}};
            for (int q = 0; q < m; ++q)
                push_term(c.rhs, cs.var_index(q, p), b.initial.at(0, q));
            cs.constraints.push_back(std::move(c));
        }
        // X M_A(a) <= M_B(a) X : entry (q, p') per symbol.
        for (std::size_t s = 0; s < a.alphabet.size(); ++s) {
            const Matrix& ma = a.transitions[s];
            const Matrix& mb = b.transitions[static_cast<std::size_t>(bmap[s])];
            for (int q = 0; q < m; ++q) {
                for (int pp = 0; pp < n; ++pp) {
                    SrConstraint c{zero, {}, zero, {}, {ConstraintTag::Family::Step, static_cast<int>(s), q, pp}};
                    for (int p = 0; p < n; ++p)
                        push_term(c.lhs, cs.var_index(q, p), ma.at(p, pp));
                    for (int qq = 0; qq < m; ++qq)
                        push_term(c.rhs, cs.var_index(qq, pp), mb.at(q, qq));
                    cs.constraints.push_back(std::move(c));
                }
            }
        }
        // X beta_A <= beta_B : one constraint per row q of X.
        for (int q = 0; q < m; ++q) {
            SrConstraint c{zero, {}, b.final.at(q, 0), {}, {ConstraintTag::Family::Final, -1, q, -1}};
            for (int p = 0; p < n; ++p)
                push_term(c.lhs, cs.var_index(q, p), a.final.at(p, 0));
            cs.constraints.push_back(std::move(c));
        }
    } else {
        cs.var_rows = n;
        cs.var_cols = m;
        // alpha_A X <= alpha_B : one constraint per column q of X.
        for (int q = 0; q < m; ++q) {
            SrConstraint c{zero, {}, b.initial.at(0, q), {}, {ConstraintTag::Family::Initial, -1, -1, q}};
            for (int p = 0; p < n; ++p)
                push_term(c.lhs, cs.var_index(p, q), a.initial.at(0, p));
            cs.constraints.push_back(std::move(c));
        }
        // M_A(a) X <= X M_B(a) : entry (p, q) per symbol.
        for (std::size_t s = 0; s < a.alphabet.size(); ++s) {
            const Matrix& ma = a.transitions[s];
            const Matrix& mb = b.transitions[static_cast<std::size_t>(bmap[s])];
            for (int p = 0; p < n; ++p) {
                for (int q = 0; q < m; ++q) {
                    SrConstraint c{zero, {}, zero, {}, {ConstraintTag::Family::Step, static_cast<int>(s), p, q}};
                    for (int pp = 0; pp < n; ++pp)
                        push_term(c.lhs, cs.var_index(pp, q), ma.at(p, pp));
                    for (int qq = 0; qq < m; ++qq)
                        push_term(c.rhs, cs.var_index(p, qq), mb.at(qq, q));
                    cs.constraints.push_back(std::move(c));
                }
            }
        }
        // beta_A <= X beta_B : one constraint per row p of X.
        for (int p = 0; p < n; ++p) {
            SrConstraint c{a.final.at(p, 0), {}, zero, {}, {ConstraintTag::Family::Final, -1, p, -1}};
            for (int q = 0; q < m; ++q)
                push_term(c.rhs, cs.var_index(p, q), b.final.at(q, 0));
            cs.constraints.push_back(std::move(c));
        }
    }
    return cs;
}

std::string describe_tag(const ConstraintSystem& cs, const WeightedAutomaton& a,
                         const ConstraintTag& tag) {
    std::ostringstream os;
    switch (tag.family) {
        case ConstraintTag::Family::Initial:
            os << "initial[" << tag.col << "]";
            break;
        case ConstraintTag::Family::Step:
            os << "step(" << a.alphabet.at(static_cast<std::size_t>(tag.symbol)) << ")[" << tag.row
               << "," << tag.col << "]";
            break;
        case ConstraintTag::Family::Final:
            os << "final[" << tag.row << "]";
            break;
    }
    (void)cs;
    return os.str();
}

namespace {

Weight eval_side(SemiringKind kind, const Weight& constant,
                 const std::vector<LinearTerm>& terms, const Matrix& x) {
    Weight acc = constant;
    const int cols = x.cols();
    for (const auto& t : terms) {
        Weight entry = x.at(t.var / cols, t.var % cols);
        acc = sr_add(acc, sr_mul(t.coeff, entry));
    }
    (void)kind;
    return acc;
}

}  // namespace

VerifyReport verify_sim_matrix(const WeightedAutomaton& a, const WeightedAutomaton& b,
                               Direction dir, const Matrix& x) {
    require_compatible(a, b);
    ConstraintSystem cs = assemble_constraints(a, b, dir);
    if (x.kind() != a.kind || x.rows() != cs.var_rows || x.cols() != cs.var_cols)
        throw UsageError("candidate matrix must be " + std::to_string(cs.var_rows) + "x" +
                         std::to_string(cs.var_cols) + " over " + kind_name(a.kind));
    VerifyReport report;
    for (std::size_t i = 0; i < cs.constraints.size(); ++i) {
        const SrConstraint& c = cs.constraints[i];
        Weight lhs = eval_side(cs.kind, c.lhs_const, c.lhs, x);
        Weight rhs = eval_side(cs.kind, c.rhs_const, c.rhs, x);
        ++report.checked;
        if (!sr_leq(lhs, rhs)) {
            report.ok = false;
            report.violated_index = static_cast<int>(i);
            std::ostringstream os;
            os << describe_tag(cs, a, c.tag) << ": " << format_weight(lhs)
               << " > " << format_weight(rhs);
            report.first_violation = os.str();
            return report;
        }
    }
    report.ok = true;
    return report;
}

SearchOutcome boolean_greatest_simulation(const WeightedAutomaton& a,
                                          const WeightedAutomaton& b, Direction dir) {
    require_compatible(a, b);
    if (a.kind != SemiringKind::Boolean)
        throw UsageError("boolean_greatest_simulation needs the Boolean semiring");

    const int n = a.states;
    const int m = b.states;
    const auto bmap = symbol_map(a, b);
    const int rows = dir == Direction::Fwd ? m : n;
    const int cols = dir == Direction::Fwd ? n : m;

    std::vector<std::vector<bool>> x(static_cast<std::size_t>(rows),
                                     std::vector<bool>(static_cast<std::size_t>(cols), true));

    auto a_has = [&](std::size_t s, int p, int pp) { return !a.transitions[s].at(p, pp).is_zero(); };
    auto b_has = [&](std::size_t s, int q, int qq) {
        return !b.transitions[static_cast<std::size_t>(bmap[s])].at(q, qq).is_zero();
    };

    // Descend from the all-ones matrix: drop entries violating the
    // monotone constraint families, until a fixpoint.
    bool changed = true;
    while (changed) {
        changed = false;
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < cols; ++c) {
                if (!x[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]) continue;
                bool keep = true;
                if (dir == Direction::Fwd) {
                    const int q = r, p = c;
                    // Final: X beta_A <= beta_B.
                    if (!a.final.at(p, 0).is_zero() && b.final.at(q, 0).is_zero()) keep = false;
                    // Step: every move of p must be matched from q.
                    for (std::size_t s = 0; keep && s < a.alphabet.size(); ++s) {
                        for (int pp = 0; keep && pp < n; ++pp) {
                            if (!a_has(s, p, pp)) continue;
                            bool witness = false;
                            for (int qq = 0; qq < m && !witness; ++qq)
                                witness = b_has(s, q, qq) &&
                                          x[static_cast<std::size_t>(qq)][static_cast<std::size_t>(pp)];
                            if (!witness) keep = false;
                        }
                    }
                } else {
                    const int p = r, q = c;
                    // Initial: alpha_A X <= alpha_B.
                    if (!a.initial.at(0, p).is_zero() && b.initial.at(0, q).is_zero()) keep = false;
                    // Step: M_A(a) X <= X M_B(a), read as a filter on (p, q).
                    for (std::size_t s = 0; keep && s < a.alphabet.size(); ++s) {
                        for (int p0 = 0; keep && p0 < n; ++p0) {
                            if (!a_has(s, p0, p)) continue;
                            bool witness = false;
                            for (int qq = 0; qq < m && !witness; ++qq)
                                witness = x[static_cast<std::size_t>(p0)][static_cast<std::size_t>(qq)] &&
                                          b_has(s, qq, q);
                            if (!witness) keep = false;
                        }
                    }
                }
                if (!keep) {
                    x[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = false;
                    changed = true;
                }
            }
        }
    }

    Matrix result(SemiringKind::Boolean, rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            if (x[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)])
                result.set(r, c, Weight::boolean(true));

    // Remaining vector constraint; by maximality, failure here rules out
    // every candidate.
    bool rest_ok = true;
    if (dir == Direction::Fwd) {
        for (int p = 0; p < n && rest_ok; ++p) {
            if (a.initial.at(0, p).is_zero()) continue;
            bool witness = false;
            for (int q = 0; q < m && !witness; ++q)
                witness = !b.initial.at(0, q).is_zero() && !result.at(q, p).is_zero();
            if (!witness) rest_ok = false;
        }
    } else {
        for (int p = 0; p < n && rest_ok; ++p) {
            if (a.final.at(p, 0).is_zero()) continue;
            bool witness = false;
            for (int q = 0; q < m && !witness; ++q)
                witness = !result.at(p, q).is_zero() && !b.final.at(q, 0).is_zero();
            if (!witness) rest_ok = false;
        }
    }

    SearchOutcome out;
    if (rest_ok) {
        VerifyReport check = verify_sim_matrix(a, b, dir, result);
        if (!check.ok) throw Error("internal: greatest Boolean candidate failed verification: " + check.first_violation);
        out.tag = SearchOutcome::Tag::Found;
        out.witness = result;
    } else {
        out.tag = SearchOutcome::Tag::NoSimulation;
        out.detail = "greatest step-consistent matrix fails the remaining vector constraint";
    }
    return out;
}

SearchOutcome find_simulation(const WeightedAutomaton& a, const WeightedAutomaton& b,
                              Direction dir) {
    require_compatible(a, b);
    switch (a.kind) {
        case SemiringKind::Boolean:
            return boolean_greatest_simulation(a, b, dir);
        case SemiringKind::PlusTimes: {
            ConstraintSystem cs = assemble_constraints(a, b, dir);
            LinearSystem sys = to_linear_system(cs);
            auto solution = lp_feasible(sys);
            SearchOutcome out;
            if (!solution) {
                out.tag = SearchOutcome::Tag::NoSimulation;
                out.detail = "linear program infeasible";
                return out;
            }
            Matrix x(a.kind, cs.var_rows, cs.var_cols);
            for (int r = 0; r < cs.var_rows; ++r)
                for (int c = 0; c < cs.var_cols; ++c)
                    x.set(r, c, Weight::rational(a.kind, (*solution)[static_cast<std::size_t>(cs.var_index(r, c))]));
            VerifyReport check = verify_sim_matrix(a, b, dir, x);
            if (!check.ok)
                throw Error("internal: LP solution failed exact verification: " + check.first_violation);
            out.tag = SearchOutcome::Tag::Found;
            out.witness = std::move(x);
            return out;
        }
        case SemiringKind::MaxPlus: {
            if (dir == Direction::Bwd) {
                // Backward search runs as forward search on the transposed
                // automata; transposing the witness maps back.
                SearchOutcome fwd = find_simulation(transpose_automaton(a),
                                                    transpose_automaton(b), Direction::Fwd);
                if (!fwd.found()) return fwd;
                Matrix x = transpose(*fwd.witness);
                VerifyReport check = verify_sim_matrix(a, b, dir, x);
                if (!check.ok)
                    throw Error("internal: transposed witness failed verification: " + check.first_violation);
                SearchOutcome out;
                out.tag = SearchOutcome::Tag::Found;
                out.witness = std::move(x);
                return out;
            }
            ConstraintSystem cs = assemble_constraints(a, b, dir);
            TwoSidedSystem sys = homogenize(cs);
            auto solution = solve_two_sided(sys);
            SearchOutcome out;
            if (!solution) {
                out.tag = SearchOutcome::Tag::NoSimulation;
                out.detail = "two-sided max-plus system has no solution with a finite scaling variable";
                return out;
            }
            const Weight star = (*solution)[static_cast<std::size_t>(sys.star_index)];
            if (star.is_minus_inf()) throw Error("internal: solver returned -inf scaling variable");
            Matrix x(a.kind, cs.var_rows, cs.var_cols);
            for (int r = 0; r < cs.var_rows; ++r) {
                for (int c = 0; c < cs.var_cols; ++c) {
                    const Weight& v = (*solution)[static_cast<std::size_t>(cs.var_index(r, c))];
                    if (v.is_minus_inf()) continue;
                    x.set(r, c, Weight::rational(a.kind, v.value() - star.value()));
                }
            }
            VerifyReport check = verify_sim_matrix(a, b, dir, x);
            if (!check.ok)
                throw Error("internal: recovered max-plus witness failed verification: " + check.first_violation);
            out.tag = SearchOutcome::Tag::Found;
            out.witness = std::move(x);
            return out;
        }
    }
    throw Error("unreachable");
}

}  // namespace wsim
