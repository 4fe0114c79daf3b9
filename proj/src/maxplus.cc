#include "wsim/maxplus.hh"

#include <algorithm>
#include <deque>
#include <ostream>

namespace wsim {

namespace {

void require_maxplus(SemiringKind kind, const char* what) {
    if (kind != SemiringKind::MaxPlus)
        throw UsageError(std::string(what) + " needs the max-plus semiring");
}

}  // namespace

TwoSidedSystem::TwoSidedSystem(Matrix l, Matrix r, int star)
    : lhs(std::move(l)), rhs(std::move(r)), star_index(star) {
    require_maxplus(lhs.kind(), "TwoSidedSystem");
    require_maxplus(rhs.kind(), "TwoSidedSystem");
    if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols())
        throw UsageError("two-sided system needs equal shapes");
    if (star_index < 0 || star_index >= lhs.cols())
        throw UsageError("scaling variable index out of range");
    for (int i = 0; i < lhs.rows(); ++i)
        if (!lhs.row(i).empty() && rhs.row(i).empty()) forcing_rows.push_back(i);
}

TwoSidedSystem homogenize(const ConstraintSystem& cs) {
    require_maxplus(cs.kind, "homogenize");
    const int v = cs.var_count() + 1;
    const int star = cs.var_count();
    Matrix l(SemiringKind::MaxPlus, static_cast<int>(cs.constraints.size()), v);
    Matrix r(SemiringKind::MaxPlus, static_cast<int>(cs.constraints.size()), v);
    for (std::size_t i = 0; i < cs.constraints.size(); ++i) {
        const SrConstraint& c = cs.constraints[i];
        int row = static_cast<int>(i);
        for (const auto& t : c.lhs) l.set(row, t.var, t.coeff);
        for (const auto& t : c.rhs) r.set(row, t.var, t.coeff);
        if (!c.lhs_const.is_zero()) l.set(row, star, c.lhs_const);
        if (!c.rhs_const.is_zero()) r.set(row, star, c.rhs_const);
    }
    return TwoSidedSystem(std::move(l), std::move(r), star);
}

Matrix residuate(const Matrix& a, const Matrix& y) {
    require_maxplus(a.kind(), "residuate");
    require_maxplus(y.kind(), "residuate");
    if (y.rows() != a.rows() || y.cols() != 1)
        throw UsageError("residuate needs a column vector with one row per matrix row");
    Matrix x(SemiringKind::MaxPlus, a.cols(), 1);
    std::vector<bool> bounded(static_cast<std::size_t>(a.cols()), false);
    std::vector<bool> is_inf(static_cast<std::size_t>(a.cols()), false);
    std::vector<mpq_class> best(static_cast<std::size_t>(a.cols()));
    for (int i = 0; i < a.rows(); ++i) {
        Weight yi = y.at(i, 0);
        for (const auto& [j, aij] : a.row(i)) {
            auto sj = static_cast<std::size_t>(j);
            if (yi.is_minus_inf()) {
                // A finite coefficient against a -inf bound forces x_j = -inf.
                is_inf[sj] = true;
                bounded[sj] = true;
                continue;
            }
            mpq_class candidate = yi.value() - aij.value();
            if (!bounded[sj] || (!is_inf[sj] && candidate < best[sj])) {
                bounded[sj] = true;
                if (!is_inf[sj]) best[sj] = candidate;
            }
        }
    }
    for (int j = 0; j < a.cols(); ++j) {
        auto sj = static_cast<std::size_t>(j);
        if (!bounded[sj])
            throw UsageError("residuation is unbounded in component " + std::to_string(j) +
                             " (no finite coefficient in that column)");
        if (is_inf[sj])
            x.set(j, 0, Weight::minus_inf());
        else
            x.set(j, 0, Weight::rational(SemiringKind::MaxPlus, best[sj]));
    }
    return x;
}

namespace {

/// Integer view of a two-sided system after clearing denominators.
struct ScaledSystem {
    struct Term {
        int var;
        mpz_class coeff;
    };
    struct Row {
        std::vector<Term> lhs, rhs;
    };
    std::vector<Row> rows;
    mpz_class scale = 1;
    mpz_class max_abs = 0;  // W
};

ScaledSystem clear_denominators(const TwoSidedSystem& sys) {
    ScaledSystem out;
    mpz_class lcm = 1;
    auto visit = [&](const Matrix& m) {
        for (int i = 0; i < m.rows(); ++i)
            for (const auto& [j, w] : m.row(i))
                if (!w.is_minus_inf()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), w.value().get_den().get_mpz_t());
    };
    visit(sys.lhs);
    visit(sys.rhs);
    out.scale = lcm;
    out.rows.resize(static_cast<std::size_t>(sys.rows()));
    auto scaled = [&](const Weight& w) {
        mpz_class v = w.value().get_num() * (lcm / w.value().get_den());
        mpz_class a = abs(v);
        if (a > out.max_abs) out.max_abs = a;
        return v;
    };
    for (int i = 0; i < sys.rows(); ++i) {
        auto& row = out.rows[static_cast<std::size_t>(i)];
        for (const auto& [j, w] : sys.lhs.row(i)) row.lhs.push_back({j, scaled(w)});
        for (const auto& [j, w] : sys.rhs.row(i)) row.rhs.push_back({j, scaled(w)});
    }
    return out;
}

/// Worklist descent on integer values.  val[j] is the current upper bound on
/// variable j; finite[j] tells whether it is still above -inf.
class Descent {
public:
    Descent(const ScaledSystem& scaled, int vars, const mpz_class& cut)
        : sys_(scaled),
          cut_(cut),
          val_(static_cast<std::size_t>(vars), mpz_class(0)),
          finite_(static_cast<std::size_t>(vars), true),
          rhs_rows_of_(static_cast<std::size_t>(vars)),
          queued_(scaled.rows.size(), false) {
        for (std::size_t i = 0; i < sys_.rows.size(); ++i) {
            for (const auto& t : sys_.rows[i].rhs)
                rhs_rows_of_[static_cast<std::size_t>(t.var)].push_back(static_cast<int>(i));
            enqueue(static_cast<int>(i));
        }
    }

    void run(std::vector<std::vector<Weight>>* trace, const mpz_class& scale) {
        while (!work_.empty()) {
            int i = work_.front();
            work_.pop_front();
            queued_[static_cast<std::size_t>(i)] = false;
            process_row(i, trace, scale);
        }
    }

    bool is_finite(int j) const { return finite_[static_cast<std::size_t>(j)]; }
    const mpz_class& value(int j) const { return val_[static_cast<std::size_t>(j)]; }

    std::vector<Weight> snapshot(const mpz_class& scale) const {
        std::vector<Weight> out;
        out.reserve(val_.size());
        for (std::size_t j = 0; j < val_.size(); ++j) {
            if (!finite_[j])
                out.push_back(Weight::minus_inf());
            else
                out.push_back(Weight::rational(SemiringKind::MaxPlus,
                                               mpq_class(val_[j]) / mpq_class(scale)));
        }
        return out;
    }

private:
    void enqueue(int row) {
        if (!queued_[static_cast<std::size_t>(row)]) {
            queued_[static_cast<std::size_t>(row)] = true;
            work_.push_back(row);
        }
    }

    void process_row(int i, std::vector<std::vector<Weight>>* trace, const mpz_class& scale) {
        const auto& row = sys_.rows[static_cast<std::size_t>(i)];
        // Right-hand side value max_j (R_ij + val_j).
        bool rhs_finite = false;
        mpz_class rhs_max;
        for (const auto& t : row.rhs) {
            if (!finite_[static_cast<std::size_t>(t.var)]) continue;
            mpz_class v = t.coeff + val_[static_cast<std::size_t>(t.var)];
            if (!rhs_finite || v > rhs_max) {
                rhs_finite = true;
                rhs_max = v;
            }
        }
        for (const auto& t : row.lhs) {
            auto sj = static_cast<std::size_t>(t.var);
            if (!finite_[sj]) continue;
            bool drop_to_inf = !rhs_finite;
            mpz_class bound;
            if (rhs_finite) {
                bound = rhs_max - t.coeff;
                if (bound < -cut_) drop_to_inf = true;
            }
            if (drop_to_inf) {
                finite_[sj] = false;
                touched(t.var, trace, scale);
            } else if (bound < val_[sj]) {
                val_[sj] = bound;
                touched(t.var, trace, scale);
            }
        }
    }

    void touched(int var, std::vector<std::vector<Weight>>* trace, const mpz_class& scale) {
        for (int row : rhs_rows_of_[static_cast<std::size_t>(var)]) enqueue(row);
        if (trace) trace->push_back(snapshot(scale));
    }

    const ScaledSystem& sys_;
    mpz_class cut_;
    std::vector<mpz_class> val_;
    std::vector<bool> finite_;
    std::vector<std::vector<int>> rhs_rows_of_;
    std::vector<bool> queued_;
    std::deque<int> work_;
};

}  // namespace

std::optional<std::vector<Weight>> solve_two_sided(const TwoSidedSystem& sys,
                                                   std::vector<std::vector<Weight>>* trace) {
    ScaledSystem scaled = clear_denominators(sys);
    const int v = sys.vars();
    // Divergence bound: finite components of the greatest capped solution
    // stay above -(v-1) * 2W; anything deeper diverges to -inf.
    mpz_class cut = mpz_class(v + 1) * (2 * scaled.max_abs + 1);
    Descent descent(scaled, v, cut);
    if (trace) trace->push_back(descent.snapshot(scaled.scale));
    descent.run(trace, scaled.scale);

    if (!descent.is_finite(sys.star_index)) return std::nullopt;

    std::vector<Weight> solution = descent.snapshot(scaled.scale);

    // Exact rational re-check of L (x) x <= R (x) x.
    Matrix x(SemiringKind::MaxPlus, v, 1);
    for (int j = 0; j < v; ++j) x.set(j, 0, solution[static_cast<std::size_t>(j)]);
    if (!mat_leq(mat_mul(sys.lhs, x), mat_mul(sys.rhs, x)))
        throw Error("internal: two-sided descent returned a non-solution");
    return solution;
}

MeanPayoffGame build_sim_game(const WeightedAutomaton& a, const WeightedAutomaton& b) {
    require_maxplus(a.kind, "build_sim_game");
    if (a.kind != b.kind || !compatible(a, b))
        throw UsageError("build_sim_game needs compatible max-plus automata");

    const int n = a.states;
    const int m = b.states;
    const int sigma = static_cast<int>(a.alphabet.size());
    std::vector<int> bmap;
    for (const auto& s : a.alphabet) bmap.push_back(b.symbol_index(s));

    MeanPayoffGame g;
    // Min vertices: the scaling variable, then x[q,p] row-major.
    auto min_var = [&](int q, int p) { return 1 + q * n + p; };
    g.min_succ.resize(static_cast<std::size_t>(1 + m * n));
    g.min_names.push_back("x**");
    for (int q = 0; q < m; ++q)
        for (int p = 0; p < n; ++p)
            g.min_names.push_back("x[" + std::to_string(q) + "," + std::to_string(p) + "]");

    // Max vertices: initial rows (per state of a), step rows, final rows.
    auto max_initial = [&](int p) { return p; };
    auto max_step = [&](int s, int q, int p) { return n + (s * m + q) * n + p; };
    auto max_final = [&](int q) { return n + sigma * m * n + q; };
    g.max_succ.resize(static_cast<std::size_t>(n + sigma * m * n + m));
    for (int p = 0; p < n; ++p) g.max_names.push_back("ini[" + std::to_string(p) + "]");
    for (int s = 0; s < sigma; ++s)
        for (int q = 0; q < m; ++q)
            for (int p = 0; p < n; ++p)
                g.max_names.push_back("step[" + a.alphabet[static_cast<std::size_t>(s)] + "," +
                                      std::to_string(q) + "," + std::to_string(p) + "]");
    for (int q = 0; q < m; ++q) g.max_names.push_back("fin[" + std::to_string(q) + "]");

    auto add_min_edge = [&](int src, int dst, const Weight& w) {
        g.min_succ[static_cast<std::size_t>(src)].push_back({dst, -w.value()});
    };
    auto add_max_edge = [&](int src, int dst, const Weight& w) {
        g.max_succ[static_cast<std::size_t>(src)].push_back({dst, w.value()});
    };

    for (int p = 0; p < n; ++p) {
        Weight w = a.initial.at(0, p);
        if (!w.is_minus_inf()) add_min_edge(0, max_initial(p), w);
    }
    for (int s = 0; s < sigma; ++s) {
        const Matrix& ma = a.transitions[static_cast<std::size_t>(s)];
        for (int q = 0; q < m; ++q)
            for (int p = 0; p < n; ++p)
                for (const auto& [pp, w] : ma.row(p))
                    add_min_edge(min_var(q, p), max_step(s, q, pp), w);
    }
    for (int q = 0; q < m; ++q)
        for (int p = 0; p < n; ++p) {
            Weight w = a.final.at(p, 0);
            if (!w.is_minus_inf()) add_min_edge(min_var(q, p), max_final(q), w);
        }

    for (int p = 0; p < n; ++p)
        for (int q = 0; q < m; ++q) {
            Weight w = b.initial.at(0, q);
            if (!w.is_minus_inf()) add_max_edge(max_initial(p), min_var(q, p), w);
        }
    for (int s = 0; s < sigma; ++s) {
        const Matrix& mb = b.transitions[static_cast<std::size_t>(bmap[static_cast<std::size_t>(s)])];
        for (int q = 0; q < m; ++q)
            for (const auto& [qq, w] : mb.row(q))
                for (int p = 0; p < n; ++p)
                    add_max_edge(max_step(s, q, p), min_var(qq, p), w);
    }
    for (int q = 0; q < m; ++q) {
        Weight w = b.final.at(q, 0);
        if (!w.is_minus_inf()) add_max_edge(max_final(q), 0, w);
    }

    g.initial = 0;
    return g;
}

namespace {

/// Best rational approximation with bounded denominator, by scanning all
/// denominators up to the bound; exact and tiny for game-sized bounds.
mpq_class round_to_denominator(const mpq_class& value, int max_den) {
    mpq_class best;
    mpq_class best_err(-1);
    for (int q = 1; q <= max_den; ++q) {
        mpz_class num;
        // Nearest integer to value * q.
        mpq_class scaled = value * q;
        mpz_class fl;
        mpz_fdiv_q(fl.get_mpz_t(), scaled.get_num().get_mpz_t(), scaled.get_den().get_mpz_t());
        for (mpz_class cand = fl; cand <= fl + 1; ++cand) {
            mpq_class approx(cand, q);
            approx.canonicalize();
            mpq_class err = abs(value - approx);
            if (best_err < 0 || err < best_err) {
                best_err = err;
                best = approx;
            }
        }
    }
    return best;
}

}  // namespace

GameWinner mpg_winner(const MeanPayoffGame& game) {
    // Copy with stuck vertices wired to decisive gadget cycles: a stuck Min
    // vertex feeds a +1 cycle (Max wins from there), a stuck Max vertex a
    // -1 cycle.  The gadget vertices are reachable only through stuck
    // vertices, so no other value changes.
    MeanPayoffGame g = game;
    bool min_stuck = false, max_stuck = false;
    for (const auto& succ : g.min_succ) min_stuck |= succ.empty();
    for (const auto& succ : g.max_succ) max_stuck |= succ.empty();
    if (min_stuck) {
        int t_max = static_cast<int>(g.max_succ.size());
        int t_min = static_cast<int>(g.min_succ.size());
        for (auto& succ : g.min_succ)
            if (succ.empty()) succ.push_back({t_max, mpq_class(0)});
        g.max_succ.push_back({{t_min, mpq_class(1)}});
        g.max_names.push_back("win-cycle");
        g.min_succ.push_back({{t_max, mpq_class(1)}});
        g.min_names.push_back("win-cycle");
    }
    if (max_stuck) {
        int b_min = static_cast<int>(g.min_succ.size());
        int b_max = static_cast<int>(g.max_succ.size());
        for (auto& succ : g.max_succ)
            if (succ.empty()) succ.push_back({b_min, mpq_class(0)});
        g.min_succ.push_back({{b_max, mpq_class(-1)}});
        g.min_names.push_back("lose-cycle");
        g.max_succ.push_back({{b_min, mpq_class(-1)}});
        g.max_names.push_back("lose-cycle");
    }

    const int total = g.vertex_count();

    // Clear denominators.
    mpz_class lcm = 1;
    auto visit = [&](const std::vector<std::vector<MeanPayoffGame::Edge>>& side) {
        for (const auto& succ : side)
            for (const auto& e : succ)
                mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), e.weight.get_den().get_mpz_t());
    };
    visit(g.min_succ);
    visit(g.max_succ);
    mpz_class w_max = 1;
    auto int_weight = [&](const MeanPayoffGame::Edge& e) {
        mpz_class v = e.weight.get_num() * (lcm / e.weight.get_den());
        return v;
    };
    for (const auto& succ : g.min_succ)
        for (const auto& e : succ) w_max = std::max(w_max, mpz_class(abs(int_weight(e))));
    for (const auto& succ : g.max_succ)
        for (const auto& e : succ) w_max = std::max(w_max, mpz_class(abs(int_weight(e))));

    mpz_class steps_z = 4 * mpz_class(total) * total * total * w_max;
    // Running totals stay below 2 * steps * W; keep them inside int64.
    if (!steps_z.fits_slong_p() || 4 * steps_z * w_max >= (mpz_class(1) << 62))
        throw UsageError("game too large for exact value iteration");
    const long steps = steps_z.get_si();

    const int nmin = static_cast<int>(g.min_succ.size());
    const int nmax = static_cast<int>(g.max_succ.size());
    std::vector<std::vector<std::pair<int, long long>>> min_edges(static_cast<std::size_t>(nmin));
    std::vector<std::vector<std::pair<int, long long>>> max_edges(static_cast<std::size_t>(nmax));
    for (int i = 0; i < nmin; ++i)
        for (const auto& e : g.min_succ[static_cast<std::size_t>(i)])
            min_edges[static_cast<std::size_t>(i)].push_back({e.dst, int_weight(e).get_si()});
    for (int i = 0; i < nmax; ++i)
        for (const auto& e : g.max_succ[static_cast<std::size_t>(i)])
            max_edges[static_cast<std::size_t>(i)].push_back({e.dst, int_weight(e).get_si()});

    // vmin[u]: optimal total payoff of a play of 2k edges from Min vertex u.
    std::vector<long long> vmin(static_cast<std::size_t>(nmin), 0);
    std::vector<long long> half(static_cast<std::size_t>(nmax));
    std::vector<long long> vnext(static_cast<std::size_t>(nmin));
    for (long k = 0; k < steps; ++k) {
        for (int u = 0; u < nmax; ++u) {
            long long best = std::numeric_limits<long long>::min();
            for (const auto& [dst, weight] : max_edges[static_cast<std::size_t>(u)])
                best = std::max(best, weight + vmin[static_cast<std::size_t>(dst)]);
            half[static_cast<std::size_t>(u)] = best;
        }
        for (int u = 0; u < nmin; ++u) {
            long long best = std::numeric_limits<long long>::max();
            for (const auto& [dst, weight] : min_edges[static_cast<std::size_t>(u)])
                best = std::min(best, weight + half[static_cast<std::size_t>(dst)]);
            vnext[static_cast<std::size_t>(u)] = best;
        }
        vmin.swap(vnext);
    }

    // vmin now holds 2*steps-edge totals from Min vertices.
    mpq_class average(static_cast<long>(vmin[static_cast<std::size_t>(g.initial)]),
                      2 * static_cast<unsigned long>(steps));
    average.canonicalize();
    average /= lcm;
    mpq_class exact = round_to_denominator(average, total);
    return exact >= 0 ? GameWinner::MaxWins : GameWinner::MinWins;
}

void dump_game(const MeanPayoffGame& g, std::ostream& os) {
    for (std::size_t i = 0; i < g.min_succ.size(); ++i)
        for (const auto& e : g.min_succ[i])
            os << g.min_names[i] << ' ' << g.max_names[static_cast<std::size_t>(e.dst)] << ' '
               << e.weight << '\n';
    for (std::size_t i = 0; i < g.max_succ.size(); ++i)
        for (const auto& e : g.max_succ[i])
            os << g.max_names[i] << ' ' << g.min_names[static_cast<std::size_t>(e.dst)] << ' '
               << e.weight << '\n';
}

}  // namespace wsim
