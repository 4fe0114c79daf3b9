#include "wsim/tree.hh"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace wsim {

int RankedAlphabet::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < symbols.size(); ++i)
        if (symbols[i].name == name) return static_cast<int>(i);
    return -1;
}

bool RankedAlphabet::has_nullary() const {
    for (const auto& s : symbols)
        if (s.arity == 0) return true;
    return false;
}

void RankedAlphabet::validate() const {
    std::set<std::string> seen;
    for (const auto& s : symbols) {
        if (s.arity < 0) throw UsageError("negative arity");
        if (!seen.insert(s.name).second) throw UsageError("duplicate symbol '" + s.name + "'");
    }
}

namespace {

bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '-';
}

}  // namespace

Tree parse_tree(const RankedAlphabet& sigma, const std::string& text) {
    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    std::function<Tree()> parse = [&]() -> Tree {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && is_name_char(text[pos])) ++pos;
        if (pos == start) throw InputError("expected a symbol name at position " + std::to_string(start));
        std::string name = text.substr(start, pos - start);
        int sym = sigma.index_of(name);
        if (sym < 0) throw InputError("unknown tree symbol '" + name + "'");
        Tree t{sym, {}};
        skip_ws();
        if (pos < text.size() && text[pos] == '(') {
            ++pos;
            skip_ws();
            if (pos < text.size() && text[pos] == ')') {
                ++pos;
            } else {
                for (;;) {
                    t.children.push_back(parse());
                    skip_ws();
                    if (pos < text.size() && text[pos] == ',') {
                        ++pos;
                        continue;
                    }
                    if (pos < text.size() && text[pos] == ')') {
                        ++pos;
                        break;
                    }
                    throw InputError("expected ',' or ')' at position " + std::to_string(pos));
                }
            }
        }
        int arity = sigma.symbols[static_cast<std::size_t>(sym)].arity;
        if (static_cast<int>(t.children.size()) != arity)
            throw InputError("symbol '" + name + "' has arity " + std::to_string(arity) +
                             ", got " + std::to_string(t.children.size()) + " children");
        return t;
    };
    Tree t = parse();
    skip_ws();
    if (pos != text.size()) throw InputError("trailing input after tree term");
    return t;
}

std::string tree_to_string(const RankedAlphabet& sigma, const Tree& t) {
    std::string out = sigma.symbols.at(static_cast<std::size_t>(t.symbol)).name;
    if (!t.children.empty()) {
        out += '(';
        for (std::size_t i = 0; i < t.children.size(); ++i) {
            if (i) out += ',';
            out += tree_to_string(sigma, t.children[i]);
        }
        out += ')';
    }
    return out;
}

int tree_depth(const Tree& t) {
    int best = 0;
    for (const auto& c : t.children) best = std::max(best, tree_depth(c));
    return best + 1;
}

std::vector<Tree> enumerate_trees(const RankedAlphabet& sigma, int max_depth) {
    sigma.validate();
    if (!sigma.has_nullary()) throw UsageError("tree enumeration needs an arity-0 symbol");
    constexpr std::size_t kCap = 2000000;
    std::vector<Tree> current;
    for (int depth = 1; depth <= max_depth; ++depth) {
        std::vector<Tree> next;
        for (std::size_t s = 0; s < sigma.symbols.size(); ++s) {
            int arity = sigma.symbols[s].arity;
            if (arity == 0) {
                next.push_back(Tree{static_cast<int>(s), {}});
                continue;
            }
            if (current.empty()) continue;
            // Odometer over tuples of previously enumerated trees.
            std::vector<std::size_t> idx(static_cast<std::size_t>(arity), 0);
            for (;;) {
                Tree t{static_cast<int>(s), {}};
                for (std::size_t i = 0; i < idx.size(); ++i) t.children.push_back(current[idx[i]]);
                next.push_back(std::move(t));
                if (next.size() > kCap) throw UsageError("tree enumeration exceeds the size cap");
                int j = arity - 1;
                while (j >= 0 && ++idx[static_cast<std::size_t>(j)] == current.size()) {
                    idx[static_cast<std::size_t>(j)] = 0;
                    --j;
                }
                if (j < 0) break;
            }
        }
        current = std::move(next);
    }
    return current;
}

WeightedTreeAutomaton::WeightedTreeAutomaton(SemiringKind k, int n, RankedAlphabet sigma)
    : kind(k), states(n), alphabet(std::move(sigma)), initial(k, 1, n) {
    alphabet.validate();
    if (n < 1) throw UsageError("tree automaton needs at least one state");
    for (const auto& sym : alphabet.symbols) {
        long long cols = 1;
        for (int i = 0; i < sym.arity; ++i) {
            cols *= n;
            if (cols > 4000000) throw UsageError("arity too large for this state count");
        }
        transitions.emplace_back(k, n, static_cast<int>(cols));
    }
}

int WeightedTreeAutomaton::tuple_index(int symbol, const std::vector<int>& tuple) const {
    const auto& sym = alphabet.symbols.at(static_cast<std::size_t>(symbol));
    if (static_cast<int>(tuple.size()) != sym.arity) throw UsageError("tuple arity mismatch");
    int index = 0;
    for (int q : tuple) {
        if (q < 0 || q >= states) throw UsageError("tuple state out of range");
        index = index * states + q;
    }
    return index;
}

void WeightedTreeAutomaton::validate() const {
    alphabet.validate();
    if (states < 1) throw UsageError("tree automaton needs at least one state");
    if (transitions.size() != alphabet.symbols.size())
        throw UsageError("one transition matrix per symbol required");
    for (std::size_t s = 0; s < transitions.size(); ++s) {
        long long cols = 1;
        for (int i = 0; i < alphabet.symbols[s].arity; ++i) cols *= states;
        if (transitions[s].kind() != kind || transitions[s].rows() != states ||
            transitions[s].cols() != static_cast<int>(cols))
            throw UsageError("transition matrix shape/kind mismatch for symbol " +
                             alphabet.symbols[s].name);
    }
    if (initial.kind() != kind || initial.rows() != 1 || initial.cols() != states)
        throw UsageError("initial vector must be 1 x states");
}

bool compatible(const WeightedTreeAutomaton& a, const WeightedTreeAutomaton& b) {
    if (a.kind != b.kind) return false;
    auto key = [](const RankedAlphabet& r) {
        std::set<std::pair<std::string, int>> s;
        for (const auto& sym : r.symbols) s.emplace(sym.name, sym.arity);
        return s;
    };
    return key(a.alphabet) == key(b.alphabet);
}

namespace {

Matrix phi(const WeightedTreeAutomaton& a, const Tree& t) {
    const auto& sym = a.alphabet.symbols.at(static_cast<std::size_t>(t.symbol));
    if (static_cast<int>(t.children.size()) != sym.arity)
        throw UsageError("tree arity mismatch at symbol '" + sym.name + "'");
    Matrix product(a.kind, 1, 1);
    product.set(0, 0, Weight::one(a.kind));
    for (const auto& child : t.children) product = kron(product, phi(a, child));
    return mat_mul(a.transitions[static_cast<std::size_t>(t.symbol)], product);
}

}  // namespace

Weight tree_weight(const WeightedTreeAutomaton& a, const Tree& t) {
    return mat_mul(a.initial, phi(a, t)).at(0, 0);
}

int TreeConstraintSystem::max_degree() const {
    std::size_t deg = 0;
    for (const auto& c : constraints) {
        for (const auto& m : c.lhs) deg = std::max(deg, m.vars.size());
        for (const auto& m : c.rhs) deg = std::max(deg, m.vars.size());
    }
    return static_cast<int>(deg);
}

std::size_t TreeConstraintSystem::count_family(ConstraintTag::Family f) const {
    std::size_t n = 0;
    for (const auto& c : constraints)
        if (c.tag.family == f) ++n;
    return n;
}

namespace {

void require_tree_compatible(const WeightedTreeAutomaton& a, const WeightedTreeAutomaton& b) {
    if (a.kind != b.kind) throw UsageError("tree automata use different semirings");
    if (!compatible(a, b)) throw UsageError("tree automata use different ranked alphabets");
}

std::vector<int> decode_tuple(int index, int arity, int states) {
    std::vector<int> tuple(static_cast<std::size_t>(arity));
    for (int i = arity - 1; i >= 0; --i) {
        tuple[static_cast<std::size_t>(i)] = index % states;
        index /= states;
    }
    return tuple;
}

}  // namespace

TreeConstraintSystem assemble_tree_constraints(const WeightedTreeAutomaton& a,
                                               const WeightedTreeAutomaton& b,
                                               Direction dir) {
    require_tree_compatible(a, b);
    const int n = a.states;
    const int m = b.states;
    const Weight zero = Weight::zero(a.kind);

    TreeConstraintSystem cs;
    cs.kind = a.kind;
    cs.dir = dir;
    cs.var_rows = dir == Direction::Fwd ? m : n;
    cs.var_cols = dir == Direction::Fwd ? n : m;

    std::vector<int> bmap;
    for (const auto& sym : a.alphabet.symbols) bmap.push_back(b.alphabet.index_of(sym.name));

    if (dir == Direction::Fwd) {
        for (int p = 0; p < n; ++p) {
            TreeConstraint c{a.initial.at(0, p), {}, zero, {},
                             {ConstraintTag::Family::Initial, -1, -1, p}};
            for (int q = 0; q < m; ++q) {
                Weight w = b.initial.at(0, q);
                if (!w.is_zero()) c.rhs.push_back({w, {cs.var_index(q, p)}});
            }
            cs.constraints.push_back(std::move(c));
        }
        for (std::size_t s = 0; s < a.alphabet.symbols.size(); ++s) {
            const int arity = a.alphabet.symbols[s].arity;
            const Matrix& ma = a.transitions[s];
            const Matrix& mb = b.transitions[static_cast<std::size_t>(bmap[s])];
            for (int q = 0; q < m; ++q) {
                for (int col = 0; col < ma.cols(); ++col) {
                    TreeConstraint c{zero, {}, zero, {},
                                     {ConstraintTag::Family::Step, static_cast<int>(s), q, col}};
                    for (int p = 0; p < n; ++p) {
                        Weight w = ma.at(p, col);
                        if (!w.is_zero()) c.lhs.push_back({w, {cs.var_index(q, p)}});
                    }
                    const auto ptuple = decode_tuple(col, arity, n);
                    for (const auto& [bcol, w] : mb.row(q)) {
                        const auto qtuple = decode_tuple(bcol, arity, m);
                        TreeMonomial mono{w, {}};
                        for (int i = 0; i < arity; ++i)
                            mono.vars.push_back(cs.var_index(qtuple[static_cast<std::size_t>(i)],
                                                             ptuple[static_cast<std::size_t>(i)]));
                        c.rhs.push_back(std::move(mono));
                    }
                    cs.constraints.push_back(std::move(c));
                }
            }
        }
    } else {
        for (int q = 0; q < m; ++q) {
            TreeConstraint c{zero, {}, b.initial.at(0, q), {},
                             {ConstraintTag::Family::Initial, -1, -1, q}};
            for (int p = 0; p < n; ++p) {
                Weight w = a.initial.at(0, p);
                if (!w.is_zero()) c.lhs.push_back({w, {cs.var_index(p, q)}});
            }
            cs.constraints.push_back(std::move(c));
        }
        for (std::size_t s = 0; s < a.alphabet.symbols.size(); ++s) {
            const int arity = a.alphabet.symbols[s].arity;
            const Matrix& ma = a.transitions[s];
            const Matrix& mb = b.transitions[static_cast<std::size_t>(bmap[s])];
            for (int p = 0; p < n; ++p) {
                for (int col = 0; col < mb.cols(); ++col) {
                    TreeConstraint c{zero, {}, zero, {},
                                     {ConstraintTag::Family::Step, static_cast<int>(s), p, col}};
                    const auto qtuple = decode_tuple(col, arity, m);
                    for (const auto& [acol, w] : ma.row(p)) {
                        const auto ptuple = decode_tuple(acol, arity, n);
                        TreeMonomial mono{w, {}};
                        for (int i = 0; i < arity; ++i)
                            mono.vars.push_back(cs.var_index(ptuple[static_cast<std::size_t>(i)],
                                                             qtuple[static_cast<std::size_t>(i)]));
                        c.lhs.push_back(std::move(mono));
                    }
                    for (int q = 0; q < m; ++q) {
                        Weight w = mb.at(q, col);
                        if (!w.is_zero()) c.rhs.push_back({w, {cs.var_index(p, q)}});
                    }
                    cs.constraints.push_back(std::move(c));
                }
            }
        }
    }
    return cs;
}

namespace {

Weight eval_monomials(SemiringKind kind, const Weight& constant,
                      const std::vector<TreeMonomial>& monomials, const Matrix& x) {
    Weight acc = constant;
    const int cols = x.cols();
    for (const auto& m : monomials) {
        Weight term = m.coeff;
        for (int var : m.vars) {
            if (term.is_zero()) break;
            term = sr_mul(term, x.at(var / cols, var % cols));
        }
        acc = sr_add(acc, term);
    }
    (void)kind;
    return acc;
}

std::string describe_tree_tag(const WeightedTreeAutomaton& a, const ConstraintTag& tag) {
    std::ostringstream os;
    switch (tag.family) {
        case ConstraintTag::Family::Initial:
            os << "initial[" << tag.col << "]";
            break;
        case ConstraintTag::Family::Step:
            os << "step(" << a.alphabet.symbols.at(static_cast<std::size_t>(tag.symbol)).name
               << ")[" << tag.row << ",col " << tag.col << "]";
            break;
        case ConstraintTag::Family::Final:
            os << "final[" << tag.row << "]";
            break;
    }
    return os.str();
}

}  // namespace

VerifyReport verify_tree_sim(const WeightedTreeAutomaton& a, const WeightedTreeAutomaton& b,
                             Direction dir, const Matrix& x) {
    TreeConstraintSystem cs = assemble_tree_constraints(a, b, dir);
    if (x.kind() != a.kind || x.rows() != cs.var_rows || x.cols() != cs.var_cols)
        throw UsageError("candidate matrix must be " + std::to_string(cs.var_rows) + "x" +
                         std::to_string(cs.var_cols) + " over " + kind_name(a.kind));
    VerifyReport report;
    for (std::size_t i = 0; i < cs.constraints.size(); ++i) {
        const TreeConstraint& c = cs.constraints[i];
        Weight lhs = eval_monomials(cs.kind, c.lhs_const, c.lhs, x);
        Weight rhs = eval_monomials(cs.kind, c.rhs_const, c.rhs, x);
        ++report.checked;
        if (!sr_leq(lhs, rhs)) {
            report.ok = false;
            report.violated_index = static_cast<int>(i);
            report.first_violation = describe_tree_tag(a, c.tag) + ": " + format_weight(lhs) +
                                     " > " + format_weight(rhs);
            return report;
        }
    }
    report.ok = true;
    return report;
}

namespace {

SearchOutcome boolean_tree_fwd(const WeightedTreeAutomaton& a, const WeightedTreeAutomaton& b) {
    const int n = a.states;
    const int m = b.states;
    std::vector<int> bmap;
    for (const auto& sym : a.alphabet.symbols) bmap.push_back(b.alphabet.index_of(sym.name));

    std::vector<std::vector<bool>> x(static_cast<std::size_t>(m),
                                     std::vector<bool>(static_cast<std::size_t>(n), true));
    bool changed = true;
    while (changed) {
        changed = false;
        for (int q = 0; q < m; ++q) {
            for (int p = 0; p < n; ++p) {
                if (!x[static_cast<std::size_t>(q)][static_cast<std::size_t>(p)]) continue;
                bool keep = true;
                for (std::size_t s = 0; keep && s < a.alphabet.symbols.size(); ++s) {
                    const int arity = a.alphabet.symbols[s].arity;
                    const Matrix& mb = b.transitions[static_cast<std::size_t>(bmap[s])];
                    for (const auto& [col, w] : a.transitions[s].row(p)) {
                        const auto ptuple = decode_tuple(col, arity, n);
                        bool witness = false;
                        for (const auto& [bcol, bw] : mb.row(q)) {
                            const auto qtuple = decode_tuple(bcol, arity, m);
                            bool all = true;
                            for (int i = 0; i < arity && all; ++i)
                                all = x[static_cast<std::size_t>(qtuple[static_cast<std::size_t>(i)])]
                                       [static_cast<std::size_t>(ptuple[static_cast<std::size_t>(i)])];
                            if (all) {
                                witness = true;
                                break;
                            }
                        }
                        if (!witness) {
                            keep = false;
                            break;
                        }
                    }
                }
                if (!keep) {
                    x[static_cast<std::size_t>(q)][static_cast<std::size_t>(p)] = false;
                    changed = true;
                }
            }
        }
    }

    Matrix result(SemiringKind::Boolean, m, n);
    for (int q = 0; q < m; ++q)
        for (int p = 0; p < n; ++p)
            if (x[static_cast<std::size_t>(q)][static_cast<std::size_t>(p)])
                result.set(q, p, Weight::boolean(true));

    SearchOutcome out;
    for (int p = 0; p < n; ++p) {
        if (a.initial.at(0, p).is_zero()) continue;
        bool witness = false;
        for (int q = 0; q < m && !witness; ++q)
            witness = !b.initial.at(0, q).is_zero() && !result.at(q, p).is_zero();
        if (!witness) {
            out.tag = SearchOutcome::Tag::NoSimulation;
            out.detail = "greatest step-consistent matrix fails the initial constraint";
            return out;
        }
    }
    VerifyReport check = verify_tree_sim(a, b, Direction::Fwd, result);
    if (!check.ok) throw Error("internal: greatest Boolean tree candidate failed verification");
    out.tag = SearchOutcome::Tag::Found;
    out.witness = result;
    return out;
}

/// Exact backtracking for the backward Boolean case.  Solutions are not
/// closed under union there (mixed Kronecker factors), so no greatest
/// fixpoint exists; plain search with pruning decides small instances.
SearchOutcome boolean_tree_bwd(const WeightedTreeAutomaton& a, const WeightedTreeAutomaton& b) {
    TreeConstraintSystem cs = assemble_tree_constraints(a, b, Direction::Bwd);
    const int vars = cs.var_count();
    std::vector<int> assign(static_cast<std::size_t>(vars), -1);  // -1 unknown

    auto definitely_violated = [&](const TreeConstraint& c) {
        // lhs surely reaches 1 while rhs surely stays 0.
        auto side_one = [&](const Weight& constant, const std::vector<TreeMonomial>& side) {
            if (!constant.is_zero()) return true;
            for (const auto& mono : side) {
                bool all_one = true;
                for (int v : mono.vars)
                    if (assign[static_cast<std::size_t>(v)] != 1) {
                        all_one = false;
                        break;
                    }
                if (all_one) return true;
            }
            return false;
        };
        auto side_zero = [&](const Weight& constant, const std::vector<TreeMonomial>& side) {
            if (!constant.is_zero()) return false;
            for (const auto& mono : side) {
                bool dead = false;
                for (int v : mono.vars)
                    if (assign[static_cast<std::size_t>(v)] == 0) {
                        dead = true;
                        break;
                    }
                if (!dead) return false;
            }
            return true;
        };
        return side_one(c.lhs_const, c.lhs) && side_zero(c.rhs_const, c.rhs);
    };

    long budget = 1 << 22;
    std::function<bool(int)> search = [&](int next) -> bool {
        if (--budget < 0) throw Error("budget");
        for (const auto& c : cs.constraints)
            if (definitely_violated(c)) return false;
        if (next == vars) return true;
        for (int value : {1, 0}) {
            assign[static_cast<std::size_t>(next)] = value;
            if (search(next + 1)) return true;
        }
        assign[static_cast<std::size_t>(next)] = -1;
        return false;
    };

    SearchOutcome out;
    bool ok;
    try {
        ok = search(0);
    } catch (const Error&) {
        out.tag = SearchOutcome::Tag::Unknown;
        out.detail = "backtracking budget exhausted";
        return out;
    }
    if (!ok) {
        out.tag = SearchOutcome::Tag::NoSimulation;
        out.detail = "exhaustive search over Boolean candidates";
        return out;
    }
    Matrix x(SemiringKind::Boolean, cs.var_rows, cs.var_cols);
    for (int v = 0; v < vars; ++v)
        if (assign[static_cast<std::size_t>(v)] == 1)
            x.set(v / cs.var_cols, v % cs.var_cols, Weight::boolean(true));
    VerifyReport check = verify_tree_sim(a, b, Direction::Bwd, x);
    if (!check.ok) throw Error("internal: backtracking produced a non-simulation");
    out.tag = SearchOutcome::Tag::Found;
    out.witness = x;
    return out;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % bound);
    for (;;) {
        std::uint64_t r = rng();
        if (r < limit) return r % bound;
    }
}

SearchOutcome numeric_tree_search(const WeightedTreeAutomaton& a, const WeightedTreeAutomaton& b,
                                  Direction dir, const TreeSearchConfig& config) {
    TreeConstraintSystem cs = assemble_tree_constraints(a, b, dir);
    const int vars = cs.var_count();

    // Candidate entries: the weight support of both automata plus zero/one.
    std::vector<Weight> pool{Weight::zero(a.kind), Weight::one(a.kind)};
    auto collect = [&](const WeightedTreeAutomaton& wta) {
        for (const auto& m : wta.transitions)
            for (int r = 0; r < m.rows(); ++r)
                for (const auto& [c, w] : m.row(r)) pool.push_back(w);
        for (const auto& [c, w] : wta.initial.row(0)) pool.push_back(w);
    };
    collect(a);
    collect(b);
    std::sort(pool.begin(), pool.end(), [](const Weight& x, const Weight& y) {
        if (x.is_minus_inf() != y.is_minus_inf()) return x.is_minus_inf();
        if (x.is_minus_inf()) return false;
        return x.value() < y.value();
    });
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

    auto violations = [&](const Matrix& x) {
        int count = 0;
        for (const auto& c : cs.constraints) {
            Weight lhs = eval_monomials(cs.kind, c.lhs_const, c.lhs, x);
            Weight rhs = eval_monomials(cs.kind, c.rhs_const, c.rhs, x);
            if (!sr_leq(lhs, rhs)) ++count;
        }
        return count;
    };

    std::mt19937_64 rng(config.seed);
    SearchOutcome out;
    for (int start = 0; start < config.starts; ++start) {
        Matrix x(a.kind, cs.var_rows, cs.var_cols);
        if (start == 0) {
            // Partial identity: exact identity when the shapes agree.
            for (int i = 0; i < std::min(cs.var_rows, cs.var_cols); ++i)
                x.set(i, i, Weight::one(a.kind));
        } else if (start == 1) {
            for (int r = 0; r < cs.var_rows; ++r)
                for (int c = 0; c < cs.var_cols; ++c) x.set(r, c, Weight::one(a.kind));
        } else {
            for (int r = 0; r < cs.var_rows; ++r)
                for (int c = 0; c < cs.var_cols; ++c)
                    x.set(r, c, pool[static_cast<std::size_t>(uniform_below(rng, pool.size()))]);
        }
        int current = violations(x);
        for (int sweep = 0; sweep < config.sweeps && current > 0; ++sweep) {
            bool improved = false;
            for (int v = 0; v < vars && current > 0; ++v) {
                const int r = v / cs.var_cols, c = v % cs.var_cols;
                Weight original = x.at(r, c);
                Weight best_w = original;
                int best = current;
                for (const auto& candidate : pool) {
                    if (candidate == original) continue;
                    x.set(r, c, candidate);
                    int score = violations(x);
                    if (score < best) {
                        best = score;
                        best_w = candidate;
                    }
                }
                x.set(r, c, best_w);
                if (best < current) {
                    current = best;
                    improved = true;
                }
            }
            if (!improved) break;
        }
        if (current == 0) {
            VerifyReport check = verify_tree_sim(a, b, dir, x);
            if (!check.ok) throw Error("internal: zero-violation candidate failed verification");
            out.tag = SearchOutcome::Tag::Found;
            out.witness = x;
            return out;
        }
    }
    out.tag = SearchOutcome::Tag::Unknown;
    out.detail = "randomized search exhausted " + std::to_string(config.starts) + " starts";
    return out;
}

}  // namespace

SearchOutcome find_tree_sim(const WeightedTreeAutomaton& a, const WeightedTreeAutomaton& b,
                            Direction dir, const TreeSearchConfig& config) {
    require_tree_compatible(a, b);
    if (a.kind == SemiringKind::Boolean)
        return dir == Direction::Fwd ? boolean_tree_fwd(a, b) : boolean_tree_bwd(a, b);
    return numeric_tree_search(a, b, dir, config);
}

WeightedTreeAutomaton tree_fpe(const WeightedTreeAutomaton& a, const std::vector<int>& p) {
    a.validate();
    std::vector<bool> in_p(static_cast<std::size_t>(a.states), false);
    for (int q : p) {
        if (q < 0 || q >= a.states)
            throw UsageError("partial-execution parameter state " + std::to_string(q) + " out of range");
        in_p[static_cast<std::size_t>(q)] = true;
    }

    // New states: one-step behaviors (symbol, column tuple) of replaced
    // states, then survivors ascending.
    std::set<std::pair<int, int>> pair_set;
    std::vector<int> survivors;
    for (int x = 0; x < a.states; ++x) {
        if (!in_p[static_cast<std::size_t>(x)]) {
            survivors.push_back(x);
            continue;
        }
        for (std::size_t s = 0; s < a.transitions.size(); ++s)
            for (const auto& [col, w] : a.transitions[s].row(x)) pair_set.emplace(static_cast<int>(s), col);
    }
    std::vector<std::pair<int, int>> pairs(pair_set.begin(), pair_set.end());
    auto pair_index = [&](int s, int col) {
        auto it = std::lower_bound(pairs.begin(), pairs.end(), std::make_pair(s, col));
        return static_cast<int>(it - pairs.begin());
    };
    auto survivor_index = [&](int q) {
        auto it = std::lower_bound(survivors.begin(), survivors.end(), q);
        return static_cast<int>(pairs.size()) + static_cast<int>(it - survivors.begin());
    };
    const int new_states = static_cast<int>(pairs.size() + survivors.size());

    WeightedTreeAutomaton out(a.kind, new_states, a.alphabet);

    // One-step unfolding of an original state.
    auto unfold = [&](int y) {
        std::vector<std::pair<int, Weight>> result;
        if (!in_p[static_cast<std::size_t>(y)]) {
            result.emplace_back(survivor_index(y), Weight::one(a.kind));
            return result;
        }
        for (std::size_t s = 0; s < a.transitions.size(); ++s)
            for (const auto& [col, w] : a.transitions[s].row(y))
                result.emplace_back(pair_index(static_cast<int>(s), col), w);
        return result;
    };

    auto add = [&](Matrix& m, int r, int c, const Weight& w) {
        m.set(r, c, sr_add(m.at(r, c), w));
    };

    for (const auto& [x, w] : a.initial.row(0)) {
        for (const auto& [u, step] : unfold(x)) add(out.initial, 0, u, sr_mul(w, step));
    }

    // Writes the unfolded image of an original tuple into a row of M'(s),
    // scaled by `scale`: the cartesian product of the children unfoldings.
    auto emit_tuple = [&](Matrix& target, int row, const std::vector<int>& tuple,
                          const Weight& scale) {
        std::vector<std::vector<std::pair<int, Weight>>> options;
        options.reserve(tuple.size());
        for (int y : tuple) options.push_back(unfold(y));
        std::vector<std::size_t> idx(options.size(), 0);
        for (;;) {
            Weight w = scale;
            int col = 0;
            for (std::size_t i = 0; i < options.size(); ++i) {
                const auto& [u, step] = options[i][idx[i]];
                w = sr_mul(w, step);
                col = col * new_states + u;
            }
            if (!w.is_zero()) add(target, row, col, w);
            int j = static_cast<int>(options.size()) - 1;
            while (j >= 0 && ++idx[static_cast<std::size_t>(j)] == options[static_cast<std::size_t>(j)].size()) {
                idx[static_cast<std::size_t>(j)] = 0;
                --j;
            }
            if (j < 0) break;
        }
    };

    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto [s, col] = pairs[i];
        const int arity = a.alphabet.symbols[static_cast<std::size_t>(s)].arity;
        emit_tuple(out.transitions[static_cast<std::size_t>(s)], static_cast<int>(i),
                   decode_tuple(col, arity, a.states), Weight::one(a.kind));
    }
    for (int x : survivors) {
        const int row = survivor_index(x);
        for (std::size_t s = 0; s < a.transitions.size(); ++s) {
            const int arity = a.alphabet.symbols[s].arity;
            for (const auto& [col, w] : a.transitions[s].row(x))
                emit_tuple(out.transitions[s], row, decode_tuple(col, arity, a.states), w);
        }
    }

    out.state_names.clear();
    for (auto [s, col] : pairs) {
        const auto& sym = a.alphabet.symbols[static_cast<std::size_t>(s)];
        std::string name = "(" + sym.name;
        auto tuple = decode_tuple(col, sym.arity, a.states);
        for (int q : tuple) name += "," + std::to_string(q);
        name += ")";
        out.state_names.push_back(name);
    }
    for (int x : survivors) out.state_names.push_back(std::to_string(x));
    return out;
}

namespace {

struct Line {
    int number;
    std::vector<std::string> tokens;
};

std::vector<Line> tokenize(std::istream& is) {
    std::vector<Line> lines;
    std::string raw;
    int number = 0;
    while (std::getline(is, raw)) {
        ++number;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::istringstream ls(raw);
        Line line{number, {}};
        std::string tok;
        while (ls >> tok) line.tokens.push_back(tok);
        if (!line.tokens.empty()) lines.push_back(std::move(line));
    }
    return lines;
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw InputError("line " + std::to_string(line) + ": " + msg);
}

}  // namespace

WeightedTreeAutomaton load_tree_automaton(std::istream& is) {
    auto lines = tokenize(is);
    std::size_t at = 0;
    auto next_line = [&](const std::string& kw) -> const Line& {
        if (at >= lines.size()) throw InputError("unexpected end of file, expected '" + kw + "'");
        const Line& line = lines[at];
        if (line.tokens[0] != kw) fail(line.number, "expected '" + kw + "', got '" + line.tokens[0] + "'");
        return line;
    };

    const Line& sem = next_line("semiring");
    if (sem.tokens.size() != 2) fail(sem.number, "semiring line needs exactly one tag");
    SemiringKind kind = SemiringKind::PlusTimes;
    try {
        kind = kind_from_name(sem.tokens[1]);
    } catch (const InputError& e) {
        fail(sem.number, e.what());
    }
    ++at;

    const Line& st = next_line("states");
    if (st.tokens.size() != 2) fail(st.number, "states line needs exactly one count");
    int states = 0;
    try {
        states = std::stoi(st.tokens[1]);
    } catch (const std::exception&) {
        fail(st.number, "invalid state count");
    }
    ++at;

    const Line& rk = next_line("ranked");
    RankedAlphabet sigma;
    for (std::size_t i = 1; i < rk.tokens.size(); ++i) {
        const std::string& tok = rk.tokens[i];
        auto colon = tok.find(':');
        if (colon == std::string::npos) fail(rk.number, "expected <sym>:<arity>, got '" + tok + "'");
        int arity = 0;
        try {
            arity = std::stoi(tok.substr(colon + 1));
        } catch (const std::exception&) {
            fail(rk.number, "invalid arity in '" + tok + "'");
        }
        sigma.symbols.push_back({tok.substr(0, colon), arity});
    }
    ++at;

    WeightedTreeAutomaton a;
    try {
        a = WeightedTreeAutomaton(kind, states, sigma);
    } catch (const UsageError& e) {
        fail(rk.number, e.what());
    }

    const Line& ini = next_line("initial");
    for (std::size_t i = 1; i < ini.tokens.size(); ++i) {
        const std::string& tok = ini.tokens[i];
        auto colon = tok.find(':');
        if (colon == std::string::npos) fail(ini.number, "expected <state>:<weight>, got '" + tok + "'");
        int q = 0;
        try {
            q = std::stoi(tok.substr(0, colon));
        } catch (const std::exception&) {
            fail(ini.number, "invalid state in '" + tok + "'");
        }
        if (q < 0 || q >= states) fail(ini.number, "state out of range in '" + tok + "'");
        try {
            a.initial.set(0, q, parse_weight(kind, tok.substr(colon + 1)));
        } catch (const Error& e) {
            fail(ini.number, e.what());
        }
    }
    ++at;

    for (; at < lines.size(); ++at) {
        const Line& line = lines[at];
        if (line.tokens[0] != "trans") fail(line.number, "expected 'trans'");
        if (line.tokens.size() != 5)
            fail(line.number, "trans line needs: trans <sym> <src> <dst_1,...,dst_k> <weight>");
        int sym = a.alphabet.index_of(line.tokens[1]);
        if (sym < 0) fail(line.number, "unknown symbol '" + line.tokens[1] + "'");
        int arity = a.alphabet.symbols[static_cast<std::size_t>(sym)].arity;
        int src = 0;
        try {
            src = std::stoi(line.tokens[2]);
        } catch (const std::exception&) {
            fail(line.number, "invalid source state");
        }
        if (src < 0 || src >= states) fail(line.number, "source state out of range");
        std::vector<int> tuple;
        if (line.tokens[3] != "-") {
            std::istringstream ts(line.tokens[3]);
            std::string part;
            while (std::getline(ts, part, ',')) {
                try {
                    tuple.push_back(std::stoi(part));
                } catch (const std::exception&) {
                    fail(line.number, "invalid child state '" + part + "'");
                }
            }
        }
        if (static_cast<int>(tuple.size()) != arity)
            fail(line.number, "symbol '" + line.tokens[1] + "' needs " + std::to_string(arity) +
                                  " children");
        for (int q : tuple)
            if (q < 0 || q >= states) fail(line.number, "child state out of range");
        Weight w = Weight::zero(kind);
        try {
            w = parse_weight(kind, line.tokens[4]);
        } catch (const Error& e) {
            fail(line.number, e.what());
        }
        int col = a.tuple_index(sym, tuple);
        if (!a.transitions[static_cast<std::size_t>(sym)].at(src, col).is_zero())
            fail(line.number, "duplicate transition");
        a.transitions[static_cast<std::size_t>(sym)].set(src, col, w);
    }
    return a;
}

WeightedTreeAutomaton load_tree_automaton_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InputError("cannot open '" + path + "'");
    try {
        return load_tree_automaton(is);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

void save_tree_automaton(const WeightedTreeAutomaton& a, std::ostream& os) {
    os << "semiring " << kind_name(a.kind) << '\n';
    os << "states " << a.states << '\n';
    os << "ranked";
    for (const auto& sym : a.alphabet.symbols) os << ' ' << sym.name << ':' << sym.arity;
    os << '\n';
    os << "initial";
    for (const auto& [q, w] : a.initial.row(0)) os << ' ' << q << ':' << format_weight(w);
    os << '\n';
    for (std::size_t s = 0; s < a.transitions.size(); ++s) {
        const int arity = a.alphabet.symbols[s].arity;
        for (int src = 0; src < a.states; ++src) {
            for (const auto& [col, w] : a.transitions[s].row(src)) {
                os << "trans " << a.alphabet.symbols[s].name << ' ' << src << ' ';
                if (arity == 0) {
                    os << '-';
                } else {
                    auto tuple = decode_tuple(col, arity, a.states);
                    for (std::size_t i = 0; i < tuple.size(); ++i) {
                        if (i) os << ',';
                        os << tuple[i];
                    }
                }
                os << ' ' << format_weight(w) << '\n';
            }
        }
    }
}

void save_tree_automaton_file(const WeightedTreeAutomaton& a, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw InputError("cannot write '" + path + "'");
    save_tree_automaton(a, os);
}

}  // namespace wsim
