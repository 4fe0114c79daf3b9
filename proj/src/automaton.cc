#include "wsim/automaton.hh"

#include <algorithm>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

namespace wsim {

WeightedAutomaton::WeightedAutomaton(SemiringKind k, int n, std::vector<std::string> sigma)
    : kind(k),
      states(n),
      alphabet(std::move(sigma)),
      initial(k, 1, n),
      final(k, n, 1) {
    for (std::size_t i = 0; i < alphabet.size(); ++i)
        transitions.emplace_back(k, n, n);
    validate();
}

int WeightedAutomaton::symbol_index(const std::string& name) const {
    for (std::size_t i = 0; i < alphabet.size(); ++i)
        if (alphabet[i] == name) return static_cast<int>(i);
    return -1;
}

const std::string& WeightedAutomaton::state_label(int q) const {
    static const std::string empty;
    if (state_names.size() == static_cast<std::size_t>(states) && q >= 0 && q < states)
        return state_names[static_cast<std::size_t>(q)];
    return empty;
}

void WeightedAutomaton::validate() const {
    if (states < 1) throw UsageError("automaton needs at least one state");
    std::set<std::string> seen(alphabet.begin(), alphabet.end());
    if (seen.size() != alphabet.size()) throw UsageError("duplicate alphabet symbol");
    if (transitions.size() != alphabet.size())
        throw UsageError("one transition matrix per symbol required");
    for (const auto& m : transitions)
        if (m.kind() != kind || m.rows() != states || m.cols() != states)
            throw UsageError("transition matrix shape/kind mismatch");
    if (initial.kind() != kind || initial.rows() != 1 || initial.cols() != states)
        throw UsageError("initial vector must be 1 x states");
    if (final.kind() != kind || final.rows() != states || final.cols() != 1)
        throw UsageError("final vector must be states x 1");
    if (!state_names.empty() && state_names.size() != static_cast<std::size_t>(states))
        throw UsageError("state_names must be empty or cover all states");
}

bool compatible(const WeightedAutomaton& a, const WeightedAutomaton& b) {
    if (a.kind != b.kind) return false;
    std::set<std::string> sa(a.alphabet.begin(), a.alphabet.end());
    std::set<std::string> sb(b.alphabet.begin(), b.alphabet.end());
    return sa == sb;
}

Word parse_word(const WeightedAutomaton& a, const std::vector<std::string>& symbols) {
    Word w;
    for (const auto& s : symbols) {
        int idx = a.symbol_index(s);
        if (idx < 0) throw UsageError("symbol '" + s + "' is not in the alphabet");
        w.push_back(idx);
    }
    return w;
}

std::string format_word(const WeightedAutomaton& a, const Word& w) {
    if (w.empty()) return "<empty>";
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out += ' ';
        out += a.alphabet.at(static_cast<std::size_t>(w[i]));
    }
    return out;
}

Weight word_weight(const WeightedAutomaton& a, const Word& w) {
    Matrix row = a.initial;
    for (int sym : w) {
        if (sym < 0 || sym >= static_cast<int>(a.alphabet.size()))
            throw UsageError("word symbol out of range");
        row = mat_mul(row, a.transitions[static_cast<std::size_t>(sym)]);
    }
    return mat_mul(row, a.final).at(0, 0);
}

WeightedAutomaton transpose_automaton(const WeightedAutomaton& a) {
    WeightedAutomaton out(a.kind, a.states, a.alphabet);
    for (std::size_t i = 0; i < a.transitions.size(); ++i)
        out.transitions[i] = transpose(a.transitions[i]);
    out.initial = transpose(a.final);
    out.final = transpose(a.initial);
    out.state_names = a.state_names;
    return out;
}

WeightedAutomaton remove_trap_states(const WeightedAutomaton& a) {
    // Backward reachability from the support of the final vector along
    // non-zero transitions.  A path of non-zero weights accumulates to a
    // non-zero weight in all three semirings.
    std::vector<bool> alive(static_cast<std::size_t>(a.states), false);
    std::vector<int> stack;
    for (int q = 0; q < a.states; ++q) {
        if (!a.final.at(q, 0).is_zero()) {
            alive[static_cast<std::size_t>(q)] = true;
            stack.push_back(q);
        }
    }
    // Predecessor lists.
    std::vector<std::vector<int>> preds(static_cast<std::size_t>(a.states));
    for (const auto& m : a.transitions)
        for (int src = 0; src < a.states; ++src)
            for (const auto& [dst, w] : m.row(src)) preds[static_cast<std::size_t>(dst)].push_back(src);
    while (!stack.empty()) {
        int q = stack.back();
        stack.pop_back();
        for (int p : preds[static_cast<std::size_t>(q)]) {
            if (!alive[static_cast<std::size_t>(p)]) {
                alive[static_cast<std::size_t>(p)] = true;
                stack.push_back(p);
            }
        }
    }

    std::vector<int> keep;
    for (int q = 0; q < a.states; ++q)
        if (alive[static_cast<std::size_t>(q)]) keep.push_back(q);
    if (keep.empty()) {
        // Canonical empty-language automaton.
        WeightedAutomaton empty(a.kind, 1, a.alphabet);
        return empty;
    }

    std::vector<int> index(static_cast<std::size_t>(a.states), -1);
    for (std::size_t i = 0; i < keep.size(); ++i) index[static_cast<std::size_t>(keep[i])] = static_cast<int>(i);

    WeightedAutomaton out(a.kind, static_cast<int>(keep.size()), a.alphabet);
    for (std::size_t s = 0; s < a.transitions.size(); ++s) {
        for (int src : keep)
            for (const auto& [dst, w] : a.transitions[s].row(src))
                if (index[static_cast<std::size_t>(dst)] >= 0)
                    out.transitions[s].set(index[static_cast<std::size_t>(src)], index[static_cast<std::size_t>(dst)], w);
    }
    for (int q : keep) {
        Weight iw = a.initial.at(0, q);
        if (!iw.is_zero()) out.initial.set(0, index[static_cast<std::size_t>(q)], iw);
        Weight fw = a.final.at(q, 0);
        if (!fw.is_zero()) out.final.set(index[static_cast<std::size_t>(q)], 0, fw);
    }
    if (a.state_names.size() == static_cast<std::size_t>(a.states)) {
        out.state_names.reserve(keep.size());
        for (int q : keep) out.state_names.push_back(a.state_names[static_cast<std::size_t>(q)]);
    }
    return out;
}

namespace {

/// Deterministic uniform integer in [0, bound) via rejection sampling.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    if (bound == 0) throw UsageError("uniform_below(0)");
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % bound);
    for (;;) {
        std::uint64_t r = rng();
        if (r < limit) return r % bound;
    }
}

/// Exact Bernoulli(p) for rational p in [0,1].
bool bernoulli(std::mt19937_64& rng, const mpq_class& p) {
    if (p == 0) return false;
    if (p == 1) return true;
    mpz_class den = p.get_den();
    if (!den.fits_ulong_p()) throw UsageError("density denominator too large");
    std::uint64_t d = den.get_ui();
    std::uint64_t r = uniform_below(rng, d);
    mpz_class num = p.get_num();
    return mpz_class(static_cast<unsigned long>(r)) < num;
}

}  // namespace

WeightedAutomaton random_automaton(const RandomAutomatonParams& params) {
    if (params.states < 1) throw UsageError("random_automaton: need at least one state");
    if (params.alphabet_size < 0) throw UsageError("random_automaton: negative alphabet size");
    if (params.pool.empty()) throw UsageError("random_automaton: empty weight pool");
    if (params.density < 0 || params.density > 1)
        throw UsageError("random_automaton: density must lie in [0,1]");
    for (const auto& w : params.pool)
        if (w.kind() != params.kind) throw UsageError("random_automaton: pool kind mismatch");

    std::vector<std::string> sigma;
    for (int i = 0; i < params.alphabet_size; ++i) {
        std::string name;
        int v = i;
        do {
            name.insert(name.begin(), static_cast<char>('a' + v % 26));
            v = v / 26 - 1;
        } while (v >= 0);
        sigma.push_back(name);
    }

    std::mt19937_64 rng(params.seed);
    WeightedAutomaton a(params.kind, params.states, sigma);
    auto pick = [&]() -> const Weight& {
        return params.pool[static_cast<std::size_t>(uniform_below(rng, params.pool.size()))];
    };
    for (int s = 0; s < params.alphabet_size; ++s)
        for (int src = 0; src < params.states; ++src)
            for (int dst = 0; dst < params.states; ++dst)
                if (bernoulli(rng, params.density))
                    a.transitions[static_cast<std::size_t>(s)].set(src, dst, pick());
    int init = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(params.states)));
    a.initial.set(0, init, Weight::one(params.kind));
    for (int q = 0; q < params.states; ++q)
        if (bernoulli(rng, params.density)) a.final.set(q, 0, pick());
    return a;
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

int parse_state(const Line& line, const std::string& tok, int states) {
    std::size_t pos = 0;
    int value = 0;
    try {
        value = std::stoi(tok, &pos);
    } catch (const std::exception&) {
        fail(line.number, "expected a state index, got '" + tok + "'");
    }
    if (pos != tok.size()) fail(line.number, "expected a state index, got '" + tok + "'");
    if (value < 0 || value >= states) fail(line.number, "state " + tok + " out of range");
    return value;
}

}  // namespace

WeightedAutomaton load_automaton(std::istream& is) {
    auto lines = tokenize(is);
    std::size_t at = 0;
    auto expect_keyword = [&](const std::string& kw) -> const Line& {
        if (at >= lines.size()) throw InputError("unexpected end of file, expected '" + kw + "'");
        const Line& line = lines[at];
        if (line.tokens[0] != kw) fail(line.number, "expected '" + kw + "', got '" + line.tokens[0] + "'");
        return line;
    };

    const Line& sem = expect_keyword("semiring");
    if (sem.tokens.size() != 2) fail(sem.number, "semiring line needs exactly one tag");
    SemiringKind kind;
    try {
        kind = kind_from_name(sem.tokens[1]);
    } catch (const InputError& e) {
        fail(sem.number, e.what());
    }
    ++at;

    const Line& st = expect_keyword("states");
    if (st.tokens.size() != 2) fail(st.number, "states line needs exactly one count");
    int states = 0;
    try {
        states = std::stoi(st.tokens[1]);
    } catch (const std::exception&) {
        fail(st.number, "invalid state count '" + st.tokens[1] + "'");
    }
    if (states < 1) fail(st.number, "state count must be at least 1");
    ++at;

    const Line& al = expect_keyword("alphabet");
    std::vector<std::string> sigma(al.tokens.begin() + 1, al.tokens.end());
    ++at;

    WeightedAutomaton a;
    try {
        a = WeightedAutomaton(kind, states, sigma);
    } catch (const UsageError& e) {
        fail(al.number, e.what());
    }

    auto parse_vector_line = [&](const Line& line, bool is_initial) {
        for (std::size_t i = 1; i < line.tokens.size(); ++i) {
            const std::string& tok = line.tokens[i];
            auto colon = tok.find(':');
            if (colon == std::string::npos)
                fail(line.number, "expected <state>:<weight>, got '" + tok + "'");
            int q = parse_state(line, tok.substr(0, colon), states);
            Weight w = Weight::zero(kind);
            try {
                w = parse_weight(kind, tok.substr(colon + 1));
            } catch (const Error& e) {
                fail(line.number, e.what());
            }
            if (is_initial)
                a.initial.set(0, q, w);
            else
                a.final.set(q, 0, w);
        }
    };

    parse_vector_line(expect_keyword("initial"), true);
    ++at;
    parse_vector_line(expect_keyword("final"), false);
    ++at;

    for (; at < lines.size(); ++at) {
        const Line& line = lines[at];
        if (line.tokens[0] != "trans")
            fail(line.number, "expected 'trans', got '" + line.tokens[0] + "'");
        if (line.tokens.size() != 5)
            fail(line.number, "trans line needs: trans <sym> <src> <dst> <weight>");
        int sym = a.symbol_index(line.tokens[1]);
        if (sym < 0) fail(line.number, "unknown symbol '" + line.tokens[1] + "'");
        int src = parse_state(line, line.tokens[2], states);
        int dst = parse_state(line, line.tokens[3], states);
        Weight w = Weight::zero(kind);
        try {
            w = parse_weight(kind, line.tokens[4]);
        } catch (const Error& e) {
            fail(line.number, e.what());
        }
        if (!a.transitions[static_cast<std::size_t>(sym)].at(src, dst).is_zero())
            fail(line.number, "duplicate transition");
        a.transitions[static_cast<std::size_t>(sym)].set(src, dst, w);
    }
    return a;
}

WeightedAutomaton load_automaton_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InputError("cannot open '" + path + "'");
    try {
        return load_automaton(is);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

void save_automaton(const WeightedAutomaton& a, std::ostream& os) {
    os << "semiring " << kind_name(a.kind) << '\n';
    os << "states " << a.states << '\n';
    os << "alphabet";
    for (const auto& s : a.alphabet) os << ' ' << s;
    os << '\n';
    os << "initial";
    for (const auto& [q, w] : a.initial.row(0)) os << ' ' << q << ':' << format_weight(w);
    os << '\n';
    os << "final";
    for (int q = 0; q < a.states; ++q) {
        Weight w = a.final.at(q, 0);
        if (!w.is_zero()) os << ' ' << q << ':' << format_weight(w);
    }
    os << '\n';
    for (std::size_t s = 0; s < a.transitions.size(); ++s)
        for (int src = 0; src < a.states; ++src)
            for (const auto& [dst, w] : a.transitions[s].row(src))
                os << "trans " << a.alphabet[s] << ' ' << src << ' ' << dst << ' '
                   << format_weight(w) << '\n';
}

void save_automaton_file(const WeightedAutomaton& a, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw InputError("cannot write '" + path + "'");
    save_automaton(a, os);
}

}  // namespace wsim
