#include "wsim/partial_execution.hh"

#include <algorithm>
#include <set>

namespace wsim {

namespace {

std::vector<bool> param_mask(const WeightedAutomaton& a, const std::vector<int>& p) {
    std::vector<bool> in_p(static_cast<std::size_t>(a.states), false);
    for (int q : p) {
        if (q < 0 || q >= a.states)
            throw UsageError("partial-execution parameter state " + std::to_string(q) +
                             " out of range");
        in_p[static_cast<std::size_t>(q)] = true;
    }
    return in_p;
}

/// Layout of the fpe(A, P) state space: the acceptance state (when some
/// replaced state can accept), then pending (symbol, target) states, then
/// the surviving states of A.
struct FpeLayout {
    bool has_check = false;
    std::vector<std::pair<int, int>> pairs;  // (symbol, target), sorted
    std::vector<int> survivors;              // ascending
    int check_index() const { return 0; }
    int pair_index(int symbol, int target) const {
        auto it = std::lower_bound(pairs.begin(), pairs.end(), std::make_pair(symbol, target));
        if (it == pairs.end() || *it != std::make_pair(symbol, target)) return -1;
        return (has_check ? 1 : 0) + static_cast<int>(it - pairs.begin());
    }
    int survivor_index(int q) const {
        auto it = std::lower_bound(survivors.begin(), survivors.end(), q);
        if (it == survivors.end() || *it != q) return -1;
        return (has_check ? 1 : 0) + static_cast<int>(pairs.size()) +
               static_cast<int>(it - survivors.begin());
    }
    int size() const {
        return (has_check ? 1 : 0) + static_cast<int>(pairs.size()) +
               static_cast<int>(survivors.size());
    }
};

FpeLayout fpe_layout(const WeightedAutomaton& a, const std::vector<bool>& in_p) {
    FpeLayout layout;
    std::set<std::pair<int, int>> pairs;
    for (int x = 0; x < a.states; ++x) {
        if (!in_p[static_cast<std::size_t>(x)]) {
            layout.survivors.push_back(x);
            continue;
        }
        if (!a.final.at(x, 0).is_zero()) layout.has_check = true;
        for (std::size_t s = 0; s < a.alphabet.size(); ++s)
            for (const auto& [y, w] : a.transitions[s].row(x))
                pairs.emplace(static_cast<int>(s), y);
    }
    layout.pairs.assign(pairs.begin(), pairs.end());
    return layout;
}

std::string pair_name(const WeightedAutomaton& a, int symbol, int target) {
    return "(" + a.alphabet[static_cast<std::size_t>(symbol)] + "," +
           std::to_string(target) + ")";
}

}  // namespace

WeightedAutomaton fpe(const WeightedAutomaton& a, const std::vector<int>& p) {
    const auto in_p = param_mask(a, p);
    const FpeLayout layout = fpe_layout(a, in_p);

    WeightedAutomaton out(a.kind, layout.size(), a.alphabet);

    // One-step unfolding weight from an original state y to a new state u:
    // a surviving y sits at itself with weight one; a replaced y spreads
    // onto its one-step behaviors.
    // step(y) as a sparse list of (new state, weight).
    auto unfold = [&](int y) {
        std::vector<std::pair<int, Weight>> result;
        if (!in_p[static_cast<std::size_t>(y)]) {
            result.emplace_back(layout.survivor_index(y), Weight::one(a.kind));
            return result;
        }
        Weight fin = a.final.at(y, 0);
        if (!fin.is_zero()) result.emplace_back(layout.check_index(), fin);
        for (std::size_t s = 0; s < a.alphabet.size(); ++s)
            for (const auto& [z, w] : a.transitions[s].row(y))
                result.emplace_back(layout.pair_index(static_cast<int>(s), z), w);
        return result;
    };

    auto add = [&](Matrix& m, int r, int c, const Weight& w) {
        m.set(r, c, sr_add(m.at(r, c), w));
    };

    // Initial vector: the P-part of alpha is pushed one step forward.
    for (const auto& [x, w] : a.initial.row(0)) {
        if (!in_p[static_cast<std::size_t>(x)]) {
            add(out.initial, 0, layout.survivor_index(x), w);
            continue;
        }
        for (const auto& [u, step] : unfold(x)) add(out.initial, 0, u, sr_mul(w, step));
    }

    // Final vector: acceptance state accepts with weight one; survivors keep
    // their weights; pending states never accept.
    if (layout.has_check) out.final.set(layout.check_index(), 0, Weight::one(a.kind));
    for (int x : layout.survivors) {
        Weight w = a.final.at(x, 0);
        if (!w.is_zero()) out.final.set(layout.survivor_index(x), 0, w);
    }

    // Transitions.  A pending state (s, x) reads s and then behaves as one
    // step of x; a surviving state keeps its rows, with targets in P
    // unfolded one step further.
    for (std::size_t i = 0; i < layout.pairs.size(); ++i) {
        auto [s, x] = layout.pairs[i];
        int src = (layout.has_check ? 1 : 0) + static_cast<int>(i);
        for (const auto& [u, w] : unfold(x)) add(out.transitions[static_cast<std::size_t>(s)], src, u, w);
    }
    for (int x : layout.survivors) {
        int src = layout.survivor_index(x);
        for (std::size_t s = 0; s < a.alphabet.size(); ++s)
            for (const auto& [y, w] : a.transitions[s].row(x))
                for (const auto& [u, step] : unfold(y))
                    add(out.transitions[s], src, u, sr_mul(w, step));
    }

    out.state_names.clear();
    if (layout.has_check) out.state_names.push_back("acc");
    for (auto [s, y] : layout.pairs) out.state_names.push_back(pair_name(a, s, y));
    for (int x : layout.survivors) out.state_names.push_back(std::to_string(x));
    return out;
}

WeightedAutomaton bpe(const WeightedAutomaton& a, const std::vector<int>& p) {
    const auto in_p = param_mask(a, p);

    // Layout mirrors fpe on the transposed automaton: an initial state
    // (when some replaced state is initial), then pending (symbol, source)
    // states, then survivors.
    bool has_bullet = false;
    std::set<std::pair<int, int>> pair_set;
    std::vector<int> survivors;
    for (int x = 0; x < a.states; ++x) {
        if (!in_p[static_cast<std::size_t>(x)]) {
            survivors.push_back(x);
            continue;
        }
        if (!a.initial.at(0, x).is_zero()) has_bullet = true;
    }
    for (std::size_t s = 0; s < a.alphabet.size(); ++s)
        for (int y = 0; y < a.states; ++y)
            for (const auto& [x, w] : a.transitions[s].row(y))
                if (in_p[static_cast<std::size_t>(x)]) pair_set.emplace(static_cast<int>(s), y);
    std::vector<std::pair<int, int>> pairs(pair_set.begin(), pair_set.end());

    auto bullet_index = [&]() { return 0; };
    auto pair_index = [&](int s, int y) {
        auto it = std::lower_bound(pairs.begin(), pairs.end(), std::make_pair(s, y));
        return (has_bullet ? 1 : 0) + static_cast<int>(it - pairs.begin());
    };
    auto survivor_index = [&](int q) {
        auto it = std::lower_bound(survivors.begin(), survivors.end(), q);
        return (has_bullet ? 1 : 0) + static_cast<int>(pairs.size()) +
               static_cast<int>(it - survivors.begin());
    };
    int size = (has_bullet ? 1 : 0) + static_cast<int>(pairs.size()) +
               static_cast<int>(survivors.size());

    WeightedAutomaton out(a.kind, size, a.alphabet);

    // Backward unfolding: contributions of an original state y, read from
    // the target side.
    auto unfold = [&](int y) {
        std::vector<std::pair<int, Weight>> result;
        if (!in_p[static_cast<std::size_t>(y)]) {
            result.emplace_back(survivor_index(y), Weight::one(a.kind));
            return result;
        }
        Weight ini = a.initial.at(0, y);
        if (!ini.is_zero()) result.emplace_back(bullet_index(), ini);
        for (std::size_t s = 0; s < a.alphabet.size(); ++s)
            for (int z = 0; z < a.states; ++z) {
                Weight w = a.transitions[s].at(z, y);
                if (!w.is_zero()) result.emplace_back(pair_index(static_cast<int>(s), z), w);
            }
        return result;
    };

    auto add = [&](Matrix& m, int r, int c, const Weight& w) {
        m.set(r, c, sr_add(m.at(r, c), w));
    };

    // Initial vector: the bullet starts with weight one; survivors keep
    // their entries; pending states never start.
    if (has_bullet) out.initial.set(0, bullet_index(), Weight::one(a.kind));
    for (int x : survivors) {
        Weight w = a.initial.at(0, x);
        if (!w.is_zero()) out.initial.set(0, survivor_index(x), w);
    }

    // Final vector: the P-part of beta is pulled one step backward.
    for (int x = 0; x < a.states; ++x) {
        Weight w = a.final.at(x, 0);
        if (w.is_zero()) continue;
        if (!in_p[static_cast<std::size_t>(x)]) {
            add(out.final, survivor_index(x), 0, w);
            continue;
        }
        for (const auto& [u, step] : unfold(x)) add(out.final, u, 0, sr_mul(step, w));
    }

    // Transitions: a pending state (s, y) is entered by reading s from the
    // backward unfolding of y; surviving rows keep their sources, with
    // sources in P unfolded one step back.
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto [s, y] = pairs[i];
        int dst = (has_bullet ? 1 : 0) + static_cast<int>(i);
        for (const auto& [u, w] : unfold(y)) add(out.transitions[static_cast<std::size_t>(s)], u, dst, w);
    }
    for (int y : survivors) {
        int dst = survivor_index(y);
        for (std::size_t s = 0; s < a.alphabet.size(); ++s)
            for (int x = 0; x < a.states; ++x) {
                Weight w = a.transitions[s].at(x, y);
                if (w.is_zero()) continue;
                for (const auto& [u, step] : unfold(x)) add(out.transitions[s], u, dst, sr_mul(step, w));
            }
    }

    out.state_names.clear();
    if (has_bullet) out.state_names.push_back("ini");
    for (auto [s, y] : pairs) out.state_names.push_back(pair_name(a, s, y));
    for (int x : survivors) out.state_names.push_back(std::to_string(x));
    return out;
}

WeightedAutomaton apply_pe(const WeightedAutomaton& a, const PESpec& spec) {
    return spec.mode == PESpec::Mode::Fpe ? fpe(a, spec.states) : bpe(a, spec.states);
}

std::vector<int> fpe_param(const WeightedAutomaton& a, int depth) {
    if (depth < 0) throw UsageError("parameter depth must be nonnegative");
    std::vector<bool> in(static_cast<std::size_t>(a.states), false);
    for (int q = 0; q < a.states; ++q)
        if (!a.final.at(q, 0).is_zero()) in[static_cast<std::size_t>(q)] = true;
    for (int step = 0; step < depth; ++step) {
        std::vector<bool> next = in;
        for (const auto& m : a.transitions)
            for (int x = 0; x < a.states; ++x)
                for (const auto& [y, w] : m.row(x))
                    if (in[static_cast<std::size_t>(y)]) next[static_cast<std::size_t>(x)] = true;
        if (next == in) break;
        in = std::move(next);
    }
    std::vector<int> out;
    for (int q = 0; q < a.states; ++q)
        if (in[static_cast<std::size_t>(q)]) out.push_back(q);
    return out;
}

std::vector<int> bpe_param(const WeightedAutomaton& a, int depth) {
    if (depth < 0) throw UsageError("parameter depth must be nonnegative");
    std::vector<bool> in(static_cast<std::size_t>(a.states), false);
    for (const auto& [q, w] : a.initial.row(0)) in[static_cast<std::size_t>(q)] = true;
    for (int step = 0; step < depth; ++step) {
        std::vector<bool> next = in;
        for (const auto& m : a.transitions)
            for (int x = 0; x < a.states; ++x) {
                if (!in[static_cast<std::size_t>(x)]) continue;
                for (const auto& [y, w] : m.row(x)) next[static_cast<std::size_t>(y)] = true;
            }
        if (next == in) break;
        in = std::move(next);
    }
    std::vector<int> out;
    for (int q = 0; q < a.states; ++q)
        if (in[static_cast<std::size_t>(q)]) out.push_back(q);
    return out;
}

Matrix fpe_backward_witness(const WeightedAutomaton& a, const std::vector<int>& p) {
    const auto in_p = param_mask(a, p);
    const FpeLayout layout = fpe_layout(a, in_p);
    Matrix x(a.kind, a.states, layout.size());
    for (int q = 0; q < a.states; ++q) {
        if (!in_p[static_cast<std::size_t>(q)]) {
            x.set(q, layout.survivor_index(q), Weight::one(a.kind));
            continue;
        }
        Weight fin = a.final.at(q, 0);
        if (!fin.is_zero()) x.set(q, layout.check_index(), fin);
        for (std::size_t s = 0; s < a.alphabet.size(); ++s)
            for (const auto& [y, w] : a.transitions[s].row(q))
                x.set(q, layout.pair_index(static_cast<int>(s), y), w);
    }
    return x;
}

}  // namespace wsim
