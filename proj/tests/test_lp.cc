#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hh"
#include "support.hh"
#include "wsim/lp.hh"

using namespace wsim;
using namespace wsim::test;

namespace {

LpRow row(std::vector<std::pair<int, long>> coeffs, long bound_num, long bound_den = 1) {
    LpRow r;
    for (auto [v, c] : coeffs) r.coeffs.emplace_back(v, mpq_class(c));
    r.bound = mpq_class(bound_num, bound_den);
    return r;
}

bool satisfies(const LinearSystem& sys, const std::vector<mpq_class>& x) {
    for (const auto& v : x)
        if (v < 0) return false;
    for (const auto& r : sys.rows) {
        mpq_class lhs(0);
        for (const auto& [v, c] : r.coeffs) lhs += c * x[static_cast<std::size_t>(v)];
        if (lhs > r.bound) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("lp_feasible on interval systems") {
    LinearSystem sys;
    sys.var_count = 1;
    sys.rows.push_back(row({{0, -1}}, -1));  // x0 >= 1
    sys.rows.push_back(row({{0, 1}}, 3));    // x0 <= 3
    auto x = lp_feasible(sys);
    REQUIRE(x.has_value());
    CHECK((*x)[0] >= 1);
    CHECK((*x)[0] <= 3);

    LinearSystem bad;
    bad.var_count = 1;
    bad.rows.push_back(row({{0, 1}}, -1));  // x0 <= -1 with x0 >= 0
    CHECK_FALSE(lp_feasible(bad).has_value());

    LinearSystem empty;
    empty.var_count = 2;
    auto zero = lp_feasible(empty);
    REQUIRE(zero.has_value());
    CHECK((*zero)[0] == 0);
    CHECK((*zero)[1] == 0);
}

TEST_CASE("to_linear_system transcribes the collapse constraints") {
    auto cs = assemble_constraints(collapse_a(), collapse_b(), Direction::Fwd);
    auto sys = to_linear_system(cs);
    CHECK(sys.var_count == 2);
    CHECK(sys.rows.size() == 5);
    // Initial rows carry the negated initial weights of the left automaton.
    CHECK(sys.rows[0].bound == mpq_class(-1));
    CHECK(sys.rows[1].bound == 0);
    // The unique solution is (1, 1).
    auto x = lp_feasible(sys);
    REQUIRE(x.has_value());
    CHECK((*x)[0] == 1);
    CHECK((*x)[1] == 1);
}

TEST_CASE("empty-alphabet system has n + m rows") {
    auto a = make_automaton(SemiringKind::PlusTimes, 2, {}, {{0, pt(1)}}, {{1, pt(1)}}, {});
    auto b = make_automaton(SemiringKind::PlusTimes, 3, {}, {{0, pt(1)}}, {{0, pt(1)}}, {});
    auto sys = to_linear_system(assemble_constraints(a, b, Direction::Fwd));
    CHECK(sys.rows.size() == 5);
}

TEST_CASE("to_linear_system rejects other semirings") {
    auto a = random_wa(SemiringKind::MaxPlus, 2, 1, 3);
    CHECK_THROWS_AS(to_linear_system(assemble_constraints(a, a, Direction::Fwd)), UsageError);
}

TEST_CASE("feasible answers satisfy every row exactly") {
    std::mt19937_64 rng(41);
    for (int round = 0; round < 200; ++round) {
        LinearSystem sys;
        sys.var_count = 1 + static_cast<int>(rng() % 3);
        int rows = 1 + static_cast<int>(rng() % 5);
        for (int i = 0; i < rows; ++i) {
            LpRow r;
            for (int v = 0; v < sys.var_count; ++v) {
                long c = static_cast<long>(rng() % 5) - 2;
                if (c != 0) r.coeffs.emplace_back(v, mpq_class(c));
            }
            r.bound = mpq_class(static_cast<long>(rng() % 9) - 4);
            sys.rows.push_back(std::move(r));
        }
        auto x = lp_feasible(sys);
        if (x) CHECK(satisfies(sys, *x));
    }
}

TEST_CASE("agreement with the vertex-enumeration oracle on tiny systems") {
    std::mt19937_64 rng(43);
    int feasible_count = 0, infeasible_count = 0;
    for (int round = 0; round < 300; ++round) {
        LinearSystem sys;
        sys.var_count = 1 + static_cast<int>(rng() % 3);
        int rows = 1 + static_cast<int>(rng() % 4);
        for (int i = 0; i < rows; ++i) {
            LpRow r;
            for (int v = 0; v < sys.var_count; ++v) {
                long c = static_cast<long>(rng() % 5) - 2;
                if (c != 0) r.coeffs.emplace_back(v, mpq_class(c));
            }
            r.bound = mpq_class(static_cast<long>(rng() % 7) - 3);
            sys.rows.push_back(std::move(r));
        }
        bool simplex_says = lp_feasible(sys).has_value();
        bool oracle_says = vertex_feasible(sys);
        CHECK(simplex_says == oracle_says);
        (simplex_says ? feasible_count : infeasible_count)++;
    }
    CHECK(feasible_count > 0);
    CHECK(infeasible_count > 0);
}

TEST_CASE("lp_feasible is deterministic") {
    LinearSystem sys;
    sys.var_count = 3;
    sys.rows.push_back(row({{0, 1}, {1, 1}}, 2));
    sys.rows.push_back(row({{1, -1}, {2, 1}}, 0));
    sys.rows.push_back(row({{0, -1}}, -1));
    auto x = lp_feasible(sys);
    auto y = lp_feasible(sys);
    REQUIRE(x.has_value());
    REQUIRE(y.has_value());
    CHECK(*x == *y);
}
