#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hh"
#include "support.hh"
#include "wsim/simulation.hh"

using namespace wsim;
using namespace wsim::test;

TEST_CASE("constraint counts and shapes") {
    auto a = collapse_a();
    auto b = collapse_b();
    auto cs = assemble_constraints(a, b, Direction::Fwd);
    // n + |Sigma| n m + m rows over n m variables.
    CHECK(cs.constraints.size() == 5);
    CHECK(cs.var_count() == 2);
    CHECK(cs.var_rows == 1);
    CHECK(cs.var_cols == 2);

    // Empty alphabet: initial and final families only.
    auto p = make_automaton(SemiringKind::PlusTimes, 1, {}, {{0, pt(1)}}, {{0, pt(1)}}, {});
    auto cs2 = assemble_constraints(p, p, Direction::Fwd);
    CHECK(cs2.constraints.size() == 2);
}

TEST_CASE("nonzero coefficient count respects the sparsity bound") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto a = random_wa(SemiringKind::PlusTimes, 3, 2, seed, mpq_class(1, 3));
        auto b = random_wa(SemiringKind::PlusTimes, 2, 2, seed + 100, mpq_class(1, 3));
        auto cs = assemble_constraints(a, b, Direction::Fwd);
        std::size_t n = 3, m = 2, sym = 2;
        CHECK(cs.coefficient_count() <= 2 * n * m + sym * (n * n * m + n * m * m));
        // Each step row has at most n + m stored coefficients.
        for (const auto& c : cs.constraints) {
            if (c.tag.family != ConstraintTag::Family::Step) continue;
            CHECK(c.lhs.size() + c.rhs.size() <= n + m);
        }
    }
}

TEST_CASE("the collapse pair has the documented witnesses") {
    auto a = collapse_a();
    auto b = collapse_b();

    Matrix fwd(SemiringKind::PlusTimes, 1, 2);
    fwd.set(0, 0, pt(1));
    fwd.set(0, 1, pt(1));
    CHECK(verify_sim_matrix(a, b, Direction::Fwd, fwd).ok);

    Matrix bwd(SemiringKind::PlusTimes, 2, 1);
    bwd.set(0, 0, pt(1));
    bwd.set(1, 0, pt(2));
    CHECK(verify_sim_matrix(a, b, Direction::Bwd, bwd).ok);

    // The identity verifies any automaton against itself.
    CHECK(verify_sim_matrix(a, a, Direction::Fwd,
                            Matrix::identity(SemiringKind::PlusTimes, 2))
              .ok);

    // A failing candidate names its first violated constraint.
    Matrix bad(SemiringKind::PlusTimes, 1, 2);
    bad.set(0, 0, pt(2));
    bad.set(0, 1, pt(2));
    auto report = verify_sim_matrix(a, b, Direction::Fwd, bad);
    CHECK_FALSE(report.ok);
    CHECK(report.first_violation.find("final") != std::string::npos);

    Matrix wrong_shape(SemiringKind::PlusTimes, 2, 1);
    CHECK_THROWS_AS(verify_sim_matrix(a, b, Direction::Fwd, wrong_shape), UsageError);
}

TEST_CASE("find_simulation on the collapse pair") {
    auto a = collapse_a();
    auto b = collapse_b();

    auto fwd = find_simulation(a, b, Direction::Fwd);
    REQUIRE(fwd.found());
    CHECK(fwd.witness->at(0, 0) == pt(1));
    CHECK(fwd.witness->at(0, 1) == pt(1));

    auto bwd = find_simulation(a, b, Direction::Bwd);
    REQUIRE(bwd.found());
    CHECK(bwd.witness->at(0, 0) == pt(1));
    CHECK(bwd.witness->at(1, 0) == pt(2));
}

TEST_CASE("no forward or backward simulation on the crossed-loops pair") {
    auto a = crossed_loops_a();
    auto b = crossed_loops_b();
    CHECK(find_simulation(a, b, Direction::Fwd).tag == SearchOutcome::Tag::NoSimulation);
    CHECK(find_simulation(a, b, Direction::Bwd).tag == SearchOutcome::Tag::NoSimulation);
    // Yet the languages agree on every sampled word.
    CHECK(sampled_equality(a, b, 8));
}

TEST_CASE("every kind finds a self-simulation") {
    for (SemiringKind kind :
         {SemiringKind::PlusTimes, SemiringKind::MaxPlus, SemiringKind::Boolean}) {
        for (std::uint64_t seed = 1; seed <= 6; ++seed) {
            auto a = random_wa(kind, 3, 2, seed);
            for (Direction dir : {Direction::Fwd, Direction::Bwd}) {
                auto out = find_simulation(a, a, dir);
                CHECK(out.found());
            }
        }
    }
}

TEST_CASE("boolean greatest simulation dominates every witness") {
    std::mt19937_64 rng(31);
    int found_cases = 0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        auto a = random_wa(SemiringKind::Boolean, 2 + static_cast<int>(seed % 2), 2, seed);
        auto b = random_wa(SemiringKind::Boolean, 2, 2, seed + 500);
        for (Direction dir : {Direction::Fwd, Direction::Bwd}) {
            auto out = boolean_greatest_simulation(a, b, dir);
            // Exhaustive scan over all Boolean candidates.
            std::vector<Matrix> witnesses;
            int rows = dir == Direction::Fwd ? b.states : a.states;
            int cols = dir == Direction::Fwd ? a.states : b.states;
            for (const auto& x : all_boolean_matrices(rows, cols))
                if (verify_sim_matrix(a, b, dir, x).ok) witnesses.push_back(x);
            if (out.found()) {
                ++found_cases;
                CHECK(!witnesses.empty());
                for (const auto& x : witnesses) CHECK(mat_leq(x, *out.witness));
            } else {
                CHECK(witnesses.empty());
            }
        }
    }
    CHECK(found_cases > 0);
}

TEST_CASE("boolean corner case: a step with no matching move") {
    auto a = make_automaton(SemiringKind::Boolean, 1, {"a"}, {{0, bw(true)}}, {{0, bw(true)}},
                            {{"a", 0, 0, bw(true)}});
    auto b = make_automaton(SemiringKind::Boolean, 1, {"a"}, {{0, bw(true)}}, {{0, bw(true)}}, {});
    CHECK(find_simulation(a, b, Direction::Fwd).tag == SearchOutcome::Tag::NoSimulation);
    CHECK(find_simulation(b, a, Direction::Fwd).found());
}

TEST_CASE("soundness sampling: any Found witness implies sampled inclusion") {
    for (SemiringKind kind : {SemiringKind::PlusTimes, SemiringKind::MaxPlus}) {
        int found = 0;
        for (std::uint64_t seed = 1; seed <= 40; ++seed) {
            auto a = random_wa(kind, 1 + static_cast<int>(seed % 4), 1 + static_cast<int>(seed % 2),
                               seed, mpq_class(2, 3));
            auto b = random_wa(kind, 1 + static_cast<int>((seed + 1) % 4),
                               1 + static_cast<int>(seed % 2), seed + 1000, mpq_class(2, 3));
            for (Direction dir : {Direction::Fwd, Direction::Bwd}) {
                auto out = find_simulation(a, b, dir);
                if (out.found()) {
                    ++found;
                    CHECK(sampled_inclusion(a, b, 6));
                }
            }
        }
        INFO(kind_name(kind));
        CHECK(found > 0);
    }
}

TEST_CASE("transpose duality on random candidates") {
    std::mt19937_64 rng(37);
    for (SemiringKind kind :
         {SemiringKind::PlusTimes, SemiringKind::MaxPlus, SemiringKind::Boolean}) {
        for (int round = 0; round < 40; ++round) {
            auto a = random_wa(kind, 2, 2, static_cast<std::uint64_t>(round) + 1);
            auto b = random_wa(kind, 3, 2, static_cast<std::uint64_t>(round) + 300);
            Matrix x = random_matrix(rng, kind, b.states, a.states);
            bool forward = verify_sim_matrix(a, b, Direction::Fwd, x).ok;
            bool backward = verify_sim_matrix(transpose_automaton(a), transpose_automaton(b),
                                              Direction::Bwd, transpose(x))
                                .ok;
            CHECK(forward == backward);
        }
    }
}

TEST_CASE("witness sums stay witnesses where the constraints are sum-closed") {
    // Boolean: sum-closure of the full constraint set, via exhaustive
    // witnesses on small instances.
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto a = random_wa(SemiringKind::Boolean, 2, 1, seed);
        auto b = random_wa(SemiringKind::Boolean, 2, 1, seed + 50);
        std::vector<Matrix> witnesses;
        for (const auto& x : all_boolean_matrices(2, 2))
            if (verify_sim_matrix(a, b, Direction::Fwd, x).ok) witnesses.push_back(x);
        for (const auto& x : witnesses)
            for (const auto& y : witnesses) {
                Matrix sum(SemiringKind::Boolean, 2, 2);
                for (int r = 0; r < 2; ++r)
                    for (int c = 0; c < 2; ++c)
                        sum.set(r, c, sr_add(x.at(r, c), y.at(r, c)));
                CHECK(verify_sim_matrix(a, b, Direction::Fwd, sum).ok);
            }
    }

    // Max-plus: the full set is sum-closed; combine the solver witness of a
    // self-simulation with the identity.
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        auto a = random_wa(SemiringKind::MaxPlus, 3, 2, seed);
        auto out = find_simulation(a, a, Direction::Fwd);
        REQUIRE(out.found());
        Matrix sum(SemiringKind::MaxPlus, a.states, a.states);
        Matrix id = Matrix::identity(SemiringKind::MaxPlus, a.states);
        for (int r = 0; r < a.states; ++r)
            for (int c = 0; c < a.states; ++c)
                sum.set(r, c, sr_add(out.witness->at(r, c), id.at(r, c)));
        CHECK(verify_sim_matrix(a, a, Direction::Fwd, sum).ok);
    }

    // Plus-times: sums preserve the step constraints only.
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        auto a = random_wa(SemiringKind::PlusTimes, 3, 2, seed);
        auto out = find_simulation(a, a, Direction::Fwd);
        REQUIRE(out.found());
        Matrix sum(SemiringKind::PlusTimes, a.states, a.states);
        Matrix id = Matrix::identity(SemiringKind::PlusTimes, a.states);
        for (int r = 0; r < a.states; ++r)
            for (int c = 0; c < a.states; ++c)
                sum.set(r, c, sr_add(out.witness->at(r, c), id.at(r, c)));
        auto cs = assemble_constraints(a, a, Direction::Fwd);
        for (std::size_t i = 0; i < cs.constraints.size(); ++i) {
            const auto& c = cs.constraints[i];
            if (c.tag.family != ConstraintTag::Family::Step) continue;
            // Evaluate the step constraint on the sum.
            Weight lhs = c.lhs_const, rhs = c.rhs_const;
            for (const auto& t : c.lhs)
                lhs = sr_add(lhs, sr_mul(t.coeff, sum.at(t.var / a.states, t.var % a.states)));
            for (const auto& t : c.rhs)
                rhs = sr_add(rhs, sr_mul(t.coeff, sum.at(t.var / a.states, t.var % a.states)));
            CHECK(sr_leq(lhs, rhs));
        }
    }
}

TEST_CASE("find_simulation is deterministic") {
    for (SemiringKind kind :
         {SemiringKind::PlusTimes, SemiringKind::MaxPlus, SemiringKind::Boolean}) {
        auto a = random_wa(kind, 3, 2, 77);
        auto b = random_wa(kind, 3, 2, 78);
        for (Direction dir : {Direction::Fwd, Direction::Bwd}) {
            auto first = find_simulation(a, b, dir);
            auto second = find_simulation(a, b, dir);
            CHECK(first.tag == second.tag);
            if (first.found()) CHECK(*first.witness == *second.witness);
        }
    }
}

TEST_CASE("alphabet mismatch is rejected") {
    auto a = make_automaton(SemiringKind::PlusTimes, 1, {"a"}, {{0, pt(1)}}, {{0, pt(1)}}, {});
    auto b = make_automaton(SemiringKind::PlusTimes, 1, {"b"}, {{0, pt(1)}}, {{0, pt(1)}}, {});
    CHECK_THROWS_AS(find_simulation(a, b, Direction::Fwd), UsageError);
    auto c = make_automaton(SemiringKind::MaxPlus, 1, {"a"}, {{0, mp(0)}}, {{0, mp(0)}}, {});
    CHECK_THROWS_AS(find_simulation(a, c, Direction::Fwd), UsageError);
}
