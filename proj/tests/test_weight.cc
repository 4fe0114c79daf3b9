#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "support.hh"
#include "wsim/weight.hh"

using namespace wsim;
using namespace wsim::test;

TEST_CASE("sr_add on the three semirings") {
    CHECK(sr_add(pt(1, 2), pt(1, 3)) == pt(5, 6));
    CHECK(sr_add(Weight::minus_inf(), mp(3)) == mp(3));
    CHECK(sr_add(bw(true), bw(false)) == bw(true));
}

TEST_CASE("sr_mul on the three semirings") {
    CHECK(sr_mul(pt(1, 2), pt(1, 2)) == pt(1, 4));
    CHECK(sr_mul(Weight::minus_inf(), mp(5)) == Weight::minus_inf());
    CHECK(sr_mul(mp(2), mp(3)) == mp(5));
    CHECK(sr_mul(bw(true), bw(false)) == bw(false));
}

TEST_CASE("sr_leq is the natural order") {
    CHECK(sr_leq(pt(0), pt(1, 7)));
    CHECK(sr_leq(Weight::minus_inf(), mp(-1000)));
    CHECK_FALSE(sr_leq(pt(1, 2), pt(1, 3)));
    CHECK(sr_leq(bw(false), bw(true)));
    CHECK_FALSE(sr_leq(bw(true), bw(false)));
}

TEST_CASE("kind mismatch is a usage error") {
    CHECK_THROWS_AS(sr_add(pt(1), mp(1)), UsageError);
    CHECK_THROWS_AS(sr_mul(bw(true), pt(1)), UsageError);
    CHECK_THROWS_AS(sr_leq(mp(0), bw(false)), UsageError);
}

TEST_CASE("parse_weight accepts the grammar") {
    CHECK(parse_weight(SemiringKind::PlusTimes, "3/8") == pt(3, 8));
    CHECK(parse_weight(SemiringKind::MaxPlus, "-inf") == Weight::minus_inf());
    CHECK(parse_weight(SemiringKind::MaxPlus, "-7/2") == mp(-7, 2));
    CHECK(parse_weight(SemiringKind::Boolean, "1") == bw(true));
    CHECK(parse_weight(SemiringKind::PlusTimes, "4/8") == pt(1, 2));
}

TEST_CASE("parse_weight rejects out-of-domain text") {
    CHECK_THROWS_AS(parse_weight(SemiringKind::PlusTimes, "-1"), InputError);
    CHECK_THROWS_AS(parse_weight(SemiringKind::PlusTimes, "+inf"), InputError);
    CHECK_THROWS_AS(parse_weight(SemiringKind::MaxPlus, "inf"), InputError);
    CHECK_THROWS_AS(parse_weight(SemiringKind::PlusTimes, "-inf"), InputError);
    CHECK_THROWS_AS(parse_weight(SemiringKind::Boolean, "2"), InputError);
    CHECK_THROWS_AS(parse_weight(SemiringKind::PlusTimes, "1/0"), InputError);
    CHECK_THROWS_AS(parse_weight(SemiringKind::PlusTimes, "a"), InputError);
    CHECK_THROWS_AS(parse_weight(SemiringKind::PlusTimes, "1/2/3"), InputError);
}

TEST_CASE("format then parse is the identity") {
    for (const Weight& w : {pt(0), pt(7), pt(22, 7), mp(-3, 2), Weight::minus_inf(), bw(true)})
        CHECK(parse_weight(w.kind(), format_weight(w)) == w);
}

namespace {

std::vector<Weight> samples(SemiringKind kind, std::mt19937_64& rng) {
    std::vector<Weight> out{Weight::zero(kind), Weight::one(kind)};
    for (int i = 0; i < 24; ++i) {
        long num = static_cast<long>(rng() % 40);
        long den = static_cast<long>(rng() % 9) + 1;
        switch (kind) {
            case SemiringKind::PlusTimes:
                out.push_back(pt(num, den));
                break;
            case SemiringKind::MaxPlus:
                out.push_back(mp(num - 20, den));
                break;
            case SemiringKind::Boolean:
                out.push_back(bw(num % 2 == 0));
                break;
        }
    }
    return out;
}

}  // namespace

TEST_CASE("semiring axioms hold on random samples") {
    std::mt19937_64 rng(7);
    for (SemiringKind kind :
         {SemiringKind::PlusTimes, SemiringKind::MaxPlus, SemiringKind::Boolean}) {
        auto xs = samples(kind, rng);
        const Weight zero = Weight::zero(kind);
        const Weight one = Weight::one(kind);
        for (std::size_t i = 0; i < xs.size(); i += 3) {
            for (std::size_t j = 1; j < xs.size(); j += 4) {
                const Weight &a = xs[i], &b = xs[j];
                const Weight& c = xs[(i + j) % xs.size()];
                CHECK(sr_add(a, b) == sr_add(b, a));
                CHECK(sr_mul(a, b) == sr_mul(b, a));
                CHECK(sr_add(sr_add(a, b), c) == sr_add(a, sr_add(b, c)));
                CHECK(sr_mul(sr_mul(a, b), c) == sr_mul(a, sr_mul(b, c)));
                CHECK(sr_mul(a, sr_add(b, c)) == sr_add(sr_mul(a, b), sr_mul(a, c)));
                CHECK(sr_mul(a, zero) == zero);
                CHECK(sr_mul(a, one) == a);
                CHECK(sr_add(a, zero) == a);
                // Positivity.
                CHECK(sr_leq(zero, a));
            }
        }
    }
}

TEST_CASE("addition and multiplication are monotone") {
    std::mt19937_64 rng(11);
    for (SemiringKind kind :
         {SemiringKind::PlusTimes, SemiringKind::MaxPlus, SemiringKind::Boolean}) {
        auto xs = samples(kind, rng);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            for (std::size_t j = 0; j < xs.size(); j += 3) {
                const Weight &a = xs[i], &a2 = xs[(i + 1) % xs.size()];
                const Weight &b = xs[j], &b2 = xs[(j + 2) % xs.size()];
                if (!sr_leq(a, a2) || !sr_leq(b, b2)) continue;
                CHECK(sr_leq(sr_add(a, b), sr_add(a2, b2)));
                CHECK(sr_leq(sr_mul(a, b), sr_mul(a2, b2)));
            }
        }
    }
}
