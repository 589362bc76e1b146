#include <catch_amalgamated.hpp>

#include <random>

#include <mzvlab/finite_hurwitz.hpp>

#include "oracles.hpp"

using namespace mzvlab;

namespace {

Rational q(long a, long b = 1) { return make_rational(a, b); }
ShiftParam sh(long a, long b = 1) { return {q(a, b)}; }

Rational exact(const ExactValue& v) { return v.rational(); }

} // namespace

TEST_CASE("finite sums: worked values") {
    CHECK(exact(eval_finite(MultiIndex{1, 2}, IntervalSpec::open(0, 4), sh(0))) == q(5, 12));
    CHECK(exact(eval_finite(MultiIndex{1, 1}, IntervalSpec::half_open(0, 2), sh(0), true)) == q(7, 4));
    CHECK(exact(eval_finite(MultiIndex{2}, IntervalSpec::open(0, 3), sh(1, 2))) == q(136, 225));
    CHECK(exact(eval_finite(MultiIndex{}, IntervalSpec::open(0, 3), sh(0))) == 1);
    CHECK(exact(eval_finite(MultiIndex{1, 1, 1}, IntervalSpec::open(0, 3), sh(0))) == 0);
    CHECK(exact(eval_finite(MultiIndex{1}, IntervalSpec::open(0, 1), sh(0))) == 0);
}

TEST_CASE("finite sums: errors") {
    CHECK_THROWS_AS(eval_finite(MultiIndex{3}, IntervalSpec::open(-2, 4), sh(0)), PoleError);
    CHECK_THROWS_AS(eval_finite(MultiIndex{3}, IntervalSpec{0, std::nullopt, false}, sh(0)), UnsupportedError);
    CHECK_THROWS_AS(IntervalSpec::open(3, 3), RangeError);
    CHECK_THROWS_AS(parse_interval("(4,2)"), RangeError);
    CHECK_THROWS_AS(parse_interval("(0,inf]"), ParseError);
}

TEST_CASE("finite sums agree with literal enumeration") {
    std::mt19937_64 g(7);
    auto pick = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(g); };
    for (int trial = 0; trial < 300; ++trial) {
        int r = static_cast<int>(pick(0, 3));
        std::vector<int> k, signs;
        for (int i = 0; i < r; ++i) {
            k.push_back(static_cast<int>(pick(1, 3)));
            signs.push_back(static_cast<int>(pick(0, 1)));
        }
        long m1 = pick(-6, 5), m2 = pick(m1 + 1, 7);
        Rational s = make_rational(2 * pick(-9, 9) + 1, 2 * pick(1, 3));  // odd over even, never an integer
        bool star = pick(0, 1);
        bool closed = pick(0, 1);
        IntervalSpec iv = closed ? IntervalSpec::half_open(m1, m2) : IntervalSpec::open(m1, m2);
        ColorVector c(2, signs);
        CHECK(exact(eval_finite(MultiIndex(k), iv, ShiftParam{s}, star)) == oracle::enumerate(k, iv.lo(), iv.hi(), s, star));
        CHECK(exact(eval_finite(MultiIndex(k), iv, ShiftParam{s}, star, c)) == oracle::enumerate(k, iv.lo(), iv.hi(), s, star, signs));
    }
}

TEST_CASE("translation") {
    CHECK(check_translation(MultiIndex{2}, IntervalSpec::open(0, 3), sh(1, 2), 1).is_zero());
    CHECK(check_translation(MultiIndex{1, 2}, IntervalSpec::open(0, 4), sh(0), -3).is_zero());
    CHECK(check_translation(MultiIndex{1}, IntervalSpec::open(0, 2), sh(1, 5), 7).is_zero());
    CHECK(check_translation(MultiIndex{2, 1}, IntervalSpec::open(-3, 4), sh(1, 3), 5, ColorVector(2, {1, 1})).is_zero());
    CHECK(check_translation(MultiIndex{1, 2}, IntervalSpec::open(0, 5), sh(1, 3), 2, ColorVector(3, {1, 2})).is_zero());
}

TEST_CASE("decomposition at an interior point") {
    CHECK(check_decomposition(MultiIndex{1, 2}, IntervalSpec::open(0, 5), sh(1, 3), 2).is_zero());
    CHECK(check_decomposition(MultiIndex{1, 1, 2}, IntervalSpec::open(0, 6), sh(0), 3).is_zero());
    CHECK(check_decomposition(MultiIndex{2, 1, 1}, IntervalSpec::open(-4, 6), sh(1, 2), 1, ColorVector(2, {0, 1, 1})).is_zero());
    CHECK_THROWS_AS(check_decomposition(MultiIndex{3}, IntervalSpec::open(-2, 4), sh(0), 1), PoleError);
    CHECK_THROWS_AS(check_decomposition(MultiIndex{1}, IntervalSpec::open(0, 4), sh(1, 2), 4), PreconditionError);
}

TEST_CASE("reflection") {
    CHECK(check_reflection(MultiIndex{1}, IntervalSpec::open(0, 3), sh(1, 4)).is_zero());
    CHECK(check_reflection(MultiIndex{2, 3}, IntervalSpec::open(-5, 5), sh(1, 2)).is_zero());
    CHECK(check_reflection(MultiIndex{1, 2}, IntervalSpec::open(0, 4), sh(1, 7)).is_zero());
    CHECK(check_reflection(MultiIndex{1, 2}, IntervalSpec::open(-2, 4), sh(1, 7), ColorVector(2, {1, 0})).is_zero());
}

TEST_CASE("antipode") {
    CHECK(check_antipode(MultiIndex{1, 2}, IntervalSpec::open(0, 3), sh(0)).is_zero());
    CHECK(check_antipode(MultiIndex{1}, IntervalSpec::open(0, 9), sh(0)).is_zero());
    CHECK(check_antipode(MultiIndex{2, 2, 2}, IntervalSpec::open(0, 5), sh(1, 2)).is_zero());
    CHECK(check_antipode(MultiIndex{1, 3, 1}, IntervalSpec::open(-3, 5), sh(2, 5), ColorVector(2, {1, 1, 0})).is_zero());

    // The three terms for (1,2) on (0,3): zeta_(0,3)(1,2) - zeta*(1) zeta(2) + zeta*(2,1).
    Rational t0 = oracle::enumerate({1, 2}, 1, 2, 0);
    Rational t1 = oracle::enumerate({1}, 1, 2, 0, true) * oracle::enumerate({2}, 1, 2, 0);
    Rational t2 = oracle::enumerate({2, 1}, 1, 2, 0, true);
    CHECK(t0 == q(1, 4));
    CHECK(t1 == q(15, 8));
    CHECK(t2 == q(13, 8));
}

TEST_CASE("truncation") {
    CHECK(check_truncation(MultiIndex{1, 2}, 6, 2, sh(0)).is_zero());
    CHECK(check_truncation(MultiIndex{4}, 3, 1, sh(1, 3)).is_zero());
    CHECK(check_truncation(MultiIndex{1, 1}, 4, 3, sh(0)).is_zero());
    CHECK(check_truncation(MultiIndex{2, 1, 3}, 9, 4, sh(-1, 3), ColorVector(2, {1, 0, 1})).is_zero());
    CHECK_THROWS_AS(check_truncation(MultiIndex{1}, 3, 0, sh(0)), PreconditionError);
}

TEST_CASE("expansion coefficients at s = 0") {
    auto c = expansion_coeffs(MultiIndex{2}, IntervalSpec::open(0, 3), 1);
    CHECK(exact(c[0]) == q(5, 4));
    CHECK(exact(c[1]) == q(-9, 4));
    auto z = expansion_coeffs(MultiIndex{1, 2}, IntervalSpec::open(0, 4), 0);
    CHECK(exact(z[0]) == q(5, 12));
    for (const auto& v : check_expansion(MultiIndex{1, 2, 1}, IntervalSpec::open(-7, -1), 5)) CHECK(v.is_zero());
    for (const auto& v : check_expansion(MultiIndex{2, 1}, IntervalSpec::open(0, 6), 5, ColorVector(2, {1, 1}))) CHECK(v.is_zero());
    CHECK_THROWS_AS(expansion_coeffs(MultiIndex{1}, IntervalSpec::open(-1, 3), 2), PreconditionError);
}

TEST_CASE("colored sums beyond level 2 carry an error bound") {
    ExactValue v = eval_finite(MultiIndex{1, 2}, IntervalSpec::open(0, 6), sh(0), false, ColorVector(4, {1, 3}));
    CHECK_FALSE(v.is_exact());
    CHECK(v.bounded().bound < Real("1e-40"));
    CHECK(check_reflection(MultiIndex{1, 2}, IntervalSpec::open(-3, 6), sh(1, 3), ColorVector(4, {1, 2})).is_zero());
}
