#include <catch_amalgamated.hpp>

#include <mzvlab/mzv_numeric.hpp>
#include <mzvlab/sweeps.hpp>

#include "oracles.hpp"

using namespace mzvlab;

namespace {

bool near(const BoundedReal& x, const Real& want, const Real& tol) { return abs(x.value - want) <= tol + x.bound; }

} // namespace

TEST_CASE("single zeta values against external constants") {
    CHECK(near(zeta(MultiIndex{2}), oracle::zeta2(), Real("1e-40")));
    CHECK(near(zeta(MultiIndex{3}), oracle::zeta3(), Real("1e-40")));
    CHECK(near(zeta(MultiIndex{5}), oracle::zeta5(), Real("1e-40")));
    CHECK(abs(zeta(MultiIndex{2}).value - pi_real() * pi_real() / 6) <= Real("1e-12"));
    CHECK(zeta(MultiIndex{2}).bound <= Real("1e-12"));
}

TEST_CASE("depth two and three relations") {
    CHECK(near(zeta(MultiIndex{1, 2}), oracle::zeta3(), Real("2e-12")));
    CHECK(near(zeta(MultiIndex{1, 1, 2}), oracle::zeta4(), Real("1e-40")));
    CHECK(near(zeta(MultiIndex{1, 3}), oracle::zeta_1_3(), Real("1e-40")));
    Real z2 = oracle::zeta2();
    CHECK(near(zeta(MultiIndex{2, 2}), (z2 * z2 - oracle::zeta4()) / 2, Real("1e-40")));
}

TEST_CASE("star values split over equalities") {
    CHECK(near(zeta_star(MultiIndex{2, 2}), zeta(MultiIndex{2, 2}).value + oracle::zeta4(), Real("1e-40")));
    for (int a = 1; a <= 6; ++a)
        for (int b = 2; a + b <= 8; ++b) {
            BoundedReal d = zeta_star(MultiIndex{a, b}) - zeta(MultiIndex{a, b}) - zeta(MultiIndex{a + b});
            CHECK(abs(d.value) <= Real("3e-12"));
        }
}

TEST_CASE("alternating values") {
    CHECK(near(colored_li(MultiIndex{1}, ColorVector(2, {1})).real_part(), -oracle::ln2(), Real("1e-10")));
    CHECK(near(colored_li(MultiIndex{2}, ColorVector(2, {1})).real_part(), -oracle::pi2_over_12(), Real("1e-10")));
    CHECK(near(colored_li(MultiIndex{3}, ColorVector(2, {1})).real_part(), oracle::li3_minus1(), Real("1e-40")));
    CHECK(alt_zeta(0).value == Real("0.5"));
    CHECK(alt_zeta(0).bound == 0);
    CHECK(near(alt_zeta(1), oracle::ln2(), Real("1e-40")));
    CHECK(near(alt_zeta(2), oracle::pi2_over_12(), Real("1e-40")));
}

TEST_CASE("level one colors reduce to plain values") {
    BoundedComplex v = colored_li(MultiIndex{1, 2}, ColorVector::trivial(1, 2));
    CHECK(near(v.real_part(), zeta(MultiIndex{1, 2}).value, Real("1e-40")));
}

TEST_CASE("fourth roots of unity against a direct partial sum") {
    // Li(2; i) = sum i^n / n^2: real part -pi^2/48, imaginary part Catalan's constant.
    BoundedComplex v = colored_li(MultiIndex{2}, ColorVector(4, {1}));
    CHECK(abs(v.value.re + pi_real() * pi_real() / 48) <= v.bound + Real("1e-40"));
    CHECK(abs(v.value.im - Real("0.915965594177219015054603514932384110774149374")) <= v.bound + Real("1e-40"));
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(zeta(MultiIndex{2, 1}), AdmissibilityError);
    CHECK_THROWS_AS(zeta(MultiIndex{2}, 1e-20), PrecisionError);
    CHECK_THROWS_AS(colored_li(MultiIndex{2, 1}, ColorVector(2, {1, 0})), DivergenceError);
    CHECK_THROWS_AS(colored_li(MultiIndex{2, 1}, ColorVector(2, {1})), RangeError);
}

TEST_CASE("regularization polynomials") {
    RegPoly t = reg_stuffle(MultiIndex{1});
    CHECK(t.coeffs.size() == 2);
    CHECK(t.exact[1] == Rational(1));
    CHECK(t.coeffs[0].contains_zero());

    RegPoly s11 = reg_stuffle(MultiIndex{1, 1});
    CHECK(s11.exact[2] == make_rational(1, 2));
    CHECK(abs(s11.coeffs[0].value.re + oracle::zeta2() / 2) <= Real("1e-12"));
    CHECK(s11.str(10) .rfind("(1/2)·T^2 - 0.8224670334", 0) == 0);

    RegPoly h11 = reg_shuffle(MultiIndex{1, 1});
    CHECK(h11.exact[2] == make_rational(1, 2));
    CHECK(h11.coeffs[0].magnitude() <= Real("1e-12"));

    RegPoly s21 = reg_stuffle(MultiIndex{2, 1});
    CHECK(abs(s21.coeffs[1].value.re - oracle::zeta2()) <= Real("1e-40"));
    CHECK(abs(s21.coeffs[0].value.re + 2 * oracle::zeta3()) <= Real("1e-40"));

    RegPoly h21 = reg_shuffle(MultiIndex{2, 1});
    CHECK(abs(h21.coeffs[1].value.re - oracle::zeta2()) <= Real("1e-40"));
    CHECK(abs(h21.coeffs[0].value.re + 2 * oracle::zeta3()) <= Real("1e-40"));

    // Admissible indices regularize to their value.
    RegPoly a = reg_shuffle(MultiIndex{1, 2});
    CHECK(a.coeffs.size() == 1);
    CHECK(abs(a.coeffs[0].value.re - oracle::zeta3()) <= Real("1e-40"));
}

TEST_CASE("truncated sums") {
    CHECK(truncated_zeta(MultiIndex{1, 2}, 4) == make_rational(5, 12));
    CHECK(truncated_zeta(MultiIndex{1}, 2) == 1);
    CHECK(truncated_zeta(MultiIndex{3, 1}, 1) == 0);
    CHECK(abs(truncated_zeta_real(MultiIndex{1}, 1000) - oracle::harmonic(1000)) < Real("1e-40"));
}

TEST_CASE("stuffle-regularized values approach truncated sums") {
    for (const auto& k : {MultiIndex{2, 1}, MultiIndex{1, 1}}) {
        ResidualReport r = regularization_limit_report(k, {1024, 4096});
        INFO(r.to_json().dump());
        CHECK(r.pass);
    }
}

TEST_CASE("products of values follow the stuffle product") {
    for (const auto& [a, b] : admissible_pairs(20, 5, 11)) {
        BoundedReal d = stuffle_compatibility(a, b);
        CHECK(d.contains_zero());
    }
}
