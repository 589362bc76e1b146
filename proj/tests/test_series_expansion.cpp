#include <catch_amalgamated.hpp>

#include <mzvlab/mzv_numeric.hpp>
#include <mzvlab/series_expansion.hpp>
#include <mzvlab/sweeps.hpp>

#include "oracles.hpp"

using namespace mzvlab;

namespace {

Rational q(long a, long b = 1) { return make_rational(a, b); }

IntervalSpec right_infinite(long m1) { return IntervalSpec{m1, std::nullopt, false}; }

} // namespace

TEST_CASE("taylor coefficients at integer centers") {
    auto c = taylor_at(MultiIndex{2}, IntervalSpec::open(0, 3), 0, 1);
    CHECK(c[0].rational() == q(5, 4));
    CHECK(c[1].rational() == q(-9, 4));
    CHECK(taylor_at(MultiIndex{1, 2}, IntervalSpec::open(0, 4), 0, 0)[0].rational() == q(5, 12));
    // Recentered at -5 the window becomes (-5,-2): lattice points -4 and -3.
    CHECK(taylor_at(MultiIndex{2}, IntervalSpec::open(0, 3), -5, 0)[0].rational() == q(1, 16) + q(1, 9));
    CHECK_THROWS_AS(taylor_at(MultiIndex{2}, IntervalSpec::open(0, 3), -1, 2), PreconditionError);
}

TEST_CASE("taylor coefficients match the recentered direct sum") {
    MultiIndex k{1, 2, 1};
    IntervalSpec iv = IntervalSpec::open(-2, 5);
    long n = 4;
    auto c = taylor_at(k, iv, n, 3);
    // Differentiate the literal sum: coefficient of t^m of prod (n_i + n + t)^{-k_i} summed over the window.
    auto direct = taylor_by_series_product(k, iv.translated(n), 3);
    for (int m = 0; m <= 3; ++m) CHECK(c[static_cast<std::size_t>(m)].rational() == direct[static_cast<std::size_t>(m)]);
}

TEST_CASE("laurent series inside the window") {
    LaurentSeries L = laurent_at(MultiIndex{2}, IntervalSpec::open(0, 3), -1, 2);
    CHECK(L.b[0][0].rational() == 1);
    CHECK(L.a[0].rational() == 1);

    LaurentSeries M = laurent_at(MultiIndex{1}, IntervalSpec::open(0, 3), -2, 3);
    auto d = M.by_degree();
    CHECK(d.at(-1).rational() == 1);
    // 1/(t - 1) = -1 - t - t^2 - ...
    for (int m = 0; m <= 3; ++m) CHECK(d.at(m).rational() == -1);
    CHECK_THROWS_AS(laurent_at(MultiIndex{1}, IntervalSpec::open(0, 3), 1, 2), PreconditionError);
}

TEST_CASE("laurent series reproduce the finite sum away from the center") {
    MultiIndex k{2, 1};
    IntervalSpec iv = IntervalSpec::open(-3, 4);
    for (long n : {-3L, -1L, 2L}) {
        LaurentSeries L = laurent_at(k, iv, n, 14);
        Rational t = q(1, 50);
        Rational direct = eval_finite_rational(k, iv, n + t);
        Rational series = L.evaluate(t).rational();
        CHECK(abs(direct - series) < q(1, 1000000000) * q(1, 1000000000));
    }
}

TEST_CASE("depth one on an infinite window has the textbook shape") {
    for (int kk : {2, 3}) {
        for (long n : {-1L, -3L}) {
            LaurentSeries L = laurent_at(MultiIndex{kk}, right_infinite(0), n, 4);
            REQUIRE(L.b.size() == 1);
            CHECK(L.b[0][0].rational() == 1);
            for (int m = 1; m <= 4; ++m) CHECK(L.b[0][static_cast<std::size_t>(m)].rational() == 0);
            for (int m = 0; m <= 4; ++m) {
                Rational w = binom_neg(kk, m);
                Rational finite = oracle::enumerate({kk + m}, n + 1, -1, 0);
                BoundedComplex want = BoundedComplex::exact(w * finite) + w * BoundedComplex(zeta(MultiIndex{kk + m}));
                BoundedComplex diff = L.a[static_cast<std::size_t>(m)].bounded() - want;
                CHECK(diff.magnitude() <= diff.bound + Real("1e-40"));
            }
        }
    }
}

TEST_CASE("expansion of s^-q around n") {
    auto a = inverse_power_expand(2, 1, 2);
    CHECK(a == std::vector<Rational>{q(1), q(-2), q(3)});
    CHECK(inverse_power_expand(3, -1, 0)[0] == -1);
    CHECK(inverse_power_expand(2, 2, 1)[1] == q(-1, 4));
    CHECK_THROWS_AS(inverse_power_expand(2, 0, 3), PreconditionError);
}

TEST_CASE("kernel expansions") {
    CHECK(kernel_expand(KernelKind::Cot, 0, 5).leading() == 1);
    CHECK(kernel_expand(KernelKind::Csc, 3, 5).leading() == -1);
    CHECK(kernel_expand(KernelKind::Csc, 4, 5).leading() == 1);
    KernelExpansion e = kernel_expand(KernelKind::Cot, 0, 40);
    Real t("0.1");
    Real direct = pi_real() * cos(pi_real() * t) / sin(pi_real() * t);
    CHECK(abs(e.evaluate(t).value - direct) < Real("1e-10"));
    for (const auto& r : kernel_sweep(5, 40)) CHECK(r.pass);
}

TEST_CASE("residues at lattice points outside the window") {
    // cot kernel has residue 1 at each integer, so the residue is the window value at s = n over n^q.
    MultiIndex k{1, 2};
    IntervalSpec iv = IntervalSpec::open(0, 4);
    for (long n : {3L, -6L, 1L}) {
        EvenZetaCombination res = residue_at(2, k, iv, n);
        Rational want = oracle::enumerate({1, 2}, 1, 3, Rational(n)) / Rational(n * n);
        CHECK(res.is_exact());
        BoundedComplex diff = res.evaluate() - BoundedComplex::exact(want);
        CHECK(diff.magnitude() <= diff.bound);
    }
}

TEST_CASE("residue at the origin") {
    // Empty index, q = 2: residue of pi cot(pi s)/s^2 at 0 is -2 zeta(2).
    EvenZetaCombination res = residue_at(2, MultiIndex{}, IntervalSpec::open(0, 3), 0);
    BoundedComplex diff = res.evaluate() + BoundedComplex(Complex(Real(2) * oracle::zeta2()), Real(0));
    CHECK(diff.magnitude() <= diff.bound + Real("1e-40"));
    // k = (1) on (0,3), q = 1: the 1/s of the kernel (-2 zeta(0) = 1) picks the slope -(1 + 1/4) of the sum.
    EvenZetaCombination one = residue_at(1, MultiIndex{1}, IntervalSpec::open(0, 3), 0);
    CHECK(one.terms().at(0).rational() == make_rational(-5, 4));
}

TEST_CASE("truncated series stay within twice the first omitted term") {
    ExpansionSweepConfig c;
    c.instances = 40;
    for (const auto& r : expansion_sweep(c)) CHECK(r.pass);
}
