#include <catch_amalgamated.hpp>

#include <mzvlab/parity_verifier.hpp>
#include <mzvlab/sweeps.hpp>

#include "oracles.hpp"

using namespace mzvlab;

namespace {

void require_pass(const ResidualReport& r) {
    INFO(r.to_json().dump());
    CHECK(r.pass);
}

} // namespace

TEST_CASE("finite windows on one side of the origin") {
    require_pass(finite_parity_residual(MultiIndex{2}, 2, IntervalSpec::open(0, 3), 10000));
    require_pass(finite_parity_residual(MultiIndex{1, 2}, 3, IntervalSpec::open(0, 5), 10000));
    require_pass(finite_parity_residual(MultiIndex{}, 2, IntervalSpec::open(0, 2), 10000));
    require_pass(finite_parity_residual(MultiIndex{2, 1, 1}, 4, IntervalSpec::open(-6, -1), 2000));
    ResidualReport r = finite_parity_residual(MultiIndex{2, 1}, 2, IntervalSpec::open(0, 4), 5000);
    CHECK(r.extra.at("residue_cross_check").get<bool>());
    CHECK_THROWS_AS(finite_parity_residual(MultiIndex{2}, 1, IntervalSpec::open(0, 3), 100), ParameterError);
    CHECK_THROWS_AS(finite_parity_residual(MultiIndex{2}, 2, IntervalSpec::open(-1, 3), 100), PreconditionError);
}

TEST_CASE("finite windows straddling the origin") {
    require_pass(mixed_window_parity_residual(MultiIndex{2}, 2, IntervalSpec::open(-2, 3), 10000));
    require_pass(mixed_window_parity_residual(MultiIndex{1, 1}, 4, IntervalSpec::open(-1, 2), 10000));
    require_pass(mixed_window_parity_residual(MultiIndex{3}, 2, IntervalSpec::open(-1, 1), 10000));
}

TEST_CASE("the finite residual is the size of the truncated tail") {
    // Truncating harder must not break the certified allowance, and the allowance must shrink with N.
    ResidualReport a = finite_parity_residual(MultiIndex{1, 2}, 2, IntervalSpec::open(0, 4), 200);
    ResidualReport b = finite_parity_residual(MultiIndex{1, 2}, 2, IntervalSpec::open(0, 4), 2000);
    CHECK(a.pass);
    CHECK(b.pass);
    CHECK(b.allowance < a.allowance);
}

TEST_CASE("seeded finite instances") {
    for (const auto& c : finite_parity_cases(8, 5, 3000)) require_pass(run_finite_parity_case(c));
}

TEST_CASE("stuffle parity") {
    require_pass(stuffle_parity_residual(MultiIndex{2}, 2));
    require_pass(stuffle_parity_residual(MultiIndex{2, 1}, 3));
    require_pass(stuffle_parity_residual(MultiIndex{1, 1}, 2));
    CHECK_THROWS_AS(stuffle_parity_residual(MultiIndex{2}, 1), ParameterError);
}

TEST_CASE("shuffle parity") {
    require_pass(shuffle_parity_residual(MultiIndex{2}, 2));
    require_pass(shuffle_parity_residual(MultiIndex{1, 1}, 3));
    require_pass(shuffle_parity_residual(MultiIndex{2, 1}, 2));
    require_pass(shuffle_parity_residual(MultiIndex{1, 2, 1}, 4));
}

TEST_CASE("depth-one worked example") {
    for (int q : {2, 3}) {
        ResidualReport r = r1_example_residual(2, q);
        require_pass(r);
        CHECK(r.residual_magnitude <= Real("1e-10"));
    }
}

TEST_CASE("parity blocks are linear in the regularization") {
    // The two kinds differ only where the regularizations differ; at depth one they coincide.
    ParityBlocks s = parity_blocks(MultiIndex{3}, ColorVector::trivial(1, 1), 2, RegKind::Stuffle);
    ParityBlocks h = parity_blocks(MultiIndex{3}, ColorVector::trivial(1, 1), 2, RegKind::Shuffle);
    CHECK(evaluate(s.star_block - h.star_block).vanishes());
}

TEST_CASE("cyclotomic parity") {
    require_pass(cyclotomic_parity_residual(MultiIndex{1}, ColorVector(2, {1}), 1, RegKind::Stuffle));
    require_pass(cyclotomic_parity_residual(MultiIndex{2}, ColorVector(4, {1}), 2, RegKind::Stuffle));
    require_pass(cyclotomic_parity_residual(MultiIndex{1, 2}, ColorVector(3, {1, 1}), 2, RegKind::Shuffle));
    CHECK_THROWS_AS(cyclotomic_parity_residual(MultiIndex{1}, ColorVector(2, {0}), 1, RegKind::Stuffle), ParameterError);
}

TEST_CASE("trivial colors reproduce the level-one theorem") {
    ResidualReport a = cyclotomic_parity_residual(MultiIndex{2}, ColorVector(2, {0}), 2, RegKind::Stuffle);
    ResidualReport b = stuffle_parity_residual(MultiIndex{2}, 2);
    CHECK(a.pass);
    CHECK(b.pass);
    ParityBlocks x = parity_blocks(MultiIndex{2, 1}, ColorVector(2, {0, 0}), 3, RegKind::Shuffle);
    ParityBlocks y = parity_blocks(MultiIndex{2, 1}, ColorVector::trivial(1, 2), 3, RegKind::Shuffle);
    for (auto [p, r] : {std::pair{&x.star_block, &y.star_block}, {&x.origin_block, &y.origin_block}, {&x.reflected_block, &y.reflected_block},
                        {&x.pole_block, &y.pole_block}}) {
        RegPoly d = evaluate(*p) + evaluate(Rational(-1) * *r);
        CHECK(d.vanishes());
    }
}

TEST_CASE("colors as typeset in the reflected blocks fail beyond level 2") {
    ResidualReport printed = cyclotomic_parity_residual(MultiIndex{2, 1}, ColorVector(4, {1, 2}), 2, RegKind::Stuffle, true);
    CHECK_FALSE(printed.pass);
    // At level 2 every color is its own inverse, so both readings agree.
    require_pass(cyclotomic_parity_residual(MultiIndex{2, 1}, ColorVector(2, {1, 1}), 2, RegKind::Stuffle, true));
}

TEST_CASE("truncated form at window (0, M)") {
    require_pass(corollary_M_residual(MultiIndex{2}, 2, 1024));
    require_pass(corollary_M_residual(MultiIndex{1}, 3, 1024));
    ResidualReport a = corollary_M_residual(MultiIndex{2, 1}, 2, 4096);
    ResidualReport b = corollary_M_residual(MultiIndex{2, 1}, 2, 8192);
    require_pass(a);
    require_pass(b);
    CHECK(corollary_gap(b).first / corollary_gap(a).first < Real("0.9"));
}

TEST_CASE("depth-reduction certificates") {
    DepthCertificate c = depth_reduction_certificate(MultiIndex{1, 2});
    CHECK(c.report.pass);
    CHECK(c.coefficient == -2);
    CHECK(abs(detail::eval_plain(c.combination).value.re - oracle::zeta3()) <= Real("2e-12"));
    DepthCertificate d = depth_reduction_certificate(MultiIndex{2});
    CHECK(d.report.pass);
    CHECK(d.coefficient == 2);
    CHECK_THROWS_AS(depth_reduction_certificate(MultiIndex{2, 2}), NoCertificateError);
    CHECK_THROWS_AS(depth_reduction_certificate(MultiIndex{2, 1}), AdmissibilityError);
}

TEST_CASE("bound lemmas") {
    require_pass(star_log_bound(MultiIndex{1, 1}, 2000));
    require_pass(tail_bound(MultiIndex{1, 2}, 2000));
    require_pass(positive_bound(MultiIndex{1}, 1, 2, 256));
    require_pass(far_window_bound(MultiIndex{2, 1, 2}, 2, 256));
    CHECK(parse_lemma("far-window") == BoundLemma::FarWindow);
    CHECK_THROWS_AS(parse_lemma("nope"), ParameterError);
}

TEST_CASE("reports replay from their parameters") {
    std::vector<ResidualReport> reps{stuffle_parity_residual(MultiIndex{1, 2}, 2), finite_parity_residual(MultiIndex{2}, 3, IntervalSpec::open(1, 4), 500),
                                     cyclotomic_parity_residual(MultiIndex{2}, ColorVector(3, {1}), 2, RegKind::Shuffle),
                                     depth_reduction_certificate(MultiIndex{1, 4}).report, tail_bound(MultiIndex{3}, 100)};
    for (const auto& r : reps) CHECK(replay(r.to_json()).to_json() == r.to_json());
}
