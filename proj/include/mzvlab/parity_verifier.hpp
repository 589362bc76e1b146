#pragma once

#include <json.hpp>

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core_indices.hpp"
#include "finite_hurwitz.hpp"
#include "mzv_numeric.hpp"
#include "series_expansion.hpp"
#include "zeta_expr.hpp"

namespace mzvlab {

using json = nlohmann::json;

struct ResidualReport {
    std::string theorem;
    json params = json::object();
    std::vector<std::pair<std::string, std::string>> blocks;  // name -> value±bound, in assembly order
    std::string residual;                                     // rendered residual (number or polynomial in T)
    Real residual_magnitude = 0;
    Real allowance = 0;
    bool pass = false;
    json extra = json::object();

    json to_json() const {
        json b = json::object();
        for (const auto& [name, value] : blocks) b[name] = value;
        return {{"theorem", theorem},
                {"params", params},
                {"blocks", b},
                {"residual", residual},
                {"residual_magnitude", format_bound(residual_magnitude)},
                {"allowance", format_bound(allowance)},
                {"pass", pass},
                {"extra", extra}};
    }
};

namespace detail {

inline json index_json(const MultiIndex& k) { return k.str(); }

inline void require_q(int q) {
    if (q <= 1) throw ParameterError("q must be an integer > 1");
}

// Nested sums over 1..n maintained incrementally: value() is the sum over (0, n] after add(n).
class RunningSum {
public:
    RunningSum(std::vector<int> parts, bool star) : parts_(std::move(parts)), star_(star), z_(parts_.size() + 1, Real(0)) { z_[0] = 1; }
    // inv_pow[e] = 1/n^e
    void add(const std::vector<Real>& inv_pow) {
        std::size_t r = parts_.size();
        if (star_)
            for (std::size_t i = 1; i <= r; ++i) z_[i] += z_[i - 1] * inv_pow[static_cast<std::size_t>(parts_[i - 1])];
        else
            for (std::size_t i = r; i >= 1; --i) z_[i] += z_[i - 1] * inv_pow[static_cast<std::size_t>(parts_[i - 1])];
    }
    const Real& value() const { return z_.back(); }

private:
    std::vector<int> parts_;
    bool star_;
    std::vector<Real> z_;
};

inline Real ipow(const Real& x, int e) {
    Real out = 1;
    for (int i = 0; i < e; ++i) out *= x;
    return out;
}

inline void fill_inv_powers(std::vector<Real>& out, long n) {
    Real inv = Real(1) / Real(n);
    out[0] = 1;
    for (std::size_t e = 1; e < out.size(); ++e) out[e] = out[e - 1] * inv;
}

// table[p] = zeta_(0,p)(k) for p = 0..M.
inline std::vector<Real> prefix_table(const MultiIndex& k, long M) {
    std::vector<Real> out(static_cast<std::size_t>(M + 1), Real(0));
    int maxe = 1;
    for (int p : k.parts()) maxe = std::max(maxe, p);
    std::vector<Real> inv(static_cast<std::size_t>(maxe + 1));
    RunningSum run(k.parts(), false);
    out[0] = k.empty() ? Real(1) : Real(0);
    for (long p = 1; p <= M; ++p) {
        out[static_cast<std::size_t>(p)] = run.value();
        if (p < M) {
            fill_inv_powers(inv, p);
            run.add(inv);
        }
    }
    if (k.empty()) std::fill(out.begin(), out.end(), Real(1));
    return out;
}

// integral_N^inf (1 + ln 2x)^r x^{-q} dx, which dominates sum_{n > N} of the integrand once it is decreasing.
inline Real log_power_tail(long N, int r, int q) {
    Real L = 1 + log(Real(2 * N));
    if (Real(q) * L <= Real(r)) throw InternalError("log-power tail integrand not yet decreasing at N");
    Real base = pow(Real(N), 1 - q) / (q - 1);
    Real acc = base;  // i = 0 term of the recursion I_0
    for (int i = 1; i <= r; ++i) acc = pow(L, i) * base + Real(i) / (q - 1) * acc;
    return acc;
}

// Real-valued window sum over lo < n_1 < ... < n_r < hi with 0 outside, plus the matching sum of |terms|.
inline std::pair<Real, Real> window_real(const MultiIndex& k, long lo, long hi) {
    int r = k.depth();
    std::vector<Real> z(static_cast<std::size_t>(r + 1), Real(0)), a(static_cast<std::size_t>(r + 1), Real(0));
    z[0] = a[0] = 1;
    for (long n = lo + 1; n < hi; ++n) {
        Real inv = Real(1) / Real(n);
        for (int i = r; i >= 1; --i) {
            Real t = pow(inv, k.at(i));
            z[static_cast<std::size_t>(i)] += z[static_cast<std::size_t>(i - 1)] * t;
            a[static_cast<std::size_t>(i)] += a[static_cast<std::size_t>(i - 1)] * abs(t);
        }
    }
    return {z.back(), a.back()};
}


inline ExactValue wv(const MultiIndex& k, long a, long b) { return window_value(k, a, b); }

inline Rational product_binom(const MultiIndex& k, const std::vector<int>& n, int skip = -1) {
    Rational w = 1;
    for (int l = 0; l < k.depth(); ++l)
        if (l != skip) w *= binom_neg(k[static_cast<std::size_t>(l)], n[static_cast<std::size_t>(l)]);
    return w;
}

// Pad a composition of length r-1 into length r with a zero at position j.
inline std::vector<int> with_hole(const std::vector<int>& rest, int j) {
    std::vector<int> out(rest.begin(), rest.begin() + j);
    out.push_back(0);
    out.insert(out.end(), rest.begin() + j, rest.end());
    return out;
}

struct FiniteTheoremParts {
    BoundedReal outer_negative, outer_positive;
    Real tail = 0;
    EvenZetaCombination origin, origin_pole, inner_regular, inner_singular;
    bool cross_check = false;
};

inline FiniteTheoremParts finite_theorem_parts(const MultiIndex& k, int q, long m1, long m2, long N) {
    FiniteTheoremParts out;
    int r = k.depth();
    bool mixed = m1 < 0 && 0 < m2;
    long W = std::max(std::labs(m1), std::labs(m2));
    if (N <= W + 1) throw ParameterError("truncation must exceed the window radius");

    // Outer poles n <= -m2 or n >= -m1, n != 0, truncated at |n| <= N.
    Real neg = 0, pos = 0, abs_neg = 0, abs_pos = 0;
    for (long n = -N; n <= N; ++n) {
        if (n == 0 || (-m2 < n && n < -m1)) continue;
        auto [z, za] = window_real(k, n + m1, n + m2);
        Real p = pow(Real(n), q);
        if (n < 0) {
            neg += z / p;
            abs_neg += za / abs(p);
        } else {
            pos += z / p;
            abs_pos += za / abs(p);
        }
    }
    int ops = static_cast<int>(m2 - m1) * (r + 1) + q + 8;
    out.outer_negative = BoundedReal(neg, abs_neg * ops * unit_roundoff());
    out.outer_positive = BoundedReal(pos, abs_pos * ops * unit_roundoff());
    // |zeta_(n+m1,n+m2)(k)| <= C(L, r) (|n| - W)^{-|k|} for |n| > N >= W.
    long L = m2 - m1 - 1;
    Real lattice = 1;
    for (int i = 0; i < r; ++i) lattice = lattice * Real(L - i) / Real(i + 1);
    if (lattice < 0) lattice = 0;
    int e = k.weight() + q - 1;
    out.tail = 2 * lattice / (Real(e) * pow(Real(N - W), e));

    // Residue at s = 0.
    for (int kk = 0; 2 * kk <= q; ++kk) {
        int m = q - 2 * kk;
        for_each_composition(m, r, [&](const std::vector<int>& nn) {
            MultiIndex kn = k.shifted(nn);
            ExactValue v(Rational(0));
            if (mixed)
                for (int j = 0; j <= r; ++j) v += wv(head(kn, j), m1, 0) * wv(tail(kn, j), 0, m2);
            else
                v = wv(kn, m1, m2);
            out.origin.add_zeta(kk, ExactValue(Rational(-2) * product_binom(k, nn)) * v);
        });
    }
    if (mixed)
        for (int j = 1; j <= r; ++j) {
            int kj = k.at(j);
            for (int kk = 0; 2 * kk <= q + kj; ++kk) {
                int m = q + kj - 2 * kk;
                for_each_composition(m, r - 1, [&](const std::vector<int>& rest) {
                    std::vector<int> nn = with_hole(rest, j - 1);
                    MultiIndex kn = k.shifted(nn);
                    ExactValue v = wv(head(kn, j - 1), m1, 0) * wv(tail(kn, j), 0, m2);
                    out.origin_pole.add_zeta(kk, ExactValue(Rational(-2) * product_binom(k, nn, j - 1)) * v);
                });
            }
        }

    // Inner poles -m2 < n < -m1, n != 0.
    for (long n = -m2 + 1; n < -m1; ++n) {
        if (n == 0) continue;
        Rational inv = Rational(1) / Rational(n);
        ExactValue reg(Rational(0));
        for (int j = 0; j <= r; ++j) reg += wv(head(k, j), n + m1, 0) * wv(tail(k, j), 0, n + m2);
        out.inner_regular.add_constant(ExactValue(rational_pow(inv, static_cast<unsigned>(q))) * reg);
        for (int j = 1; j <= r; ++j) {
            int kj = k.at(j);
            for (int kk = 0; 2 * kk <= kj; ++kk) {
                int m = kj - 2 * kk;
                for_each_composition(m, r, [&](const std::vector<int>& nn) {
                    MultiIndex kn = k.shifted(nn);
                    int nj = nn[static_cast<std::size_t>(j - 1)];
                    Rational c = Rational(-2) * binom_neg(q, nj) * product_binom(k, nn, j - 1) *
                                 rational_pow(inv, static_cast<unsigned>(q + nj));
                    ExactValue v = wv(head(kn, j - 1), n + m1, 0) * wv(tail(kn, j), 0, n + m2);
                    out.inner_singular.add_zeta(kk, ExactValue(c) * v);
                });
            }
        }
    }

    // The printed blocks against residues assembled from series products, exactly.
    IntervalSpec iv = IntervalSpec::open(m1, m2);
    EvenZetaCombination diff;
    for (long n = -m2 + 1; n < -m1; ++n)
        if (n != 0) diff += residue_at(q, k, iv, n);
    diff += residue_at(q, k, iv, 0);
    diff -= out.origin;
    diff -= out.origin_pole;
    diff -= out.inner_regular;
    diff -= out.inner_singular;
    bool ok = diff.exactly_zero();
    for (long n : {-m2, -m1, -W - 1, W + 1}) {
        if (n == 0 || (-m2 < n && n < -m1)) continue;
        EvenZetaCombination outer = residue_at(q, k, iv, n);
        EvenZetaCombination expected;
        expected.add_constant(wv(k, n + m1, n + m2) * ExactValue(Rational(1) / rational_pow(Rational(n), static_cast<unsigned>(q))));
        outer -= expected;
        ok = ok && outer.exactly_zero();
    }
    out.cross_check = ok;
    return out;
}

inline ResidualReport finite_report(const std::string& name, const MultiIndex& k, int q, long m1, long m2, long N) {
    FiniteTheoremParts parts = finite_theorem_parts(k, q, m1, m2, N);
    ResidualReport rep;
    rep.theorem = name;
    rep.params = {{"index", index_json(k)}, {"q", q}, {"interval", IntervalSpec::open(m1, m2).str()}, {"trunc", N}};
    BoundedReal total = parts.outer_negative + parts.outer_positive;
    rep.blocks.emplace_back("outer_negative", parts.outer_negative.str());
    rep.blocks.emplace_back("outer_positive", parts.outer_positive.str());
    auto add = [&](const char* label, const EvenZetaCombination& c, bool present) {
        if (!present) return;
        BoundedReal v = c.evaluate().real_part();
        rep.blocks.emplace_back(label, v.str());
        total += v;
    };
    bool mixed = m1 < 0 && 0 < m2;
    add("origin", parts.origin, true);
    add("origin_pole", parts.origin_pole, mixed);
    add("inner_regular", parts.inner_regular, true);
    add("inner_singular", parts.inner_singular, true);
    rep.residual = total.str();
    rep.residual_magnitude = abs(total.value);
    rep.allowance = parts.tail + total.bound;
    rep.pass = parts.cross_check && rep.residual_magnitude <= rep.allowance;
    rep.extra = {{"tail_allowance", format_bound(parts.tail)}, {"residue_cross_check", parts.cross_check}};
    return rep;
}

} // namespace detail

// The finite theorem for windows with m2 <= 0 or m1 >= 0; the two infinite n-sums are cut at |n| <= n_trunc.
inline ResidualReport finite_parity_residual(const MultiIndex& k, int q, const IntervalSpec& iv, long n_trunc) {
    detail::require_q(q);
    if (!iv.finite() || iv.right_closed) throw PreconditionError("finite parity needs a finite open window");
    if (!(*iv.m2 <= 0 || *iv.m1 >= 0)) throw PreconditionError("window straddles 0: use mixed_window_parity_residual");
    return detail::finite_report("finite_parity", k, q, *iv.m1, *iv.m2, n_trunc);
}

// The finite theorem for m1 < 0 < m2, where s = 0 is itself a pole of the window sum.
inline ResidualReport mixed_window_parity_residual(const MultiIndex& k, int q, const IntervalSpec& iv, long n_trunc) {
    detail::require_q(q);
    if (!iv.finite() || iv.right_closed) throw PreconditionError("mixed parity needs a finite open window");
    if (!(*iv.m1 < 0 && 0 < *iv.m2)) throw PreconditionError("window does not straddle 0: use finite_parity_residual");
    return detail::finite_report("mixed_window_parity", k, q, *iv.m1, *iv.m2, n_trunc);
}

// ---------------------------------------------------------------------------------------------------------------
// Regularized parity theorems, level 1 and cyclotomic.

struct ParityBlocks {
    ZetaExpr star_block, origin_block, reflected_block, pole_block;
};

// printed_colors selects the colors exactly as typeset in the reflected blocks; the default inverts them.
inline ParityBlocks parity_blocks(const MultiIndex& k, const ColorVector& mu, int q, RegKind kind, bool printed_colors = false) {
    int r = k.depth();
    int N = mu.level();
    int P = mu.product();
    ParityBlocks b;
    auto reflected_colors = [&](int len) {
        std::vector<int> e;
        for (int i = len - 1; i >= 0; --i) e.push_back(printed_colors ? mu[static_cast<std::size_t>(i)] : -mu[static_cast<std::size_t>(i)]);
        e.push_back(P);
        return ColorVector(N, e);
    };
    for (int j = 0; j <= r; ++j) {
        std::vector<int> kk(k.parts().begin(), k.parts().begin() + j);
        std::reverse(kk.begin(), kk.end());
        kk.push_back(q);
        std::vector<int> aa;
        for (int i = j - 1; i >= 0; --i) aa.push_back(mu[static_cast<std::size_t>(i)]);
        aa.push_back(-P);
        ZetaExpr reg = reg_expr(tail(k, j), mu.tail(j), kind);
        b.star_block += Rational(sign_pow(j)) * (star_expr(MultiIndex(kk), ColorVector(N, aa)) * reg);
        b.reflected_block += Rational(sign_pow(q + head(k, j).weight())) * (ZetaExpr::value(MultiIndex(kk), reflected_colors(j)) * reg);
    }
    for (int kk = 0; 2 * kk <= q; ++kk) {
        int m = q - 2 * kk;
        for_each_composition(m, r, [&](const std::vector<int>& nn) {
            b.origin_block += Rational(-2) * detail::product_binom(k, nn) * (reg_expr(k.shifted(nn), mu, kind) * ZetaExpr::even_zeta(kk));
        });
    }
    for (int j = 1; j <= r; ++j) {
        int kj = k.at(j);
        for (int kk = 0; 2 * kk <= kj; ++kk) {
            int m = kj - 2 * kk;
            for_each_composition(m, r, [&](const std::vector<int>& nn) {
                int nj = nn[static_cast<std::size_t>(j - 1)];
                int nsum = 0;
                for (int l = 0; l < j; ++l) nsum += nn[static_cast<std::size_t>(l)];
                Rational c = Rational(-2) * binom_neg(q, nj) * detail::product_binom(k, nn, j - 1) *
                             sign_pow(q + head(k, j - 1).weight() + nsum);
                MultiIndex kn = k.shifted(nn);
                std::vector<int> hk;
                for (int l = j - 2; l >= 0; --l) hk.push_back(kn[static_cast<std::size_t>(l)]);
                hk.push_back(q + nj);
                ZetaExpr head_value = ZetaExpr::value(MultiIndex(hk), reflected_colors(j - 1));
                b.pole_block += c * (head_value * reg_expr(tail(kn, j), mu.tail(j), kind) * ZetaExpr::even_zeta(kk));
            });
        }
    }
    return b;
}

namespace detail {

inline ResidualReport regpoly_report(const std::string& name, json params, const std::vector<std::pair<std::string, ZetaExpr>>& blocks) {
    ResidualReport rep;
    rep.theorem = name;
    rep.params = std::move(params);
    RegPoly total;
    std::vector<RegPoly> polys;
    for (const auto& [label, e] : blocks) {
        RegPoly p = evaluate(e);
        rep.blocks.emplace_back(label, p.str());
        total = total + p;
        polys.push_back(std::move(p));
    }
    rep.residual = total.str();
    rep.residual_magnitude = total.max_magnitude();
    rep.allowance = total.max_bound();
    bool pointwise = true;
    json points = json::object();
    for (int t : {0, 1, -2}) {
        BoundedComplex T(Complex(t), Real(0));
        BoundedComplex sum(Complex(0), Real(0));
        for (const auto& p : polys) sum += p.evaluate(T);
        BoundedComplex direct = total.evaluate(T);
        BoundedComplex gap = sum - direct;
        pointwise = pointwise && gap.contains_zero() && sum.contains_zero();
        points[std::to_string(t)] = sum.str(6);
    }
    rep.pass = total.vanishes() && pointwise;
    rep.extra = {{"pointwise", points}, {"pointwise_ok", pointwise}, {"degree", total.degree()}};
    return rep;
}

inline ResidualReport parity_report(const std::string& name, const MultiIndex& k, const ColorVector& mu, int q, RegKind kind,
                                    bool printed_colors) {
    ParityBlocks b = parity_blocks(k, mu, q, kind, printed_colors);
    json params = {{"index", index_json(k)}, {"q", q}, {"kind", to_string(kind)}};
    if (mu.level() > 1 || !mu.is_trivial()) params["colors"] = mu.str();
    if (printed_colors) params["printed_colors"] = true;
    return regpoly_report(name, params,
                          {{"block1", b.star_block}, {"block2", b.origin_block}, {"block3", b.reflected_block}, {"block4", b.pole_block}});
}

} // namespace detail

inline ResidualReport stuffle_parity_residual(const MultiIndex& k, int q) {
    detail::require_q(q);
    return detail::parity_report("stuffle_parity", k, ColorVector::trivial(1, k.depth()), q, RegKind::Stuffle, false);
}

inline ResidualReport shuffle_parity_residual(const MultiIndex& k, int q) {
    detail::require_q(q);
    return detail::parity_report("shuffle_parity", k, ColorVector::trivial(1, k.depth()), q, RegKind::Shuffle, false);
}

inline ResidualReport cyclotomic_parity_residual(const MultiIndex& k, const ColorVector& mu, int q, RegKind kind,
                                                 bool printed_colors = false) {
    if (mu.size() != k.depth()) throw RangeError("colors length must match the index depth");
    if (q < 1) throw ParameterError("q must be a positive integer");
    if (q == 1 && mu.product() == 0) throw ParameterError("(q, mu_1...mu_r) = (1, 1) is excluded");
    return detail::parity_report("cyclotomic_parity", k, mu, q, kind, printed_colors);
}

// The depth-one instance exactly as typeset in the worked example, independent of parity_blocks.
inline ResidualReport r1_example_residual(int k1, int q) {
    detail::require_q(q);
    if (k1 < 1) throw ParameterError("k1 must be positive");
    MultiIndex k{k1};
    ZetaExpr reg = reg_expr(k, RegKind::Stuffle);
    ZetaExpr zq = ZetaExpr::value(MultiIndex{q});
    ZetaExpr first = zq * reg - star_expr(MultiIndex{k1, q}) + Rational(sign_pow(q)) * (zq * reg) +
                     Rational(sign_pow(q + k1)) * ZetaExpr::value(MultiIndex{k1, q});
    ZetaExpr second, third;
    for (int kk = 0; 2 * kk <= q; ++kk) {
        int m = q - 2 * kk;
        second += Rational(-2) * binom_neg(k1, m) * (reg_expr(MultiIndex{k1 + m}, RegKind::Stuffle) * ZetaExpr::even_zeta(kk));
    }
    for (int kk = 0; 2 * kk <= k1; ++kk) {
        int m = k1 - 2 * kk;
        third += Rational(-2 * sign_pow(q) * sign_pow(m)) * binom_neg(q, m) * (ZetaExpr::value(MultiIndex{q + m}) * ZetaExpr::even_zeta(kk));
    }
    return detail::regpoly_report("r1_example", {{"index", k.str()}, {"q", q}},
                                  {{"products", first}, {"origin", second}, {"pole", third}});
}

// ---------------------------------------------------------------------------------------------------------------
// Depth reduction.

struct DepthCertificate {
    Rational coefficient;  // (-1)^{|K|} - (-1)^R
    ZetaExpr combination;  // equals zeta(K)
    ResidualReport report;
};

// zeta(K) from the T^0 part of the stuffle identity with q = K_R and k = rev(K_1..K_{R-1}).
inline DepthCertificate depth_reduction_certificate(const MultiIndex& K) {
    if (!K.admissible()) throw AdmissibilityError("depth reduction needs an admissible index");
    int R = K.depth();
    Rational c = sign_pow(K.weight()) - sign_pow(R);
    if (c == 0) throw NoCertificateError("(-1)^{|k|} - (-1)^r vanishes for " + K.str() + ": no certificate");
    int q = K.at(R);
    MultiIndex k = head(K, R - 1).reversed();
    ParityBlocks b = parity_blocks(k, ColorVector::trivial(1, k.depth()), q, RegKind::Stuffle);
    ZetaExpr total = (b.star_block + b.origin_block + b.reflected_block + b.pole_block).coefficient(0);
    ZetaExpr target = ZetaExpr::value(K);
    ZetaExpr rest = total - c * target;
    DepthCertificate cert;
    cert.coefficient = c;
    cert.combination = Rational(-1) / c * rest;

    bool lower = true;
    for (const auto& [key, coef] : rest.terms()) {
        const Monomial& m = key.second;
        if (m.size() >= 2) continue;
        if (m.size() == 1 && m[0].depth() < R) continue;
        if (m.size() == 1 && m[0].depth() == 1 && m[0].weight() % 2 == 0) continue;  // even zeta factor
        if (m.empty()) continue;
        lower = false;
    }
    BoundedComplex lhs = detail::eval_plain(target);
    BoundedComplex rhs = detail::eval_plain(cert.combination);
    BoundedReal diff = (lhs - rhs).real_part();
    ResidualReport& rep = cert.report;
    rep.theorem = "depth_reduction";
    rep.params = {{"index", K.str()}, {"q", q}};
    rep.blocks.emplace_back("target", lhs.real_part().str());
    rep.blocks.emplace_back("combination", rhs.real_part().str());
    rep.residual = diff.str();
    rep.residual_magnitude = abs(diff.value);
    rep.allowance = diff.bound;
    rep.pass = lower && diff.contains_zero();
    rep.extra = {{"coefficient", to_string(c)}, {"certificate", cert.combination.str()}, {"lower_depth_or_products", lower}};
    return cert;
}

// ---------------------------------------------------------------------------------------------------------------
// Truncated form at window (0, M).

namespace detail {

// Sum over n >= M of zeta_(n-M,n)(kappa)/n^q for n < n_end, through the truncation identity, plus its tail bound.
inline BoundedReal far_window_sum(const MultiIndex& kappa, int q, long M, long n_end, Real& tail_bound) {
    int r = kappa.depth();
    int maxe = q;
    for (int p : kappa.parts()) maxe = std::max(maxe, p);
    std::vector<Real> inv(static_cast<std::size_t>(maxe + 1));
    std::vector<RunningSum> heads, tails;  // heads: star over (0, a], reversed; tails: strict below p
    for (int j = 0; j <= r; ++j) {
        heads.emplace_back(head(kappa, j).reversed().parts(), true);
        tails.emplace_back(tail(kappa, j).parts(), false);
    }
    long a = 0, b = 1;  // heads include 1..a, tails include 1..b-1
    Real sum = 0, abs_sum = 0;
    for (long p = M; p < n_end; ++p) {
        while (a < p - M) {
            ++a;
            fill_inv_powers(inv, a);
            for (auto& h : heads) h.add(inv);
        }
        for (; b < p; ++b) {
            fill_inv_powers(inv, b);
            for (auto& t : tails) t.add(inv);
        }
        Real z = 0, za = 0;
        for (int j = 0; j <= r; ++j) {
            if (j > 0 && a == 0) break;
            Real term = heads[static_cast<std::size_t>(j)].value() * tails[static_cast<std::size_t>(j)].value();
            z += (j % 2) ? -term : term;
            za += abs(term);
        }
        Real pq = pow(Real(p), q);
        sum += z / pq;
        abs_sum += za / pq;
    }
    Real lattice = 1;
    for (int i = 0; i < r; ++i) lattice = lattice * Real(M - 1 - i) / Real(i + 1);
    int e = kappa.weight() + q - 1;
    tail_bound = lattice / (Real(e) * pow(Real(n_end - 1 - M), e));
    return BoundedReal(sum, abs_sum * Real(4 * (r + 2)) * unit_roundoff());
}

} // namespace detail

struct CorollaryParams {
    long first_factor = 128;  // positive-side sum runs to n <= first_factor * M
    long far_factor = 8;      // far-window sum runs to n < far_factor * M
};

// Full finite-M identity (pass/fail) and the gap to its regularized limit at T = zeta_(0,M)(1), which must decay.
inline ResidualReport corollary_M_residual(const MultiIndex& k, int q, long M, CorollaryParams cp = {}) {
    detail::require_q(q);
    if (M < 2) throw ParameterError("M must be at least 2");
    int r = k.depth();
    long N1 = cp.first_factor * M;
    long N5 = cp.far_factor * M;
    if (N1 < M || N5 < 2 * M) throw ParameterError("truncation factors too small");
    int maxe = q + 1;
    for (int p : k.parts()) maxe = std::max(maxe, p + q + 1);
    std::vector<Real> inv(static_cast<std::size_t>(maxe + 1));

    // Block 1: sum_j (-1)^j sum_{n <= N1} zeta*_(0,n](k_j..k_1) zeta_(0,n+M)(k_(j,r]) / n^q.
    std::vector<detail::RunningSum> star_heads, tails;
    for (int j = 0; j <= r; ++j) {
        star_heads.emplace_back(head(k, j).reversed().parts(), true);
        tails.emplace_back(tail(k, j).parts(), false);
    }
    long tails_upto = 0;
    auto advance_tails = [&](long upto) {
        for (; tails_upto < upto;) {
            ++tails_upto;
            detail::fill_inv_powers(inv, tails_upto);
            for (auto& t : tails) t.add(inv);
        }
    };
    advance_tails(M);
    Real c1 = 0, c1_abs = 0;
    for (long n = 1; n <= N1; ++n) {
        detail::fill_inv_powers(inv, n);
        for (auto& h : star_heads) h.add(inv);
        Real invq = inv[static_cast<std::size_t>(q)];
        advance_tails(n + M - 1);
        for (int j = 0; j <= r; ++j) {
            Real term = star_heads[static_cast<std::size_t>(j)].value() * tails[static_cast<std::size_t>(j)].value() * invq;
            c1 += (j % 2) ? -term : term;
            c1_abs += abs(term);
        }
    }
    BoundedReal block1(c1, c1_abs * Real(4 * (r + 3)) * unit_roundoff());
    Real tail1 = pow(Real(2), r) * detail::log_power_tail(N1, r, q);

    // Tables zeta_(0,p)(.) for p <= M.
    std::map<MultiIndex, std::vector<Real>> tables;
    auto table = [&](const MultiIndex& idx) -> const std::vector<Real>& {
        auto it = tables.find(idx);
        if (it == tables.end()) it = tables.emplace(idx, detail::prefix_table(idx, M)).first;
        return it->second;
    };

    // Block 2: -2 sum_{2k+m=q} sum_{|n|=m} prod binom zeta_(0,M)(k+n) zeta(2k).
    BoundedReal block2(Real(0), Real(0));
    for (int kk = 0; 2 * kk <= q; ++kk) {
        int m = q - 2 * kk;
        for_each_composition(m, r, [&](const std::vector<int>& nn) {
            BoundedReal v(table(k.shifted(nn))[static_cast<std::size_t>(M)], Real(0));
            v.bound = abs(v.value) * Real(M) * Real(4 * (r + 1)) * unit_roundoff();
            BoundedReal z = kk == 0 ? BoundedReal::exact(Rational(-1, 2)) : even_zeta(kk);
            block2 += BoundedReal::exact(Rational(-2) * detail::product_binom(k, nn)) * v * z;
        });
    }

    // Blocks 3 and 4 over -M < n < 0, written with p = -n and zeta_(-p,0)(h) = (-1)^{|h|} zeta_(0,p)(rev h).
    Real c3 = 0, c3_abs = 0;
    for (int j = 0; j <= r; ++j) {
        MultiIndex h = head(k, j), t = tail(k, j);
        const auto& A = table(h.reversed());
        const auto& B = table(t);
        int sgn = sign_pow(h.weight() + q);
        for (long p = 1; p < M; ++p) {
            Real term = A[static_cast<std::size_t>(p)] * B[static_cast<std::size_t>(M - p)] / pow(Real(p), q);
            c3 += sgn * term;
            c3_abs += abs(term);
        }
    }
    BoundedReal block3(c3, c3_abs * Real(M) * Real(4 * (r + 2)) * unit_roundoff());

    Real c4 = 0, c4_abs = 0;
    for (int j = 1; j <= r; ++j) {
        int kj = k.at(j);
        for (int kk = 0; 2 * kk <= kj; ++kk) {
            int m = kj - 2 * kk;
            Real z = kk == 0 ? Real(-0.5) : even_zeta(kk).value;
            for_each_composition(m, r, [&](const std::vector<int>& nn) {
                int nj = nn[static_cast<std::size_t>(j - 1)];
                MultiIndex kn = k.shifted(nn);
                MultiIndex h = head(kn, j - 1), t = tail(kn, j);
                Real c = to_real(Rational(-2) * binom_neg(q, nj) * detail::product_binom(k, nn, j - 1)) * z;
                const auto& A = table(h.reversed());
                const auto& B = table(t);
                int sgn = sign_pow(h.weight() + q + nj);
                for (long p = 1; p < M; ++p) {
                    Real term = c * A[static_cast<std::size_t>(p)] * B[static_cast<std::size_t>(M - p)] / pow(Real(p), q + nj);
                    c4 += sgn * term;
                    c4_abs += abs(term);
                }
            });
        }
    }
    BoundedReal block4(c4, c4_abs * Real(M) * Real(4 * (r + 3)) * unit_roundoff() + abs(c4) * Real("1e-45"));

    // Block 5: sum_{n <= -M} zeta_(n,n+M)(k)/n^q = (-1)^{q+|k|} sum_{p >= M} zeta_(p-M,p)(rev k)/p^q.
    Real tail5 = 0;
    BoundedReal block5 = detail::far_window_sum(k.reversed(), q, M, N5, tail5);
    if (sign_pow(q + k.weight()) < 0) block5 = -block5;

    // Regularized limit of block 1 at T = zeta_(0,M)(1).
    ParityBlocks pb = parity_blocks(k, ColorVector::trivial(1, r), q, RegKind::Stuffle);
    Real T = table(MultiIndex{1})[static_cast<std::size_t>(M)];
    BoundedReal limit1 = evaluate(pb.star_block).evaluate(BoundedComplex(Complex(T), abs(T) * Real(M) * unit_roundoff())).real_part();

    BoundedReal identity = block1 + block2 + block3 + block4 + block5;
    BoundedReal gap = limit1 + block2 + block3 + block4 + block5;

    ResidualReport rep;
    rep.theorem = "corollary_M";
    rep.params = {{"index", k.str()}, {"q", q}, {"M", M}, {"first_factor", cp.first_factor}, {"far_factor", cp.far_factor}};
    rep.blocks = {{"block1", block1.str()}, {"block2", block2.str()}, {"block3", block3.str()},
                  {"block4", block4.str()}, {"block5", block5.str()}, {"block1_limit", limit1.str()}};
    rep.residual = identity.str();
    rep.residual_magnitude = abs(identity.value);
    rep.allowance = tail1 + tail5 + identity.bound;
    rep.pass = rep.residual_magnitude <= rep.allowance;
    rep.extra = {{"gap", gap.str()},
                 {"gap_magnitude", format_bound(abs(gap.value))},
                 {"gap_allowance", format_bound(tail5 + gap.bound)},
                 {"tail_first", format_bound(tail1)},
                 {"tail_far", format_bound(tail5)}};
    return rep;
}

// |gap| and its allowance from a corollary report.
inline std::pair<Real, Real> corollary_gap(const ResidualReport& rep) {
    return {Real(rep.extra.at("gap_magnitude").get<std::string>()), Real(rep.extra.at("gap_allowance").get<std::string>())};
}

// ---------------------------------------------------------------------------------------------------------------
// The four bound lemmas.

enum class BoundLemma { StarLog, Tail, Positive, FarWindow };

inline std::string to_string(BoundLemma l) {
    switch (l) {
    case BoundLemma::StarLog: return "star-log";
    case BoundLemma::Tail: return "tail";
    case BoundLemma::Positive: return "positive";
    case BoundLemma::FarWindow: return "far-window";
    }
    return "?";
}

inline BoundLemma parse_lemma(const std::string& s) {
    if (s == "star-log") return BoundLemma::StarLog;
    if (s == "tail") return BoundLemma::Tail;
    if (s == "positive") return BoundLemma::Positive;
    if (s == "far-window") return BoundLemma::FarWindow;
    throw ParameterError("unknown lemma '" + s + "' (star-log, tail, positive, far-window)");
}

namespace detail {

inline ResidualReport margin_report(const std::string& lemma, json params, const Real& margin, const std::string& where, bool pass,
                                    json extra = json::object()) {
    ResidualReport rep;
    rep.theorem = "bound:" + lemma;
    rep.params = std::move(params);
    rep.residual = format_real(margin, 12);
    rep.residual_magnitude = margin;
    rep.allowance = 0;
    rep.pass = pass;
    rep.extra = std::move(extra);
    rep.extra["margin"] = format_real(margin, 12);
    rep.extra["tightest_at"] = where;
    return rep;
}

} // namespace detail

// zeta*_(0,n](k) < 2^{r-1} (1 + ln n)^r for n <= n_max; equality is tolerated only at r = 1, n = 1 where both sides are 1.
inline ResidualReport star_log_bound(const MultiIndex& k, long n_max) {
    if (k.empty()) throw ParameterError("star-log bound needs a nonempty index");
    int r = k.depth();
    int maxe = 1;
    for (int p : k.parts()) maxe = std::max(maxe, p);
    std::vector<Real> inv(static_cast<std::size_t>(maxe + 1));
    detail::RunningSum run(k.parts(), true);
    Real best = -1;
    long at = 0;
    bool ok = true;
    Real scale = pow(Real(2), r - 1);
    for (long n = 1; n <= n_max; ++n) {
        detail::fill_inv_powers(inv, n);
        run.add(inv);
        Real rhs = scale * pow(1 + log(Real(n)), r);
        Real margin = (rhs - run.value()) / rhs;
        bool equality_point = r == 1 && n == 1;
        if (equality_point ? margin < 0 : margin <= Real(0)) ok = false;
        if (!equality_point && (best < 0 || margin < best)) {
            best = margin;
            at = n;
        }
    }
    json extra = {{"relative", true}};
    if (r == 1) extra["equality_at_n1"] = true;
    return detail::margin_report("star-log", {{"index", k.str()}, {"n_max", n_max}}, best, "n=" + std::to_string(at), ok, extra);
}

// |zeta_(0,N)(k) - zeta(k)| < 2r (1 + ln N)^{r-1} / N for admissible k and 2 <= N <= n_max.
inline ResidualReport tail_bound(const MultiIndex& k, long n_max) {
    if (!k.admissible()) throw AdmissibilityError("tail bound needs an admissible index");
    int r = k.depth();
    BoundedReal full = zeta(k, 1e-15);
    int maxe = 1;
    for (int p : k.parts()) maxe = std::max(maxe, p);
    std::vector<Real> inv(static_cast<std::size_t>(maxe + 1));
    detail::RunningSum run(k.parts(), false);
    Real best = -1;
    long at = 0;
    bool ok = true;
    for (long N = 1; N <= n_max; ++N) {
        if (N >= 2) {
            Real rhs = 2 * r * pow(1 + log(Real(N)), r - 1) / N;
            Real diff = abs(full.value - run.value()) + full.bound;
            Real margin = (rhs - diff) / rhs;
            if (margin <= 0) ok = false;
            if (best < 0 || margin < best) {
                best = margin;
                at = N;
            }
        }
        detail::fill_inv_powers(inv, N);
        run.add(inv);
    }
    return detail::margin_report("tail", {{"index", k.str()}, {"n_max", n_max}}, best, "N=" + std::to_string(at), ok, {{"relative", true}});
}

// For V = sum_n zeta*_(0,n](h) ((zeta_(0,n+M)(1))^s - (zeta_(0,M)(1))^s) / n^q: checks the termwise majorant used in the
// proof and reports c_eff = V M / ln^{|h|+s} M, where |h| is the depth of h.
inline ResidualReport positive_bound(const MultiIndex& h, int s, int q, long M, long trunc_factor = 64) {
    detail::require_q(q);
    if (s < 0) throw ParameterError("s must be nonnegative");
    if (M < 3) throw ParameterError("M must be at least 3");
    int j = h.depth();
    long N = trunc_factor * M;
    int maxe = q;
    for (int p : h.parts()) maxe = std::max(maxe, p);
    std::vector<Real> inv(static_cast<std::size_t>(maxe + 1));
    detail::RunningSum star(h.parts(), true);
    Real HM = 0;
    for (long m = 1; m < M; ++m) HM += Real(1) / m;
    Real H = HM;  // zeta_(0, n+M)(1)
    Real pref = j == 0 ? Real(1) : pow(Real(2), j - 1);
    Real V = 0, B = 0, worst = -1;
    long at = 0;
    bool ok = true;
    std::vector<Rational> binoms;
    for (int l = 0; l <= s; ++l) {
        mpz_class c;
        mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(s), static_cast<unsigned long>(l));
        binoms.emplace_back(c);
    }
    // The majorant only has to dominate by a visible margin, so it is evaluated in double; binom(s, l) (1 + ln M)^{s-l}.
    std::vector<double> coef;
    for (int l = 0; l <= s; ++l) coef.push_back(binoms[static_cast<std::size_t>(l)].get_d() * std::pow(1 + std::log(static_cast<double>(M)), s - l));
    double pref_d = pref.convert_to<double>();
    Real HMs = detail::ipow(HM, s);
    for (long n = 1; n <= N; ++n) {
        detail::fill_inv_powers(inv, n);
        star.add(inv);
        H += Real(1) / Real(n + M - 1);
        Real a = star.value() * (detail::ipow(H, s) - HMs) * inv[static_cast<std::size_t>(q)];
        double nd = static_cast<double>(n);
        double lg = std::log1p(nd / static_cast<double>(M - 1));
        double b = 0, lgp = 1;
        for (int l = 1; l <= s; ++l) {
            lgp *= lg;
            b += coef[static_cast<std::size_t>(l)] * lgp;
        }
        b *= pref_d * std::pow(1 + std::log(nd), j) * std::pow(nd, -q);
        double ad = a.convert_to<double>();
        V += a;
        B += b;
        if (b > 0) {
            double margin = (b - ad) / b;
            if (margin <= 1e-12) ok = false;
            if (worst < 0 || margin < worst) {
                worst = margin;
                at = n;
            }
        } else if (ad != 0) ok = false;
    }
    // For n > N >= M the majorant term is at most 2^{j-1} 2^s (1 + ln 2n)^{j+s} / n^q.
    Real tail = pref * pow(Real(2), s) * detail::log_power_tail(N, j + s, q);
    Real lnM = log(Real(M));
    Real c_eff = (V + tail) * Real(M) / pow(lnM, j + s);
    json extra = {{"value", format_real(V, 12)}, {"majorant", format_real(B, 12)}, {"tail", format_bound(tail)},
                  {"c_eff", format_real(c_eff, 8)}, {"relative", true}};
    if (s == 0) {
        worst = 1;  // both sides vanish identically
        ok = true;
    }
    return detail::margin_report("positive", {{"index", h.str()}, {"s", s}, {"q", q}, {"M", M}}, worst, "n=" + std::to_string(at), ok, extra);
}

// |sum_{n <= -M} zeta_(n,n+M)(k)/n^q| < 2^r (r+2) ln^r M / M for k_r > 1.
inline ResidualReport far_window_bound(const MultiIndex& k, int q, long M, long far_factor = 8) {
    detail::require_q(q);
    if (!k.admissible()) throw AdmissibilityError("far-window bound needs k_r > 1");
    int r = k.depth();
    Real tail = 0;
    BoundedReal v = detail::far_window_sum(k.reversed(), q, M, far_factor * M, tail);
    Real lhs = abs(v.value) + v.bound + tail;
    Real rhs = pow(Real(2), r) * (r + 2) * pow(log(Real(M)), r) / M;
    Real margin = (rhs - lhs) / rhs;
    return detail::margin_report("far-window", {{"index", k.str()}, {"q", q}, {"M", M}}, margin, "M=" + std::to_string(M), margin > 0,
                                 {{"value", v.str(12)}, {"tail", format_bound(tail)}, {"bound", format_real(rhs, 12)}, {"relative", true}});
}

struct BoundGrid {
    long n_max = 10000;
    std::vector<long> M_list{256, 1024, 4096};
};

inline std::vector<ResidualReport> bound_suite(BoundLemma lemma, const BoundGrid& g) {
    std::vector<ResidualReport> out;
    switch (lemma) {
    case BoundLemma::StarLog:
        for (const auto& k : {MultiIndex{1}, MultiIndex{1, 1}, MultiIndex{1, 1, 1}, MultiIndex{2, 1}, MultiIndex{1, 2, 1}, MultiIndex{1, 1, 1, 1}})
            out.push_back(star_log_bound(k, g.n_max));
        break;
    case BoundLemma::Tail:
        for (int w = 2; w <= 5; ++w)
            for (const auto& k : indices_of_weight(w, 3))
                if (k.admissible()) out.push_back(tail_bound(k, g.n_max));
        break;
    case BoundLemma::Positive:
        for (const auto& h : {MultiIndex{}, MultiIndex{1}, MultiIndex{2}, MultiIndex{1, 1}})
            for (int s = 1; s <= 2; ++s)
                for (int q : {2, 3})
                    for (long M : g.M_list) out.push_back(positive_bound(h, s, q, M));
        break;
    case BoundLemma::FarWindow:
        for (int w = 2; w <= 4; ++w)
            for (const auto& k : indices_of_weight(w, 3))
                if (k.admissible())
                    for (int q : {2, 3})
                        for (long M : g.M_list) out.push_back(far_window_bound(k, q, M));
        break;
    }
    return out;
}

// ---------------------------------------------------------------------------------------------------------------

// Re-run a report from its parameter block.
inline ResidualReport replay(const json& report) {
    const std::string name = report.at("theorem").get<std::string>();
    const json& p = report.at("params");
    auto idx = [&] { return parse_index(p.at("index").get<std::string>()); };
    auto kind = [&] { return p.at("kind").get<std::string>() == "shuffle" ? RegKind::Shuffle : RegKind::Stuffle; };
    if (name == "finite_parity")
        return finite_parity_residual(idx(), p.at("q"), parse_interval(p.at("interval").get<std::string>()), p.at("trunc"));
    if (name == "mixed_window_parity")
        return mixed_window_parity_residual(idx(), p.at("q"), parse_interval(p.at("interval").get<std::string>()), p.at("trunc"));
    if (name == "stuffle_parity") return stuffle_parity_residual(idx(), p.at("q"));
    if (name == "shuffle_parity") return shuffle_parity_residual(idx(), p.at("q"));
    if (name == "cyclotomic_parity") {
        MultiIndex k = idx();
        ColorVector c = p.contains("colors") ? parse_colors(p.at("colors").get<std::string>()) : ColorVector::trivial(1, k.depth());
        return cyclotomic_parity_residual(k, c, p.at("q"), kind(), p.value("printed_colors", false));
    }
    if (name == "r1_example") return r1_example_residual(idx().at(1), p.at("q"));
    if (name == "depth_reduction") return depth_reduction_certificate(idx()).report;
    if (name == "corollary_M")
        return corollary_M_residual(idx(), p.at("q"), p.at("M"), {p.at("first_factor").get<long>(), p.at("far_factor").get<long>()});
    if (name == "bound:star-log") return star_log_bound(idx(), p.at("n_max"));
    if (name == "bound:tail") return tail_bound(idx(), p.at("n_max"));
    if (name == "bound:positive") return positive_bound(idx(), p.at("s"), p.at("q"), p.at("M"));
    if (name == "bound:far-window") return far_window_bound(idx(), p.at("q"), p.at("M"));
    throw ParameterError("cannot replay theorem '" + name + "'");
}

} // namespace mzvlab
