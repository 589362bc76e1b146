#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core_indices.hpp"
#include "finite_hurwitz.hpp"
#include "mzv_numeric.hpp"

namespace mzvlab {

namespace detail {

inline std::optional<ColorVector> opt_head(const std::optional<ColorVector>& c, int j) {
    return c ? std::optional<ColorVector>(c->head(j)) : std::nullopt;
}
inline std::optional<ColorVector> opt_tail(const std::optional<ColorVector>& c, int j) {
    return c ? std::optional<ColorVector>(c->tail(j)) : std::nullopt;
}

} // namespace detail

// Value at s = 0 of the sum over the window (a, b); a may be -inf when b <= 0, b may be +inf when a >= 0.
inline ExactValue window_value(const MultiIndex& k, std::optional<long> a, std::optional<long> b,
                               const std::optional<ColorVector>& colors = std::nullopt) {
    detail::check_colors(k, colors);
    if (a && b) {
        if (*a >= *b) throw RangeError("window needs m1 < m2");
        return finite_sum(k, *a + 1, *b - 1, Rational(0), false, colors);
    }
    if (k.empty()) return Rational(1);
    ColorVector c = colors ? *colors : ColorVector::trivial(1, k.depth());
    if (a && !b) {
        if (*a < 0) throw UnsupportedError("window (a, +inf) with a < 0: split it at 0 first");
        if (!convergent(k, c)) throw DivergenceError("window sum up to +inf diverges for (k_r, mu_r) = (1, 1)");
        // zeta_(a,inf)(k) = sum_j (-1)^j zeta*_(0,a](k_j..k_1) zeta(k_(j,r])
        ExactValue total(Rational(0));
        for (int j = 0; j <= k.depth(); ++j) {
            if (j > 0 && *a == 0) break;
            ExactValue front = finite_sum(head(k, j).reversed(), 1, *a, Rational(0), true,
                                          colors ? std::optional<ColorVector>(c.head(j).reversed()) : std::nullopt);
            ExactValue back = tail(k, j).empty() ? ExactValue(Rational(1)) : ExactValue(symbol_value(ZetaSymbol(tail(k, j), c.tail(j))));
            ExactValue term = front * back;
            total += (j % 2) ? -term : term;
        }
        return total;
    }
    if (!a && b) {
        if (*b > 0) throw UnsupportedError("window (-inf, b) with b > 0: split it at 0 first");
        std::optional<ColorVector> rc = colors ? std::optional<ColorVector>(colors->reversed().inverse()) : std::nullopt;
        ExactValue v = window_value(k.reversed(), -*b, std::nullopt, rc);
        return (k.weight() % 2) ? -v : v;
    }
    throw UnsupportedError("doubly infinite window");
}

// Coefficients of (s - n)^m, m = 0..max_order, at a center with no pole inside the window.
inline std::vector<ExactValue> taylor_at(const MultiIndex& k, const IntervalSpec& iv, long n, int max_order,
                                         const std::optional<ColorVector>& colors = std::nullopt) {
    if (iv.right_closed) throw UnsupportedError("series at integer points are stated for open windows");
    detail::check_colors(k, colors);
    bool right_of = iv.m1 && n >= -*iv.m1;
    bool left_of = iv.m2 && n <= -*iv.m2;
    if (k.depth() > 0 && !right_of && !left_of) throw PreconditionError("center lies inside the window: use laurent_at");
    auto shift = [&](std::optional<long> m) { return m ? std::optional<long>(*m + n) : std::nullopt; };
    ExactValue pre = colors ? color_power(colors->level(), -n * static_cast<long>(colors->product())) : ExactValue(Rational(1));
    std::vector<ExactValue> out;
    for (int m = 0; m <= max_order; ++m) {
        ExactValue c(Rational(0));
        for_each_composition(m, k.depth(), [&](const std::vector<int>& nn) {
            Rational w = 1;
            for (std::size_t l = 0; l < nn.size(); ++l) w *= binom_neg(k[l], nn[l]);
            c += ExactValue(w) * window_value(k.shifted(nn), shift(iv.m1), shift(iv.m2), colors);
        });
        out.push_back(pre * c);
    }
    return out;
}

// Expansion around a center n inside (-m2, -m1): prefactor * (sum a_m t^m + sum_j sum_m b[j][m] t^{m - k_j}), t = s - n.
struct LaurentSeries {
    long center = 0;
    std::vector<int> pole_orders;            // k_j, j = 1..r
    std::vector<ExactValue> a;               // regular part
    std::vector<std::vector<ExactValue>> b;  // b[j-1][m]
    ExactValue prefactor = Rational(1);

    // Coefficient of t^d of the whole series (prefactor applied), for d in the computed range.
    std::map<int, ExactValue> by_degree() const {
        std::map<int, ExactValue> out;
        for (std::size_t m = 0; m < a.size(); ++m) out[static_cast<int>(m)] += prefactor * a[m];
        for (std::size_t j = 0; j < b.size(); ++j)
            for (std::size_t m = 0; m < b[j].size(); ++m) out[static_cast<int>(m) - pole_orders[j]] += prefactor * b[j][m];
        return out;
    }

    // Truncated series at s = center + t, t != 0; regular part up to a.size()-1, singular blocks up to b[j].size()-1.
    ExactValue evaluate(const Rational& t) const {
        ExactValue total(Rational(0));
        for (const auto& [d, c] : by_degree()) {
            Rational p = d >= 0 ? rational_pow(t, static_cast<unsigned>(d)) : Rational(1) / rational_pow(t, static_cast<unsigned>(-d));
            total += c * ExactValue(p);
        }
        return total;
    }
};

// max_order bounds m in both a_m and b_{m,j}.
inline LaurentSeries laurent_at(const MultiIndex& k, const IntervalSpec& iv, long n, int max_order,
                                const std::optional<ColorVector>& colors = std::nullopt) {
    if (iv.right_closed) throw UnsupportedError("series at integer points are stated for open windows");
    detail::check_colors(k, colors);
    bool inside = (!iv.m2 || -*iv.m2 < n) && (!iv.m1 || n < -*iv.m1);
    if (!inside) throw PreconditionError("center outside (-m2, -m1): use taylor_at");
    int r = k.depth();
    std::optional<long> lo = iv.m1 ? std::optional<long>(*iv.m1 + n) : std::nullopt;
    std::optional<long> hi = iv.m2 ? std::optional<long>(*iv.m2 + n) : std::nullopt;
    LaurentSeries out;
    out.center = n;
    out.pole_orders = k.parts();
    out.prefactor = colors ? color_power(colors->level(), -n * static_cast<long>(colors->product())) : ExactValue(Rational(1));

    // Cache the window values, keyed by shifted slices.
    std::map<std::pair<MultiIndex, int>, ExactValue> left_cache, right_cache;
    auto left = [&](const MultiIndex& idx, int j) -> ExactValue {
        auto key = std::make_pair(idx, j);
        auto it = left_cache.find(key);
        if (it != left_cache.end()) return it->second;
        ExactValue v = window_value(idx, lo, 0L, detail::opt_head(colors, j));
        left_cache.emplace(key, v);
        return v;
    };
    auto right = [&](const MultiIndex& idx, int j) -> ExactValue {
        auto key = std::make_pair(idx, j);
        auto it = right_cache.find(key);
        if (it != right_cache.end()) return it->second;
        ExactValue v = window_value(idx, 0L, hi, detail::opt_tail(colors, j));
        right_cache.emplace(key, v);
        return v;
    };
    for (int m = 0; m <= max_order; ++m) {
        ExactValue c(Rational(0));
        for_each_composition(m, r, [&](const std::vector<int>& nn) {
            Rational w = 1;
            for (int l = 0; l < r; ++l) w *= binom_neg(k[static_cast<std::size_t>(l)], nn[static_cast<std::size_t>(l)]);
            MultiIndex shifted = k.shifted(nn);
            ExactValue s(Rational(0));
            for (int j = 0; j <= r; ++j) s += left(head(shifted, j), j) * right(tail(shifted, j), j);
            c += ExactValue(w) * s;
        });
        out.a.push_back(c);
    }
    for (int j = 1; j <= r; ++j) {
        std::vector<ExactValue> bj;
        for (int m = 0; m <= max_order; ++m) {
            ExactValue c(Rational(0));
            for_each_composition(m, r - 1, [&](const std::vector<int>& rest) {
                std::vector<int> nn(rest.begin(), rest.begin() + (j - 1));
                nn.push_back(0);
                nn.insert(nn.end(), rest.begin() + (j - 1), rest.end());
                Rational w = 1;
                for (int l = 0; l < r; ++l)
                    if (l != j - 1) w *= binom_neg(k[static_cast<std::size_t>(l)], nn[static_cast<std::size_t>(l)]);
                MultiIndex shifted = k.shifted(nn);
                c += ExactValue(w) * left(head(shifted, j - 1), j - 1) * right(tail(shifted, j), j);
            });
            bj.push_back(c);
        }
        out.b.push_back(std::move(bj));
    }
    return out;
}

// Coefficient of (s - n)^i in s^{-q}, i = 0..max_order.
inline std::vector<Rational> inverse_power_expand(int q, long n, int max_order) {
    if (q < 1) throw ParameterError("inverse_power_expand needs q >= 1");
    if (n == 0) throw PreconditionError("s^{-q} has a pole at 0; the origin is handled by residue_at");
    std::vector<Rational> out;
    Rational inv = Rational(1) / Rational(n);
    Rational p = rational_pow(inv, static_cast<unsigned>(q));
    for (int i = 0; i <= max_order; ++i) {
        out.push_back(binom_neg(q, i) * p);
        p *= inv;
    }
    return out;
}

enum class KernelKind { Cot, Csc };

// pi cot(pi s) = -2 sum_k zeta(2k) t^{2k-1}, pi / sin(pi s) = 2 (-1)^n sum_k zetabar(2k) t^{2k-1}, t = s - n.
struct KernelExpansion {
    KernelKind kind = KernelKind::Cot;
    long center = 0;
    std::vector<Rational> factor;  // factor[k] multiplies zeta(2k) (cot) or zetabar(2k) (csc)

    // Coefficient of t^{2k-1} as a number.
    BoundedReal coefficient(int k) const {
        BoundedReal z = kind == KernelKind::Cot ? even_zeta(k) : alt_zeta(2 * k);
        return BoundedReal::exact(factor[static_cast<std::size_t>(k)]) * z;
    }

    // Coefficient of 1/(s - n): -2 zeta(0) = 1, or 2 (-1)^n zetabar(0) = (-1)^n, exactly.
    Rational leading() const {
        Rational z0 = kind == KernelKind::Cot ? Rational(-1, 2) : Rational(1, 2);
        return factor[0] * z0;
    }

    // Truncated series at s = center + t (0 < |t| < 1), with the omitted tail folded into the bound.
    BoundedReal evaluate(const Real& t) const {
        BoundedReal sum(Real(0), Real(0));
        BoundedReal tp(1 / t, Real(0));
        BoundedReal t2(t * t, Real(0));
        for (std::size_t k = 0; k < factor.size(); ++k) {
            sum += coefficient(static_cast<int>(k)) * tp;
            tp *= t2;
        }
        // |zeta(2k)| <= 2 and |zetabar(2k)| <= 1 for k >= 1, so each omitted term is at most 4 |t|^{2k-1}.
        Real at = abs(t);
        Real tail = 4 * pow(at, 2 * static_cast<int>(factor.size()) - 1) / (1 - at * at);
        sum.bound += tail;
        return sum;
    }
};

inline KernelExpansion kernel_expand(KernelKind kind, long n, int max_order) {
    if (max_order < 0) throw ParameterError("max_order must be nonnegative");
    KernelExpansion e;
    e.kind = kind;
    e.center = n;
    Rational f = kind == KernelKind::Cot ? Rational(-2) : Rational(2 * sign_pow(n));
    e.factor.assign(static_cast<std::size_t>(max_order + 1), f);
    return e;
}

// c_0 + sum_{k >= 1} c_k zeta(2k); zeta(0) terms are folded into c_0 as -1/2.
class EvenZetaCombination {
public:
    void add_constant(const ExactValue& c) { add_raw(0, c); }
    // c * zeta(2k), k >= 0.
    void add_zeta(int k, const ExactValue& c) {
        if (k == 0) add_raw(0, ExactValue(Rational(-1, 2)) * c);
        else add_raw(k, c);
    }
    EvenZetaCombination& operator+=(const EvenZetaCombination& o) {
        for (const auto& [k, c] : o.terms_) add_raw(k, c);
        return *this;
    }
    EvenZetaCombination& operator-=(const EvenZetaCombination& o) {
        for (const auto& [k, c] : o.terms_) add_raw(k, -c);
        return *this;
    }
    const std::map<int, ExactValue>& terms() const { return terms_; }

    bool is_exact() const {
        for (const auto& [k, c] : terms_)
            if (!c.is_exact()) return false;
        return true;
    }
    // Every coefficient is an exact zero.
    bool exactly_zero() const {
        for (const auto& [k, c] : terms_)
            if (!c.is_exact() || c.rational() != 0) return false;
        return true;
    }

    BoundedComplex evaluate() const {
        BoundedComplex total(Complex(0), Real(0));
        for (const auto& [k, c] : terms_) {
            BoundedComplex z = k == 0 ? BoundedComplex(Complex(1), Real(0)) : BoundedComplex(even_zeta(k));
            total += c.bounded() * z;
        }
        return total;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (const auto& [k, c] : terms_) {
            if (!s.empty()) s += " + ";
            s += "(" + c.str() + ")";
            if (k > 0) s += "·ζ(" + std::to_string(2 * k) + ")";
        }
        return s;
    }

private:
    void add_raw(int k, const ExactValue& c) {
        auto it = terms_.find(k);
        if (it == terms_.end()) terms_.emplace(k, c);
        else it->second += c;
    }
    std::map<int, ExactValue> terms_;
};

// Residue of pi cot(pi s) * zeta_(m1,m2)(k; s) / s^q at the integer s = n, assembled by multiplying the three
// local expansions and reading the coefficient of (s - n)^{-1}.
inline EvenZetaCombination residue_at(int q, const MultiIndex& k, const IntervalSpec& iv, long n,
                                      const std::optional<ColorVector>& colors = std::nullopt) {
    if (q < 1) throw ParameterError("residue_at needs q >= 1");
    int r = k.depth();
    bool inside = r > 0 && (!iv.m2 || -*iv.m2 < n) && (!iv.m1 || n < -*iv.m1);
    int max_pole = 0;
    if (inside)
        for (int p : k.parts()) max_pole = std::max(max_pole, p);
    int i_min = n == 0 ? -q : 0;
    int d_min = -max_pole;
    int d_max = -i_min;

    std::map<int, ExactValue> z;
    if (inside) {
        int order = max_pole - i_min;
        LaurentSeries ls = laurent_at(k, iv, n, order, colors);
        for (const auto& [d, c] : ls.by_degree())
            if (d <= d_max) z[d] = c;
    } else {
        auto t = taylor_at(k, iv, n, d_max, colors);
        for (int d = 0; d <= d_max; ++d) z[d] = t[static_cast<std::size_t>(d)];
    }
    std::map<int, Rational> p;
    if (n == 0) p[-q] = 1;
    else {
        auto ip = inverse_power_expand(q, n, -d_min);
        for (int i = 0; i <= -d_min; ++i) p[i] = ip[static_cast<std::size_t>(i)];
    }
    // kernel: -2 zeta(2kk) t^{2kk-1}; need 2kk + d + i = 0
    EvenZetaCombination out;
    for (const auto& [d, zc] : z)
        for (const auto& [i, pc] : p) {
            int twice = -(d + i);
            if (twice < 0 || twice % 2) continue;
            out.add_zeta(twice / 2, ExactValue(Rational(-2 * pc)) * zc);
        }
    return out;
}

} // namespace mzvlab
