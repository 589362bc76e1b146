#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "core_indices.hpp"
#include "finite_hurwitz.hpp"
#include "numeric.hpp"
#include "zeta_expr.hpp"

namespace mzvlab {

// Smallest eps a caller may request; the engine itself works to about 1e-44.
inline constexpr double kMinEps = 1e-15;

namespace detail {

inline void check_eps(double eps) {
    if (!(eps >= kMinEps)) throw PrecisionError("eps below 1e-15 is not reachable at the configured precision");
}

// Letter of an iterated integral at t = 1/2 after rescaling: zero, 2*xi, or 2*(1 - xi) with xi = exp(2 pi i e / N).
struct HalfLetter {
    enum Kind : int { Zero = 0, Twice = 1, TwiceOneMinus = 2 } kind;
    int e;
    auto operator<=>(const HalfLetter&) const = default;
};

struct HalfKey {
    int level;
    std::vector<HalfLetter> letters;
    auto operator<=>(const HalfKey&) const = default;
};

inline Complex half_letter_value(const HalfLetter& h, int level) {
    switch (h.kind) {
    case HalfLetter::Zero: return Complex(0);
    case HalfLetter::Twice: return Complex(2) * root_of_unity(h.e, level);
    default: return Complex(2) * (Complex(1) - root_of_unity(h.e, level));
    }
}

// log of C(n, k) for the tail estimate.
inline double log_binom(double n, double k) { return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1); }

// G(b_1, ..., b_w; 1) by its power series; every nonzero letter has |b| > 1 and b_w != 0.
// Coefficient of t^j is bounded by C(j-1, d-1) rho^j (d nonzero letters, rho = max 1/|b|), which gives the tail bound.
inline BoundedComplex g_series(const std::vector<Complex>& b) {
    std::size_t w = b.size();
    if (w == 0) return BoundedComplex(Complex(1), Real(0));
    if (b.back().is_zero()) throw InternalError("iterated integral with trailing zero letter");
    int d = 0;
    double rho = 0;
    for (const auto& x : b)
        if (!x.is_zero()) {
            ++d;
            rho = std::max(rho, 1.0 / static_cast<double>(x.abs()));
        }
    if (rho >= 0.95) throw UnsupportedError("colored level too large for the series engine");
    const double log_target = std::log(1e-46);
    std::size_t n_terms = 8;
    for (;; ++n_terms) {
        double n = static_cast<double>(n_terms);
        double ratio = rho * (n + 1) / (n + 2 - d);
        if (ratio >= 1 || n + 2 - d <= 0) continue;
        double lt = log_binom(n, d - 1) + (n + 1) * std::log(rho) - std::log(1 - ratio);
        if (lt < log_target) break;
        if (n_terms > 20000) throw PrecisionError("series engine cannot reach the target bound");
    }
    double n = static_cast<double>(n_terms);
    double ratio = rho * (n + 1) / (n + 2 - d);
    Real tail = Real(std::exp(log_binom(n, d - 1) + (n + 1) * std::log(rho) - std::log(1 - ratio)) * 2);

    std::size_t N = n_terms;
    std::vector<Complex> c(N + 1), e(N + 1), nxt(N + 1);
    Complex inv = Complex(1) / b[w - 1];
    Complex pw = inv;
    for (std::size_t j = 1; j <= N; ++j) {
        c[j] = -(pw * Complex(Real(1) / Real(j)));
        pw *= inv;
    }
    for (std::size_t ii = w - 1; ii-- > 0;) {
        const Complex& bi = b[ii];
        nxt[0] = Complex(0);
        if (bi.is_zero()) {
            for (std::size_t j = 1; j <= N; ++j) nxt[j] = c[j] * Complex(Real(1) / Real(j));
        } else {
            Complex binv = Complex(1) / bi;
            Complex acc(0);
            for (std::size_t j = 0; j < N; ++j) {
                acc = acc * binv + c[j];
                nxt[j + 1] = -(acc * binv) * Complex(Real(1) / Real(j + 1));
            }
        }
        std::swap(c, nxt);
    }
    Complex sum(0);
    for (std::size_t j = 1; j <= N; ++j) sum += c[j];
    Real rounding = Real(static_cast<double>((N + 1) * (w + 1) * 16)) * unit_roundoff();
    return BoundedComplex(sum, tail + rounding);
}

class ValueCache {
public:
    static ValueCache& instance() {
        static ValueCache c;
        return c;
    }

    template <class Key, class Fn>
    BoundedComplex get(std::map<Key, BoundedComplex>& table, const Key& key, Fn compute) {
        {
            std::shared_lock lock(mutex_);
            auto it = table.find(key);
            if (it != table.end()) return it->second;
        }
        BoundedComplex v = compute();
        std::unique_lock lock(mutex_);
        if (table.size() < kMaxEntries) table.emplace(key, v);
        return v;
    }

    std::map<HalfKey, BoundedComplex> halves;
    std::map<ZetaSymbol, BoundedComplex> values;

private:
    static constexpr std::size_t kMaxEntries = 1u << 18;
    std::shared_mutex mutex_;
};

inline BoundedComplex half_value(const HalfKey& key) {
    auto& cache = ValueCache::instance();
    return cache.get(cache.halves, key, [&] {
        std::vector<Complex> b;
        for (const auto& h : key.letters) b.push_back(half_letter_value(h, key.level));
        return g_series(b);
    });
}

// Li(k; mu) = (-1)^r G(0^{k_r-1}, xi_r, ..., 0^{k_1-1}, xi_1; 1) with xi_i = (mu_i ... mu_r)^{-1},
// evaluated by splitting the path at 1/2 (Hoelder convolution).
inline BoundedComplex li_by_convolution(const ZetaSymbol& s) {
    int r = s.depth(), level = s.level;
    std::vector<int> top;  // -1 marks a zero letter, otherwise the exponent of xi
    for (int i = r - 1; i >= 0; --i) {
        for (int z = 1; z < s.parts[static_cast<std::size_t>(i)]; ++z) top.push_back(-1);
        long acc = 0;
        for (int l = i; l < r; ++l) acc += s.exps[static_cast<std::size_t>(l)];
        top.push_back(static_cast<int>(((-acc) % level + level) % level));
    }
    std::size_t w = top.size();
    BoundedComplex total(Complex(0), Real(0));
    for (std::size_t j = 0; j <= w; ++j) {
        HalfKey first{level, {}}, second{level, {}};
        for (std::size_t i = j; i-- > 0;) {
            // 2(1 - a): zero when a = 1
            if (top[i] == 0) first.letters.push_back({HalfLetter::Zero, 0});
            else if (top[i] < 0) first.letters.push_back({HalfLetter::Twice, 0});
            else first.letters.push_back({HalfLetter::TwiceOneMinus, top[i]});
        }
        for (std::size_t i = j; i < w; ++i) {
            if (top[i] < 0) second.letters.push_back({HalfLetter::Zero, 0});
            else second.letters.push_back({HalfLetter::Twice, top[i]});
        }
        BoundedComplex term = half_value(first) * half_value(second);
        if (j % 2) total -= term;
        else total += term;
    }
    if (r % 2) total = -total;
    return total;
}

} // namespace detail

inline BoundedComplex symbol_value(const ZetaSymbol& s) {
    auto& cache = detail::ValueCache::instance();
    return cache.get(cache.values, s, [&] {
        BoundedComplex v = detail::li_by_convolution(s);
        if (s.level <= 2) v = BoundedComplex(Complex(v.value.re), v.bound + abs(v.value.im));
        return v;
    });
}

inline BoundedComplex colored_li(const MultiIndex& k, const ColorVector& colors, double eps = 1e-12) {
    detail::check_eps(eps);
    if (colors.size() != k.depth()) throw RangeError("colors length must match the index depth");
    if (k.empty()) return BoundedComplex(Complex(1), Real(0));
    if (!convergent(k, colors)) throw DivergenceError("(k_r, mu_r) = (1, 1): use a regularized value");
    BoundedComplex v = symbol_value(ZetaSymbol(k, colors));
    if (v.bound > Real(eps)) throw PrecisionError("certified bound exceeds eps");
    return v;
}

inline BoundedReal zeta(const MultiIndex& k, double eps = 1e-12) {
    detail::check_eps(eps);
    if (!k.admissible()) throw AdmissibilityError("zeta(" + k.str() + ") needs k_r > 1");
    return colored_li(k, ColorVector::trivial(1, k.depth()), eps).real_part();
}

namespace detail {

inline BoundedComplex eval_plain(const ZetaExpr& e) {
    BoundedComplex total(Complex(0), Real(0));
    for (const auto& [key, c] : e.terms()) {
        if (key.first != 0) throw InternalError("expected a T-free expression");
        BoundedComplex prod = BoundedComplex::exact(c);
        for (const auto& s : key.second) prod = prod * symbol_value(s);
        total += prod;
    }
    return total;
}

} // namespace detail

inline BoundedReal zeta_star(const MultiIndex& k, double eps = 1e-12) {
    detail::check_eps(eps);
    if (!k.admissible()) throw AdmissibilityError("zeta*(" + k.str() + ") needs k_r > 1");
    BoundedReal v = detail::eval_plain(star_expr(k)).real_part();
    if (v.bound > Real(eps)) throw PrecisionError("certified bound exceeds eps");
    return v;
}

inline BoundedComplex colored_li_star(const MultiIndex& k, const ColorVector& colors) {
    if (!convergent(k, colors)) throw DivergenceError("star value with (k_r, mu_r) = (1, 1)");
    return detail::eval_plain(star_expr(k, colors));
}

// Bernoulli numbers B_0..B_n (B_1 = -1/2).
inline Rational bernoulli(int n) {
    static std::mutex m;
    static std::vector<Rational> table{Rational(1)};
    std::lock_guard lock(m);
    while (static_cast<int>(table.size()) <= n) {
        int j = static_cast<int>(table.size());
        Rational s = 0;
        mpz_class c = 1;  // C(j+1, i)
        for (int i = 0; i < j; ++i) {
            s += Rational(c) * table[static_cast<std::size_t>(i)];
            c = c * (j + 1 - i) / (i + 1);
        }
        table.push_back(-s / Rational(j + 1));
    }
    return table[static_cast<std::size_t>(n)];
}

// zeta(2k) = (-1)^{k+1} B_{2k} (2 pi)^{2k} / (2 (2k)!) as a rational multiple of pi^{2k}; zeta(0) = -1/2.
inline Rational even_zeta_pi_coefficient(int k) {
    if (k == 0) return Rational(-1, 2);
    mpz_class fact = 1;
    for (int i = 2; i <= 2 * k; ++i) fact *= i;
    mpz_class two = 1;
    two <<= static_cast<unsigned>(2 * k);
    Rational c = bernoulli(2 * k) * Rational(two) / Rational(2 * fact);
    if (k % 2 == 0) c = -c;
    return c;
}

inline BoundedReal even_zeta(int k) {
    if (k < 0) throw ParameterError("even_zeta needs k >= 0");
    if (k == 0) return BoundedReal(Real(-0.5), Real(0));
    Real v = to_real(even_zeta_pi_coefficient(k)) * pow(pi_real(), 2 * k);
    return BoundedReal(v, v * unit_roundoff() * (2 * k + 4));
}

// Alternating zeta: (1 - 2^{1-s}) zeta(s), ln 2 at s = 1, 1/2 at s = 0.
inline BoundedReal alt_zeta(int s, double eps = 1e-12) {
    detail::check_eps(eps);
    if (s < 0) throw ParameterError("alt_zeta needs s >= 0");
    if (s == 0) return BoundedReal(Real(0.5), Real(0));
    if (s == 1) return BoundedReal(log(Real(2)), unit_roundoff());
    BoundedReal z = (s % 2 == 0) ? even_zeta(s / 2) : zeta(MultiIndex{s}, eps);
    Real f = 1 - pow(Real(2), 1 - s);
    return BoundedReal(f, unit_roundoff()) * z;
}

// Polynomial in T with error-bounded coefficients; exact[i] is set when coefficient i is a plain rational.
struct RegPoly {
    std::vector<BoundedComplex> coeffs;
    std::vector<std::optional<Rational>> exact;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }

    BoundedComplex coefficient(int i) const {
        if (i < 0 || i >= static_cast<int>(coeffs.size())) return BoundedComplex(Complex(0), Real(0));
        return coeffs[static_cast<std::size_t>(i)];
    }

    BoundedComplex evaluate(const BoundedComplex& t) const {
        BoundedComplex acc(Complex(0), Real(0));
        for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * t + coeffs[i];
        return acc;
    }

    // Largest |coefficient| and the largest bound.
    Real max_magnitude() const {
        Real m = 0;
        for (const auto& c : coeffs) if (c.magnitude() > m) m = c.magnitude();
        return m;
    }
    Real max_bound() const {
        Real m = 0;
        for (const auto& c : coeffs) if (c.bound > m) m = c.bound;
        return m;
    }
    bool vanishes() const {
        for (const auto& c : coeffs)
            if (!c.contains_zero()) return false;
        return true;
    }

    friend RegPoly operator+(const RegPoly& a, const RegPoly& b) {
        RegPoly out;
        std::size_t n = std::max(a.coeffs.size(), b.coeffs.size());
        for (std::size_t i = 0; i < n; ++i) {
            out.coeffs.push_back(a.coefficient(static_cast<int>(i)) + b.coefficient(static_cast<int>(i)));
            std::optional<Rational> ea = i < a.exact.size() ? a.exact[i] : std::optional<Rational>(Rational(0));
            std::optional<Rational> eb = i < b.exact.size() ? b.exact[i] : std::optional<Rational>(Rational(0));
            out.exact.push_back(ea && eb ? std::optional<Rational>(*ea + *eb) : std::nullopt);
        }
        return out;
    }

    std::string str(int digits = 22) const {
        std::string s;
        for (std::size_t i = coeffs.size(); i-- > 0;) {
            std::string body;
            bool negative = false;
            if (exact[i]) {
                if (*exact[i] == 0) continue;
                negative = *exact[i] < 0;
                Rational a = abs(*exact[i]);
                body = (i > 0 && a == 1) ? "" : (a.get_den() == 1 || i == 0 ? to_string(a) : "(" + to_string(a) + ")");
            } else {
                BoundedComplex c = coeffs[i];
                negative = c.value.im == 0 && c.value.re < 0;
                if (negative) c = -c;
                body = c.str(digits);
            }
            std::string t = i == 0 ? "" : (i == 1 ? "T" : "T^" + std::to_string(i));
            std::string term = body.empty() ? t : (t.empty() ? body : body + "·" + t);
            if (s.empty()) s = negative ? "-" + term : term;
            else s += (negative ? " - " : " + ") + term;
        }
        return s.empty() ? "0" : s;
    }
};

inline RegPoly evaluate(const ZetaExpr& e) {
    RegPoly out;
    int d = e.degree();
    out.coeffs.assign(static_cast<std::size_t>(d + 1), BoundedComplex(Complex(0), Real(0)));
    out.exact.assign(static_cast<std::size_t>(d + 1), std::optional<Rational>(Rational(0)));
    for (const auto& [key, c] : e.terms()) {
        std::size_t p = static_cast<std::size_t>(key.first);
        BoundedComplex prod = BoundedComplex::exact(c);
        for (const auto& s : key.second) prod = prod * symbol_value(s);
        out.coeffs[p] += prod;
        if (!key.second.empty()) out.exact[p] = std::nullopt;
        else if (out.exact[p]) out.exact[p] = *out.exact[p] + c;
    }
    return out;
}

inline RegPoly reg_stuffle(const MultiIndex& k, double eps = 1e-12) {
    detail::check_eps(eps);
    return evaluate(reg_expr(k, RegKind::Stuffle));
}
inline RegPoly reg_shuffle(const MultiIndex& k, double eps = 1e-12) {
    detail::check_eps(eps);
    return evaluate(reg_expr(k, RegKind::Shuffle));
}
inline RegPoly reg_stuffle(const MultiIndex& k, const ColorVector& c, double eps = 1e-12) {
    detail::check_eps(eps);
    return evaluate(reg_expr(k, c, RegKind::Stuffle));
}
inline RegPoly reg_shuffle(const MultiIndex& k, const ColorVector& c, double eps = 1e-12) {
    detail::check_eps(eps);
    return evaluate(reg_expr(k, c, RegKind::Shuffle));
}

// zeta_(0,M)(k), exact.
inline Rational truncated_zeta(const MultiIndex& k, long M) {
    if (M < 1) throw ParameterError("truncated_zeta needs M >= 1");
    return finite_sum(k, 1, M - 1, Rational(0)).rational();
}

// Same sum in working precision; prefix[j] = zeta_(0,M)(k_1..k_j).
inline std::vector<Real> truncated_prefix_real(const MultiIndex& k, long M, bool star = false) {
    int r = k.depth();
    std::vector<Real> z(static_cast<std::size_t>(r + 1), Real(0));
    z[0] = 1;
    std::vector<Real> t(static_cast<std::size_t>(r));
    for (long n = 1; n < M; ++n) {
        Real inv = Real(1) / Real(n);
        for (int i = 0; i < r; ++i) t[static_cast<std::size_t>(i)] = pow(inv, k[static_cast<std::size_t>(i)]);
        if (star)
            for (int i = 1; i <= r; ++i) z[static_cast<std::size_t>(i)] += z[static_cast<std::size_t>(i - 1)] * t[static_cast<std::size_t>(i - 1)];
        else
            for (int i = r; i >= 1; --i) z[static_cast<std::size_t>(i)] += z[static_cast<std::size_t>(i - 1)] * t[static_cast<std::size_t>(i - 1)];
    }
    return z;
}

inline Real truncated_zeta_real(const MultiIndex& k, long M) { return truncated_prefix_real(k, M).back(); }

} // namespace mzvlab
