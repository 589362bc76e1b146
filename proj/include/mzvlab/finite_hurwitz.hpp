#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "core_indices.hpp"
#include "numeric.hpp"
#include "rational.hpp"

namespace mzvlab {

// Summation window (m1, m2) or (m1, m2]; nullopt ends are -inf / +inf.
struct IntervalSpec {
    std::optional<long> m1;
    std::optional<long> m2;
    bool right_closed = false;

    static IntervalSpec open(long a, long b) { return make(a, b, false); }
    static IntervalSpec half_open(long a, long b) { return make(a, b, true); }

    bool finite() const { return m1 && m2; }
    long lo() const { return *m1 + 1; }
    long hi() const { return right_closed ? *m2 : *m2 - 1; }

    IntervalSpec translated(long n) const {
        IntervalSpec out = *this;
        if (out.m1) *out.m1 += n;
        if (out.m2) *out.m2 += n;
        return out;
    }

    std::string str() const {
        std::string a = m1 ? std::to_string(*m1) : "-inf";
        std::string b = m2 ? std::to_string(*m2) : "inf";
        return "(" + a + "," + b + (right_closed ? "]" : ")");
    }

    bool operator==(const IntervalSpec&) const = default;

private:
    static IntervalSpec make(long a, long b, bool closed) {
        if (a >= b) throw RangeError("window needs m1 < m2");
        return IntervalSpec{a, b, closed};
    }
};

inline IntervalSpec parse_interval(std::string_view text) {
    std::string_view t = detail::trim(text);
    if (t.size() < 5 || t.front() != '(') throw ParseError("interval must look like (m1,m2) or (m1,m2]", 0);
    char close = t.back();
    if (close != ')' && close != ']') throw ParseError("interval must end with ')' or ']'", t.size() - 1);
    std::size_t comma = t.find(',');
    if (comma == std::string_view::npos) throw ParseError("interval needs a comma", t.size());
    std::string_view a = detail::trim(t.substr(1, comma - 1));
    std::string_view b = detail::trim(t.substr(comma + 1, t.size() - comma - 2));
    IntervalSpec iv;
    iv.right_closed = close == ']';
    if (a == "-inf") {
        iv.m1 = std::nullopt;
    } else {
        iv.m1 = detail::parse_long(a, 1, "m1");
    }
    if (b == "inf" || b == "+inf") {
        if (iv.right_closed) throw ParseError("an infinite right end cannot be closed", comma + 1);
        iv.m2 = std::nullopt;
    } else {
        iv.m2 = detail::parse_long(b, comma + 1, "m2");
    }
    if (iv.m1 && iv.m2 && *iv.m1 >= *iv.m2) throw RangeError("window needs m1 < m2");
    return iv;
}

struct ShiftParam {
    Rational s;
};

inline ShiftParam parse_shift(std::string_view text) { return {parse_rational(detail::trim(text))}; }

// Exact rational, or an error-bounded complex number for colored sums beyond level 2.
class ExactValue {
public:
    ExactValue() : v_(Rational(0)) {}
    ExactValue(const Rational& q) : v_(q) {}
    ExactValue(long q) : v_(Rational(q)) {}
    ExactValue(const BoundedComplex& z) : v_(z) {}

    bool is_exact() const { return std::holds_alternative<Rational>(v_); }
    const Rational& rational() const {
        if (!is_exact()) throw InternalError("value is not an exact rational");
        return std::get<Rational>(v_);
    }
    BoundedComplex bounded() const {
        if (is_exact()) return BoundedComplex::exact(std::get<Rational>(v_));
        return std::get<BoundedComplex>(v_);
    }
    // Exact zero, or zero within the bound.
    bool is_zero() const { return is_exact() ? std::get<Rational>(v_) == 0 : std::get<BoundedComplex>(v_).contains_zero(); }

    friend ExactValue operator+(const ExactValue& a, const ExactValue& b) {
        if (a.is_exact() && b.is_exact()) return Rational(a.rational() + b.rational());
        return a.bounded() + b.bounded();
    }
    friend ExactValue operator-(const ExactValue& a, const ExactValue& b) {
        if (a.is_exact() && b.is_exact()) return Rational(a.rational() - b.rational());
        return a.bounded() - b.bounded();
    }
    friend ExactValue operator*(const ExactValue& a, const ExactValue& b) {
        if (a.is_exact() && b.is_exact()) return Rational(a.rational() * b.rational());
        if (a.is_exact()) return a.rational() * b.bounded();
        if (b.is_exact()) return b.rational() * a.bounded();
        return a.bounded() * b.bounded();
    }
    ExactValue operator-() const { return is_exact() ? ExactValue(Rational(-rational())) : ExactValue(-bounded()); }
    ExactValue& operator+=(const ExactValue& o) { return *this = *this + o; }
    ExactValue& operator-=(const ExactValue& o) { return *this = *this - o; }
    ExactValue& operator*=(const ExactValue& o) { return *this = *this * o; }

    std::string str() const { return is_exact() ? to_string(rational()) : bounded().str(); }

private:
    std::variant<Rational, BoundedComplex> v_;
};

// (Π mu)^e as a value: exact for +-1, complex otherwise.
inline ExactValue color_power(int level, long exponent) {
    int e = static_cast<int>(((exponent % level) + level) % level);
    if (e == 0) return Rational(1);
    if (2 * e == level) return Rational(-1);
    return BoundedComplex(root_of_unity(e, level), Real(0));
}

namespace detail {

inline void check_colors(const MultiIndex& k, const std::optional<ColorVector>& colors) {
    if (colors && colors->size() != k.depth()) throw RangeError("colors length must match the index depth");
}

inline void check_poles(int r, long lo, long hi, const Rational& s) {
    if (r == 0 || lo > hi) return;
    if (s.get_den() != 1) return;
    long p = -s.get_num().get_si();
    if (p >= lo && p <= hi) throw PoleError("pole hit: n + s = 0 at n = " + std::to_string(p));
}

// Term source: x_i^n / (n + s)^{k_i} for exact signs (levels 1 and 2).
struct RationalTerms {
    const std::vector<int>& parts;
    const std::vector<int>* exps;  // nullptr or level-2 exponents in {0,1}
    Rational s;
    int max_part;
    std::vector<Rational> pw;

    RationalTerms(const std::vector<int>& p, const std::vector<int>* e, const Rational& shift)
        : parts(p), exps(e), s(shift), max_part(0) {
        for (int x : parts) max_part = std::max(max_part, x);
        pw.resize(static_cast<std::size_t>(max_part + 1));
    }
    void begin(long n) {
        Rational base = n + s;
        base = 1 / base;
        pw[0] = 1;
        for (int j = 1; j <= max_part; ++j) pw[static_cast<std::size_t>(j)] = pw[static_cast<std::size_t>(j - 1)] * base;
        odd = (n % 2) != 0;
    }
    Rational term(std::size_t i) const {
        const Rational& t = pw[static_cast<std::size_t>(parts[i])];
        if (exps && odd && (*exps)[i] == 1) return -t;
        return t;
    }
    bool odd = false;
};

// Z[j] = window sum of (k_1..k_j), j = 0..r.
template <class F, class Terms>
std::vector<F> prefix_sums(int r, long lo, long hi, bool star, Terms& terms) {
    std::vector<F> z(static_cast<std::size_t>(r + 1), F(0));
    z[0] = F(1);
    for (long n = lo; n <= hi; ++n) {
        terms.begin(n);
        if (star) {
            for (int i = 1; i <= r; ++i) z[static_cast<std::size_t>(i)] += z[static_cast<std::size_t>(i - 1)] * terms.term(static_cast<std::size_t>(i - 1));
        } else {
            for (int i = r; i >= 1; --i) z[static_cast<std::size_t>(i)] += z[static_cast<std::size_t>(i - 1)] * terms.term(static_cast<std::size_t>(i - 1));
        }
    }
    return z;
}

// S[j] = window sum of the last j letters (k_{r-j+1}..k_r), j = 0..r.
template <class F, class Terms>
std::vector<F> suffix_sums(int r, long lo, long hi, bool star, Terms& terms) {
    std::vector<F> z(static_cast<std::size_t>(r + 1), F(0));
    z[0] = F(1);
    for (long n = hi; n >= lo; --n) {
        terms.begin(n);
        if (star) {
            for (int i = 1; i <= r; ++i) z[static_cast<std::size_t>(i)] += z[static_cast<std::size_t>(i - 1)] * terms.term(static_cast<std::size_t>(r - i));
        } else {
            for (int i = r; i >= 1; --i) z[static_cast<std::size_t>(i)] += z[static_cast<std::size_t>(i - 1)] * terms.term(static_cast<std::size_t>(r - i));
        }
    }
    return z;
}

// Complex terms for levels >= 3, together with an absolute-value envelope used for the error bound.
struct ComplexTerms {
    const std::vector<int>& parts;
    const ColorVector& colors;
    Rational s;
    std::vector<Complex> roots;
    std::vector<Complex> cur;

    ComplexTerms(const std::vector<int>& p, const ColorVector& c, const Rational& shift) : parts(p), colors(c), s(shift) {
        for (int e = 0; e < c.level(); ++e) roots.push_back(root_of_unity(e, c.level()));
        cur.resize(p.size());
    }
    void begin(long n) {
        Real base = 1 / to_real(Rational(n + s));
        for (std::size_t i = 0; i < parts.size(); ++i) {
            Real t = pow(base, parts[i]);
            long e = (static_cast<long>(colors[i]) * (n % colors.level())) % colors.level();
            if (e < 0) e += colors.level();
            cur[i] = roots[static_cast<std::size_t>(e)] * Complex(t);
        }
    }
    Complex term(std::size_t i) const { return cur[i]; }
};

struct AbsTerms {
    const std::vector<int>& parts;
    Rational s;
    std::vector<Real> cur;
    AbsTerms(const std::vector<int>& p, const Rational& shift) : parts(p), s(shift) { cur.resize(p.size()); }
    void begin(long n) {
        Real base = abs(1 / to_real(Rational(n + s)));
        for (std::size_t i = 0; i < parts.size(); ++i) cur[i] = pow(base, parts[i]);
    }
    Real term(std::size_t i) const { return cur[i]; }
};

inline bool exact_level(const std::optional<ColorVector>& colors) { return !colors || colors->level() <= 2; }

inline const std::vector<int>* sign_exps(const std::optional<ColorVector>& colors) {
    if (!colors || colors->level() == 1) return nullptr;
    return &colors->exps();
}

} // namespace detail

// Window sums of every prefix (k_1..k_j), j = 0..r, exactly (uncolored or level <= 2).
inline std::vector<Rational> finite_prefix_sums(const MultiIndex& k, long lo, long hi, const Rational& s, bool star = false,
                                                const std::optional<ColorVector>& colors = std::nullopt) {
    detail::check_colors(k, colors);
    if (!detail::exact_level(colors)) throw UnsupportedError("exact prefix sums need level <= 2");
    detail::check_poles(k.depth(), lo, hi, s);
    detail::RationalTerms terms(k.parts(), detail::sign_exps(colors), s);
    return detail::prefix_sums<Rational>(k.depth(), lo, hi, star, terms);
}

inline std::vector<Rational> finite_suffix_sums(const MultiIndex& k, long lo, long hi, const Rational& s, bool star = false,
                                                const std::optional<ColorVector>& colors = std::nullopt) {
    detail::check_colors(k, colors);
    if (!detail::exact_level(colors)) throw UnsupportedError("exact suffix sums need level <= 2");
    detail::check_poles(k.depth(), lo, hi, s);
    detail::RationalTerms terms(k.parts(), detail::sign_exps(colors), s);
    return detail::suffix_sums<Rational>(k.depth(), lo, hi, star, terms);
}

// Sum over the lattice points lo..hi (inclusive), any level.
inline ExactValue finite_sum(const MultiIndex& k, long lo, long hi, const Rational& s, bool star = false,
                             const std::optional<ColorVector>& colors = std::nullopt) {
    detail::check_colors(k, colors);
    int r = k.depth();
    if (r == 0) return Rational(1);
    if (lo > hi) return Rational(0);
    detail::check_poles(r, lo, hi, s);
    if (detail::exact_level(colors)) {
        detail::RationalTerms terms(k.parts(), detail::sign_exps(colors), s);
        return detail::prefix_sums<Rational>(r, lo, hi, star, terms).back();
    }
    detail::ComplexTerms terms(k.parts(), *colors, s);
    Complex v = detail::prefix_sums<Complex>(r, lo, hi, star, terms).back();
    detail::AbsTerms envelope(k.parts(), s);
    Real a = detail::prefix_sums<Real>(r, lo, hi, star, envelope).back();
    Real ops = Real(4 * (r + 1)) * Real(hi - lo + 1);
    return BoundedComplex(v, a * ops * unit_roundoff());
}

// The nested sum over m1 < n_1 < ... < n_r < m2 (or <= m2), with <= between the n_i when star.
inline ExactValue eval_finite(const MultiIndex& k, const IntervalSpec& iv, const ShiftParam& s, bool star = false,
                              const std::optional<ColorVector>& colors = std::nullopt) {
    if (!iv.finite()) throw UnsupportedError("eval_finite needs a finite window; infinite windows go through mzv_numeric");
    return finite_sum(k, iv.lo(), iv.hi(), s.s, star, colors);
}

inline Rational eval_finite_rational(const MultiIndex& k, const IntervalSpec& iv, const Rational& s, bool star = false) {
    return eval_finite(k, iv, ShiftParam{s}, star).rational();
}

inline ExactValue check_translation(const MultiIndex& k, const IntervalSpec& iv, const ShiftParam& s, long n,
                                    const std::optional<ColorVector>& colors = std::nullopt) {
    ExactValue lhs = eval_finite(k, iv, s, false, colors);
    ExactValue rhs = eval_finite(k, iv.translated(n), ShiftParam{s.s - n}, false, colors);
    if (colors) rhs = color_power(colors->level(), -n * static_cast<long>(colors->product())) * rhs;
    return lhs - rhs;
}

struct DecompositionResidual {
    ExactValue closed_split;  // sum of (m1,n] x (n,m2) products
    ExactValue pinned_split;  // (m1,n) x (n,m2) products plus the pinned n_j = n terms
    bool is_zero() const { return closed_split.is_zero() && pinned_split.is_zero(); }
};

inline DecompositionResidual check_decomposition(const MultiIndex& k, const IntervalSpec& iv, const ShiftParam& s, long n,
                                                 const std::optional<ColorVector>& colors = std::nullopt) {
    if (!iv.finite() || iv.right_closed) throw PreconditionError("decomposition needs a finite open window");
    if (!(*iv.m1 < n && n < *iv.m2)) throw PreconditionError("decomposition needs m1 < n < m2");
    detail::check_colors(k, colors);
    int r = k.depth();
    ExactValue whole = eval_finite(k, iv, s, false, colors);
    auto sub = [&](const MultiIndex& idx, const std::optional<ColorVector>& c, long lo, long hi) { return finite_sum(idx, lo, hi, s.s, false, c); };
    auto head_c = [&](int j) { return colors ? std::optional<ColorVector>(colors->head(j)) : std::nullopt; };
    auto tail_c = [&](int j) { return colors ? std::optional<ColorVector>(colors->tail(j)) : std::nullopt; };
    ExactValue closed(Rational(0)), pinned(Rational(0));
    for (int j = 0; j <= r; ++j) {
        ExactValue right = sub(tail(k, j), tail_c(j), n + 1, *iv.m2 - 1);
        closed += sub(head(k, j), head_c(j), *iv.m1 + 1, n) * right;
        pinned += sub(head(k, j), head_c(j), *iv.m1 + 1, n - 1) * right;
    }
    for (int j = 1; j <= r; ++j) {
        detail::check_poles(1, n, n, s.s);
        Rational base = 1 / Rational(n + s.s);
        ExactValue pin = Rational(rational_pow(base, static_cast<unsigned>(k.at(j))));
        if (colors) pin = color_power(colors->level(), n * static_cast<long>((*colors)[static_cast<std::size_t>(j - 1)])) * pin;
        pinned += pin * sub(head(k, j - 1), head_c(j - 1), *iv.m1 + 1, n - 1) * sub(tail(k, j), tail_c(j), n + 1, *iv.m2 - 1);
    }
    return {whole - closed, whole - pinned};
}

inline ExactValue check_reflection(const MultiIndex& k, const IntervalSpec& iv, const ShiftParam& s,
                                   const std::optional<ColorVector>& colors = std::nullopt) {
    if (!iv.finite() || iv.right_closed) throw PreconditionError("reflection needs a finite open window");
    ExactValue lhs = eval_finite(k, iv, s, false, colors);
    IntervalSpec mirrored = IntervalSpec::open(-*iv.m2, -*iv.m1);
    std::optional<ColorVector> rc = colors ? std::optional<ColorVector>(colors->reversed().inverse()) : std::nullopt;
    ExactValue rhs = eval_finite(k.reversed(), mirrored, ShiftParam{-s.s}, false, rc);
    if (k.weight() % 2) rhs = -rhs;
    return lhs - rhs;
}

inline ExactValue check_antipode(const MultiIndex& k, const IntervalSpec& iv, const ShiftParam& s,
                                 const std::optional<ColorVector>& colors = std::nullopt) {
    detail::check_colors(k, colors);
    ExactValue total(Rational(0));
    for (int j = 0; j <= k.depth(); ++j) {
        std::optional<ColorVector> hc = colors ? std::optional<ColorVector>(colors->head(j).reversed()) : std::nullopt;
        std::optional<ColorVector> tc = colors ? std::optional<ColorVector>(colors->tail(j)) : std::nullopt;
        ExactValue term = eval_finite(head(k, j).reversed(), iv, s, true, hc) * eval_finite(tail(k, j), iv, s, false, tc);
        total += (j % 2) ? -term : term;
    }
    return total;
}

// zeta_(m1,m2)(k;s) - sum_j (-1)^j zeta*_(0,m1](k_j..k_1;s) zeta_(0,m2)(k_{j+1}..k_r;s), for 0 < m1 < m2.
inline ExactValue check_truncation(const MultiIndex& k, long m2, long m1, const ShiftParam& s,
                                   const std::optional<ColorVector>& colors = std::nullopt) {
    if (!(0 < m1 && m1 < m2)) throw PreconditionError("truncation needs 0 < m1 < m2");
    detail::check_colors(k, colors);
    ExactValue total = eval_finite(k, IntervalSpec::open(m1, m2), s, false, colors);
    for (int j = 0; j <= k.depth(); ++j) {
        std::optional<ColorVector> hc = colors ? std::optional<ColorVector>(colors->head(j).reversed()) : std::nullopt;
        std::optional<ColorVector> tc = colors ? std::optional<ColorVector>(colors->tail(j)) : std::nullopt;
        ExactValue term = eval_finite(head(k, j).reversed(), IntervalSpec::half_open(0, m1), s, true, hc) *
                          eval_finite(tail(k, j), IntervalSpec::open(0, m2), s, false, tc);
        total -= (j % 2) ? -term : term;
    }
    return total;
}

inline void require_one_sided(const IntervalSpec& iv) {
    if (!iv.finite()) throw UnsupportedError("expansion coefficients need a finite window");
    if (!(*iv.m2 <= 0 || *iv.m1 >= 0)) throw PreconditionError("window straddles 0: expansion at s = 0 needs m2 <= 0 or m1 >= 0");
}

// Coefficients of s^m, m = 0..max_order: sum over |n| = m of prod binom(-k_l, n_l) * zeta_(m1,m2)(k + n).
inline std::vector<ExactValue> expansion_coeffs(const MultiIndex& k, const IntervalSpec& iv, int max_order,
                                                const std::optional<ColorVector>& colors = std::nullopt) {
    require_one_sided(iv);
    detail::check_colors(k, colors);
    std::vector<ExactValue> out;
    for (int m = 0; m <= max_order; ++m) {
        ExactValue c(Rational(0));
        for_each_composition(m, k.depth(), [&](const std::vector<int>& n) {
            Rational w = 1;
            for (std::size_t l = 0; l < n.size(); ++l) w *= binom_neg(k[l], n[l]);
            c += ExactValue(w) * eval_finite(k.shifted(n), iv, ShiftParam{0}, false, colors);
        });
        out.push_back(c);
    }
    return out;
}

// Taylor coefficients at s = 0 by multiplying truncated power series of each lattice term; independent of the
// closed-form coefficient formula. Exact levels only.
inline std::vector<Rational> taylor_by_series_product(const MultiIndex& k, const IntervalSpec& iv, int max_order,
                                                      const std::optional<ColorVector>& colors = std::nullopt) {
    require_one_sided(iv);
    detail::check_colors(k, colors);
    if (!detail::exact_level(colors)) throw UnsupportedError("series product check needs level <= 2");
    int r = k.depth();
    std::size_t len = static_cast<std::size_t>(max_order + 1);
    std::vector<std::vector<Rational>> z(static_cast<std::size_t>(r + 1), std::vector<Rational>(len, Rational(0)));
    z[0][0] = 1;
    for (long n = iv.lo(); n <= iv.hi(); ++n) {
        for (int i = r; i >= 1; --i) {
            int ki = k.at(i);
            // x^n (n + s)^{-k} = x^n sum_j binom(-k, j) n^{-k-j} s^j
            std::vector<Rational> t(len);
            Rational inv = Rational(1) / Rational(n);
            Rational p = rational_pow(inv, static_cast<unsigned>(ki));
            for (std::size_t j = 0; j < len; ++j) {
                t[j] = binom_neg(ki, static_cast<int>(j)) * p;
                p *= inv;
            }
            if (colors && (*colors)[static_cast<std::size_t>(i - 1)] == 1 && colors->level() == 2 && (n % 2))
                for (auto& x : t) x = -x;
            auto& dst = z[static_cast<std::size_t>(i)];
            const auto& src = z[static_cast<std::size_t>(i - 1)];
            for (std::size_t a = 0; a < len; ++a) {
                if (src[a] == 0) continue;
                for (std::size_t b = 0; a + b < len; ++b) dst[a + b] += src[a] * t[b];
            }
        }
    }
    return z[static_cast<std::size_t>(r)];
}

inline std::vector<ExactValue> check_expansion(const MultiIndex& k, const IntervalSpec& iv, int max_order,
                                               const std::optional<ColorVector>& colors = std::nullopt) {
    auto a = expansion_coeffs(k, iv, max_order, colors);
    auto b = taylor_by_series_product(k, iv, max_order, colors);
    std::vector<ExactValue> out;
    for (std::size_t m = 0; m < a.size(); ++m) out.push_back(a[m] - ExactValue(b[m]));
    return out;
}

} // namespace mzvlab
