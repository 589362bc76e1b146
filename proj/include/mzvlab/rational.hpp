#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "errors.hpp"

namespace mzvlab {

using Rational = mpq_class;

inline Rational make_rational(long p, long q = 1) {
    if (q == 0) throw ParameterError("zero denominator");
    Rational r(p, q);
    r.canonicalize();
    return r;
}

inline Rational rational_pow(const Rational& x, unsigned e) {
    Rational out;
    mpz_pow_ui(out.get_num_mpz_t(), x.get_num_mpz_t(), e);
    mpz_pow_ui(out.get_den_mpz_t(), x.get_den_mpz_t(), e);
    out.canonicalize();
    return out;
}

// binom(-a, n) = (-1)^n C(a+n-1, n), for a >= 1 and n >= 0.
inline Rational binom_neg(int a, int n) {
    mpz_class c;
    mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(a + n - 1), static_cast<unsigned long>(n));
    if (n % 2) c = -c;
    return Rational(c);
}

inline int sign_pow(long e) { return (e % 2 == 0) ? 1 : -1; }

inline std::string to_string(const Rational& x) { return x.get_str(); }

// "p", "p/q", "-p/q"; whitespace not allowed inside.
inline Rational parse_rational(std::string_view text) {
    if (text.empty()) throw ParseError("empty rational", 0);
    std::size_t slash = text.find('/');
    auto digits_ok = [](std::string_view s, bool allow_sign) {
        if (s.empty()) return false;
        std::size_t i = 0;
        if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') return false;
        return true;
    };
    std::string_view num = text.substr(0, slash);
    if (!digits_ok(num, true)) throw ParseError("bad numerator in rational '" + std::string(text) + "'", 0);
    std::string ns(num);
    if (ns[0] == '+') ns.erase(0, 1);
    if (slash == std::string_view::npos) return Rational(mpz_class(ns));
    std::string_view den = text.substr(slash + 1);
    if (!digits_ok(den, false)) throw ParseError("bad denominator in rational '" + std::string(text) + "'", slash + 1);
    mpz_class d{std::string(den)};
    if (d == 0) throw ParseError("zero denominator", slash + 1);
    Rational r(mpz_class(ns), d);
    r.canonicalize();
    return r;
}

} // namespace mzvlab
