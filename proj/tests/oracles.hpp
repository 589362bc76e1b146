#pragma once

// Independent reference values for the test suites. Nothing here calls the library's evaluators.

#include <functional>
#include <string>
#include <vector>

#include <mzvlab/numeric.hpp>
#include <mzvlab/rational.hpp>

namespace oracle {

using mzvlab::Rational;
using mzvlab::Real;

// Literal nested loops over m1 < n_1 < ... < n_r < m2 (<= between the n_i when star, n_r <= hi inclusive).
// signs[i] = 1 attaches (-1)^{n_i}.
inline Rational enumerate(const std::vector<int>& k, long lo, long hi, const Rational& s, bool star = false, const std::vector<int>& signs = {}) {
    Rational total = 0;
    std::function<void(std::size_t, long, Rational)> rec = [&](std::size_t i, long from, Rational acc) {
        if (i == k.size()) {
            total += acc;
            return;
        }
        for (long n = from; n <= hi; ++n) {
            Rational base = n + s;
            Rational term = 1;
            for (int e = 0; e < k[i]; ++e) term /= base;
            if (!signs.empty() && signs[i] && (n % 2 != 0)) term = -term;
            rec(i + 1, star ? n : n + 1, acc * term);
        }
    };
    rec(0, lo, Rational(1));
    return total;
}

// 45-digit constants from an external arbitrary-precision package.
inline Real zeta2() { return Real("1.6449340668482264364724151666460251892189499"); }
inline Real zeta3() { return Real("1.20205690315959428539973816151144999076498629"); }
inline Real zeta4() { return Real("1.08232323371113819151600369654116790277475095"); }
inline Real zeta5() { return Real("1.03692775514336992633136548645703416805708092"); }
inline Real zeta_1_3() { return Real("0.270580808427784547879000924135291975693687738"); }  // pi^4/360
inline Real ln2() { return Real("0.693147180559945309417232121458176568075500134"); }
inline Real pi2_over_12() { return Real("0.822467033424113218236207583323012594609474951"); }
inline Real li3_minus1() { return Real("-0.901542677369695714049803621133587493073739719"); }

inline Real harmonic(long M) {
    Real h = 0;
    for (long n = 1; n < M; ++n) h += Real(1) / n;
    return h;
}

} // namespace oracle
