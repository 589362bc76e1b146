#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <ios>
#include <string>

#include "rational.hpp"

namespace mzvlab {

// 50 significant decimal digits. All bounds are absolute errors in this type.
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<50>, boost::multiprecision::et_off>;

inline constexpr int kWorkingDigits = 50;

// Relative size of one rounding step, padded.
inline const Real& unit_roundoff() {
    static const Real u = Real("1e-48");
    return u;
}

inline Real to_real(const Rational& q) {
    Real r;
    mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
    return r;
}

inline const Real& pi_real() {
    static const Real p = [] {
        Real x;
        mpfr_const_pi(x.backend().data(), MPFR_RNDN);
        return x;
    }();
    return p;
}

inline std::string format_real(const Real& x, int digits = 22) {
    if (x == 0) return "0";
    return x.str(digits, std::ios_base::fmtflags(0));
}

inline std::string format_bound(const Real& b) {
    if (b == 0) return "0";
    return b.str(2, std::ios_base::scientific);
}

struct Complex {
    Real re;
    Real im;

    Complex() = default;
    Complex(const Real& r) : re(r), im(0) {}
    Complex(const Real& r, const Real& i) : re(r), im(i) {}
    explicit Complex(int r) : re(r), im(0) {}
    static Complex from_rational(const Rational& r) { return Complex(to_real(r)); }

    Complex& operator+=(const Complex& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    Complex& operator-=(const Complex& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    Complex& operator*=(const Complex& o) {
        Real r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = r;
        return *this;
    }
    Complex& operator/=(const Complex& o) {
        Real d = o.re * o.re + o.im * o.im;
        Real r = (re * o.re + im * o.im) / d;
        im = (im * o.re - re * o.im) / d;
        re = r;
        return *this;
    }
    friend Complex operator+(Complex a, const Complex& b) { return a += b; }
    friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
    friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
    friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
    Complex operator-() const { return {-re, -im}; }

    bool is_zero() const { return re == 0 && im == 0; }
    Real abs() const { return sqrt(re * re + im * im); }
    Complex conj() const { return {re, -im}; }
};

// exp(2 pi i a / N); exact for N in {1, 2, 4} and the real/imaginary axes.
inline Complex root_of_unity(int a, int level) {
    int e = ((a % level) + level) % level;
    if (e == 0) return Complex(Real(1));
    if (2 * e == level) return Complex(Real(-1));
    if (4 * e == level) return Complex(Real(0), Real(1));
    if (4 * e == 3 * level) return Complex(Real(0), Real(-1));
    Real theta = 2 * pi_real() * e / level;
    return Complex(cos(theta), sin(theta));
}

struct BoundedReal {
    Real value;
    Real bound;

    BoundedReal() = default;
    BoundedReal(const Real& v, const Real& b = Real(0)) : value(v), bound(b) {}
    static BoundedReal exact(const Rational& q) {
        Real v = to_real(q);
        return {v, abs(v) * unit_roundoff()};
    }

    friend BoundedReal operator+(const BoundedReal& a, const BoundedReal& b) {
        Real v = a.value + b.value;
        return {v, a.bound + b.bound + abs(v) * unit_roundoff()};
    }
    friend BoundedReal operator-(const BoundedReal& a, const BoundedReal& b) {
        Real v = a.value - b.value;
        return {v, a.bound + b.bound + abs(v) * unit_roundoff()};
    }
    friend BoundedReal operator*(const BoundedReal& a, const BoundedReal& b) {
        Real v = a.value * b.value;
        return {v, abs(a.value) * b.bound + abs(b.value) * a.bound + a.bound * b.bound + abs(v) * unit_roundoff()};
    }
    BoundedReal operator-() const { return {-value, bound}; }
    BoundedReal& operator+=(const BoundedReal& o) { return *this = *this + o; }
    BoundedReal& operator-=(const BoundedReal& o) { return *this = *this - o; }
    BoundedReal& operator*=(const BoundedReal& o) { return *this = *this * o; }

    bool contains_zero() const { return abs(value) <= bound; }
    std::string str(int digits = 22) const { return format_real(value, digits) + "±" + format_bound(bound); }
};

struct BoundedComplex {
    Complex value;
    Real bound;

    BoundedComplex() = default;
    BoundedComplex(const Complex& v, const Real& b = Real(0)) : value(v), bound(b) {}
    BoundedComplex(const BoundedReal& r) : value(r.value), bound(r.bound) {}
    static BoundedComplex exact(const Rational& q) { return BoundedComplex(BoundedReal::exact(q)); }

    friend BoundedComplex operator+(const BoundedComplex& a, const BoundedComplex& b) {
        Complex v = a.value + b.value;
        return {v, a.bound + b.bound + v.abs() * unit_roundoff()};
    }
    friend BoundedComplex operator-(const BoundedComplex& a, const BoundedComplex& b) {
        Complex v = a.value - b.value;
        return {v, a.bound + b.bound + v.abs() * unit_roundoff()};
    }
    friend BoundedComplex operator*(const BoundedComplex& a, const BoundedComplex& b) {
        Complex v = a.value * b.value;
        return {v, a.value.abs() * b.bound + b.value.abs() * a.bound + a.bound * b.bound + v.abs() * unit_roundoff()};
    }
    friend BoundedComplex operator*(const Rational& c, const BoundedComplex& b) {
        Real cr = to_real(c);
        Complex v = Complex(cr) * b.value;
        return {v, abs(cr) * b.bound + v.abs() * unit_roundoff()};
    }
    BoundedComplex operator-() const { return {-value, bound}; }
    BoundedComplex& operator+=(const BoundedComplex& o) { return *this = *this + o; }
    BoundedComplex& operator-=(const BoundedComplex& o) { return *this = *this - o; }
    BoundedComplex& operator*=(const BoundedComplex& o) { return *this = *this * o; }

    Real magnitude() const { return value.abs(); }
    bool contains_zero() const { return value.abs() <= bound; }
    // Real part with the imaginary part folded into the bound.
    BoundedReal real_part() const { return {value.re, bound + abs(value.im)}; }
    bool is_real() const { return abs(value.im) <= bound; }

    std::string str(int digits = 22) const {
        if (value.im == 0) return format_real(value.re, digits) + "±" + format_bound(bound);
        std::string im = format_real(abs(value.im), digits);
        return "(" + format_real(value.re, digits) + (value.im < 0 ? " - " : " + ") + im + "i)±" + format_bound(bound);
    }
};

} // namespace mzvlab
