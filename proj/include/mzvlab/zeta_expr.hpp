#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core_indices.hpp"
#include "rational.hpp"
#include "word_algebra.hpp"

namespace mzvlab {

// A convergent (colored) multiple zeta value Li(k; mu). Trivial colors are stored at level 1.
struct ZetaSymbol {
    std::vector<int> parts;
    std::vector<int> exps;
    int level = 1;

    ZetaSymbol() = default;
    ZetaSymbol(const MultiIndex& k, const ColorVector& c) : parts(k.parts()), exps(c.exps()), level(c.level()) {
        if (c.size() != k.depth()) throw RangeError("colors length must match the index depth");
        if (k.empty()) throw InternalError("the empty index is the constant 1, not a symbol");
        if (!convergent(k, c)) throw DivergenceError("symbol (" + k.str() + ";" + c.str() + ") is divergent");
        if (c.is_trivial()) level = 1;
    }
    explicit ZetaSymbol(const MultiIndex& k) : ZetaSymbol(k, ColorVector::trivial(1, k.depth())) {}

    MultiIndex index() const { return MultiIndex(parts); }
    ColorVector colors() const { return ColorVector(level, exps); }
    int depth() const { return static_cast<int>(parts.size()); }
    int weight() const {
        int w = 0;
        for (int p : parts) w += p;
        return w;
    }

    std::string str() const {
        std::string s = level == 1 ? "ζ(" : "Li(";
        for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + std::to_string(parts[i]);
        if (level != 1) {
            s += ";";
            for (std::size_t i = 0; i < exps.size(); ++i) s += (i ? "," : "") + std::to_string(exps[i]);
            s += "@" + std::to_string(level);
        }
        return s + ")";
    }

    auto operator<=>(const ZetaSymbol&) const = default;
    bool operator==(const ZetaSymbol&) const = default;
};

using Monomial = std::vector<ZetaSymbol>;  // sorted product of symbols; empty means 1

// Polynomial in T whose coefficients are Q-linear combinations of products of convergent values.
class ZetaExpr {
public:
    using Key = std::pair<int, Monomial>;

    ZetaExpr() = default;
    static ZetaExpr constant(const Rational& c) {
        ZetaExpr e;
        e.add({0, {}}, c);
        return e;
    }
    static ZetaExpr t_power(int p, const Rational& c = 1) {
        ZetaExpr e;
        e.add({p, {}}, c);
        return e;
    }
    // Li(k; mu) for a convergent pair; the empty index gives 1.
    static ZetaExpr value(const MultiIndex& k, const ColorVector& c) {
        if (k.empty()) return constant(1);
        ZetaExpr e;
        e.add({0, {ZetaSymbol(k, c)}}, 1);
        return e;
    }
    static ZetaExpr value(const MultiIndex& k) { return value(k, ColorVector::trivial(1, k.depth())); }

    // zeta(2k), with zeta(0) = -1/2.
    static ZetaExpr even_zeta(int k) {
        if (k == 0) return constant(Rational(-1, 2));
        return value(MultiIndex{2 * k});
    }

    void add(const Key& key, const Rational& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(key, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    const std::map<Key, Rational>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    int degree() const {
        int d = 0;
        for (const auto& [key, c] : terms_) d = std::max(d, key.first);
        return d;
    }

    ZetaExpr& operator+=(const ZetaExpr& o) {
        for (const auto& [k, c] : o.terms_) add(k, c);
        return *this;
    }
    ZetaExpr& operator-=(const ZetaExpr& o) {
        for (const auto& [k, c] : o.terms_) add(k, -c);
        return *this;
    }
    friend ZetaExpr operator+(ZetaExpr a, const ZetaExpr& b) { return a += b; }
    friend ZetaExpr operator-(ZetaExpr a, const ZetaExpr& b) { return a -= b; }
    friend ZetaExpr operator*(const Rational& c, const ZetaExpr& a) {
        ZetaExpr out;
        if (c == 0) return out;
        for (const auto& [k, x] : a.terms_) out.terms_.emplace(k, c * x);
        return out;
    }
    friend ZetaExpr operator*(const ZetaExpr& a, const ZetaExpr& b) {
        ZetaExpr out;
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_) {
                Monomial m = ka.second;
                m.insert(m.end(), kb.second.begin(), kb.second.end());
                std::sort(m.begin(), m.end());
                out.add({ka.first + kb.first, std::move(m)}, ca * cb);
            }
        return out;
    }
    bool operator==(const ZetaExpr& o) const { return terms_ == o.terms_; }

    // Coefficient of T^p as an expression of degree 0.
    ZetaExpr coefficient(int p) const {
        ZetaExpr out;
        for (const auto& [k, c] : terms_)
            if (k.first == p) out.add({0, k.second}, c);
        return out;
    }

    // Every symbol occurring anywhere.
    std::vector<ZetaSymbol> symbols() const {
        std::vector<ZetaSymbol> out;
        for (const auto& [k, c] : terms_)
            for (const auto& s : k.second) out.push_back(s);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [key, c] = *it;
            Rational a = abs(c);
            s += first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
            first = false;
            std::string body;
            for (const auto& sym : key.second) body += (body.empty() ? "" : "·") + sym.str();
            if (key.first > 0) body += (body.empty() ? "" : "·") + std::string(key.first == 1 ? "T" : "T^" + std::to_string(key.first));
            if (body.empty()) s += to_string(a);
            else if (a == 1) s += body;
            else s += "(" + to_string(a) + ")·" + body;
        }
        return s;
    }

private:
    std::map<Key, Rational> terms_;
};

enum class RegKind { Stuffle, Shuffle };

inline std::string to_string(RegKind k) { return k == RegKind::Stuffle ? "stuffle" : "shuffle"; }

// Regularized value as a polynomial in T: Li_*^T or Li_sh^T of (k; mu), any positive k.
inline ZetaExpr reg_expr(const MultiIndex& k, const ColorVector& c, RegKind kind) {
    ZetaExpr out;
    int level = c.level();
    if (kind == RegKind::Stuffle) {
        auto dec = stuffle_decompose(to_stuffle_word(k, c), level);
        for (std::size_t i = 0; i < dec.size(); ++i)
            for (const auto& [w, coef] : dec[i]) {
                auto [kk, cc] = from_stuffle_word(w, level);
                out += coef * (ZetaExpr::t_power(static_cast<int>(i)) * ZetaExpr::value(kk, cc));
            }
    } else {
        auto dec = shuffle_decompose(encode_binary(k, c), level);
        for (std::size_t i = 0; i < dec.size(); ++i)
            for (const auto& [w, coef] : dec[i]) {
                auto [kk, cc] = decode_binary(w, level);
                out += coef * (ZetaExpr::t_power(static_cast<int>(i)) * ZetaExpr::value(kk, cc));
            }
    }
    return out;
}

inline ZetaExpr reg_expr(const MultiIndex& k, RegKind kind) { return reg_expr(k, ColorVector::trivial(1, k.depth()), kind); }

// Star value as the sum over the 2^{r-1} ways of merging adjacent entries (colors multiply).
inline ZetaExpr star_expr(const MultiIndex& k, const ColorVector& c) {
    int r = k.depth();
    if (r == 0) return ZetaExpr::constant(1);
    ZetaExpr out;
    for (unsigned mask = 0; mask < (1u << (r - 1)); ++mask) {
        std::vector<int> kk{k[0]}, aa{c[0]};
        for (int i = 1; i < r; ++i) {
            if (mask & (1u << (i - 1))) {
                kk.back() += k[static_cast<std::size_t>(i)];
                aa.back() += c[static_cast<std::size_t>(i)];
            } else {
                kk.push_back(k[static_cast<std::size_t>(i)]);
                aa.push_back(c[static_cast<std::size_t>(i)]);
            }
        }
        out += ZetaExpr::value(MultiIndex(kk), ColorVector(c.level(), aa));
    }
    return out;
}

inline ZetaExpr star_expr(const MultiIndex& k) { return star_expr(k, ColorVector::trivial(1, k.depth())); }

} // namespace mzvlab
