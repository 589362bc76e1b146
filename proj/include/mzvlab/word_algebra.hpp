#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "core_indices.hpp"
#include "rational.hpp"

namespace mzvlab {

// Stuffle letter y_{k, mu} with mu = exp(2 pi i color / N).
struct YLetter {
    int k = 1;
    int color = 0;
    auto operator<=>(const YLetter&) const = default;
    bool operator==(const YLetter&) const = default;
};

// Shuffle letter: x_0 (zero == true) or x_xi with xi = exp(2 pi i color / N).
struct XLetter {
    bool zero = false;
    int color = 0;
    static XLetter x0() { return {true, 0}; }
    static XLetter x1(int color = 0) { return {false, color}; }
    auto operator<=>(const XLetter&) const = default;
    bool operator==(const XLetter&) const = default;
};

template <class L>
using Word = std::vector<L>;
using StuffleWord = Word<YLetter>;
using ShuffleWord = Word<XLetter>;

inline bool is_divergent_letter(const YLetter& y) { return y.k == 1 && y.color == 0; }
inline bool is_divergent_letter(const XLetter& x) { return !x.zero && x.color == 0; }

template <class L>
bool admissible(const Word<L>& w) {
    return w.empty() || !is_divergent_letter(w.back());
}

inline int word_weight(const StuffleWord& w) {
    int s = 0;
    for (const auto& y : w) s += y.k;
    return s;
}
inline int word_weight(const ShuffleWord& w) { return static_cast<int>(w.size()); }

inline int word_depth(const StuffleWord& w) { return static_cast<int>(w.size()); }
inline int word_depth(const ShuffleWord& w) {
    int d = 0;
    for (const auto& x : w) d += x.zero ? 0 : 1;
    return d;
}

// Finite Q-linear combination of words; zero coefficients are never stored.
template <class L>
class WordPoly {
public:
    using Map = std::map<Word<L>, Rational>;

    explicit WordPoly(int level = 1) : level_(level) {}
    WordPoly(const Word<L>& w, int level = 1, const Rational& c = 1) : level_(level) { add(w, c); }

    int level() const { return level_; }
    const Map& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    auto begin() const { return terms_.begin(); }
    auto end() const { return terms_.end(); }

    Rational coefficient(const Word<L>& w) const {
        auto it = terms_.find(w);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    void add(const Word<L>& w, const Rational& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(w, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    WordPoly& operator+=(const WordPoly& o) {
        check_level(o);
        for (const auto& [w, c] : o.terms_) add(w, c);
        return *this;
    }
    WordPoly& operator-=(const WordPoly& o) {
        check_level(o);
        for (const auto& [w, c] : o.terms_) add(w, -c);
        return *this;
    }
    friend WordPoly operator+(WordPoly a, const WordPoly& b) { return a += b; }
    friend WordPoly operator-(WordPoly a, const WordPoly& b) { return a -= b; }
    friend WordPoly operator*(const Rational& c, const WordPoly& a) {
        WordPoly out(a.level_);
        for (const auto& [w, x] : a.terms_) out.add(w, c * x);
        return out;
    }
    bool operator==(const WordPoly& o) const { return level_ == o.level_ && terms_ == o.terms_; }

    // Appends letter to every word.
    WordPoly appended(const L& letter) const {
        WordPoly out(level_);
        for (const auto& [w, c] : terms_) {
            Word<L> v = w;
            v.push_back(letter);
            out.terms_.emplace(std::move(v), c);
        }
        return out;
    }

    void check_level(const WordPoly& o) const {
        if (level_ != o.level_) throw LevelError("word polynomials of levels " + std::to_string(level_) + " and " + std::to_string(o.level_) + " cannot be combined");
    }

private:
    int level_;
    Map terms_;
};

namespace detail {

// Product of two words by the right-peeling recursion; merge yields the optional diagonal letter.
template <class L, class Merge>
WordPoly<L> word_product(const Word<L>& a, const Word<L>& b, int level, Merge merge) {
    std::size_t na = a.size(), nb = b.size();
    std::vector<std::vector<WordPoly<L>>> t(na + 1, std::vector<WordPoly<L>>(nb + 1, WordPoly<L>(level)));
    for (std::size_t i = 0; i <= na; ++i) t[i][0] = WordPoly<L>(Word<L>(a.begin(), a.begin() + static_cast<long>(i)), level);
    for (std::size_t j = 1; j <= nb; ++j) t[0][j] = WordPoly<L>(Word<L>(b.begin(), b.begin() + static_cast<long>(j)), level);
    for (std::size_t i = 1; i <= na; ++i) {
        for (std::size_t j = 1; j <= nb; ++j) {
            WordPoly<L> p = t[i - 1][j].appended(a[i - 1]);
            p += t[i][j - 1].appended(b[j - 1]);
            if (auto d = merge(a[i - 1], b[j - 1])) p += t[i - 1][j - 1].appended(*d);
            t[i][j] = std::move(p);
        }
    }
    return t[na][nb];
}

} // namespace detail

inline WordPoly<YLetter> stuffle(const StuffleWord& a, const StuffleWord& b, int level = 1) {
    return detail::word_product(a, b, level, [level](const YLetter& x, const YLetter& y) {
        return std::optional<YLetter>(YLetter{x.k + y.k, (x.color + y.color) % level});
    });
}

inline WordPoly<XLetter> shuffle(const ShuffleWord& a, const ShuffleWord& b, int level = 1) {
    return detail::word_product(a, b, level, [](const XLetter&, const XLetter&) { return std::optional<XLetter>(); });
}

template <class L, class Prod>
WordPoly<L> bilinear(const WordPoly<L>& a, const WordPoly<L>& b, Prod prod) {
    a.check_level(b);
    WordPoly<L> out(a.level());
    for (const auto& [u, c] : a)
        for (const auto& [v, d] : b) {
            WordPoly<L> p = prod(u, v, a.level());
            for (const auto& [w, e] : p) out.add(w, c * d * e);
        }
    return out;
}

inline WordPoly<YLetter> stuffle(const WordPoly<YLetter>& a, const WordPoly<YLetter>& b) {
    return bilinear(a, b, [](const StuffleWord& u, const StuffleWord& v, int lv) { return stuffle(u, v, lv); });
}

inline WordPoly<XLetter> shuffle(const WordPoly<XLetter>& a, const WordPoly<XLetter>& b) {
    return bilinear(a, b, [](const ShuffleWord& u, const ShuffleWord& v, int lv) { return shuffle(u, v, lv); });
}

// w = sum_i v_i * d^{*i} with every v_i admissible; entry i holds v_i (possibly zero).
template <class L>
using Decomposition = std::vector<WordPoly<L>>;

namespace detail {

template <class L, class Prod>
class Decomposer {
public:
    Decomposer(int level, L divergent, Prod prod) : level_(level), div_(divergent), prod_(prod) {}

    const Decomposition<L>& run(const Word<L>& w) {
        auto it = memo_.find(w);
        if (it != memo_.end()) return it->second;
        std::size_t n = 0;
        while (n < w.size() && w[w.size() - 1 - n] == div_) ++n;
        Decomposition<L> out;
        if (n == 0) {
            out.emplace_back(w, level_);
            return memo_.emplace(w, std::move(out)).first->second;
        }
        Word<L> base(w.begin(), w.end() - 1);
        WordPoly<L> p = prod_(base, Word<L>{div_}, level_);
        Rational self = p.coefficient(w);
        if (self != static_cast<long>(n)) throw InternalError("decomposition: unexpected self coefficient");
        out.assign(n + 1, WordPoly<L>(level_));
        {
            Decomposition<L> rb = run(base);
            for (std::size_t i = 0; i < rb.size(); ++i) out[i + 1] += rb[i];
        }
        for (const auto& [v, c] : p) {
            if (v == w) continue;
            Decomposition<L> rv = run(v);
            if (rv.size() > out.size()) throw InternalError("decomposition: degree grew");
            for (std::size_t i = 0; i < rv.size(); ++i) out[i] -= c * rv[i];
        }
        Rational inv = Rational(1) / Rational(static_cast<long>(n));
        for (auto& x : out) x = inv * x;
        return memo_.emplace(w, std::move(out)).first->second;
    }

private:
    int level_;
    L div_;
    Prod prod_;
    std::map<Word<L>, Decomposition<L>> memo_;
};

} // namespace detail

inline Decomposition<YLetter> stuffle_decompose(const StuffleWord& w, int level = 1) {
    auto prod = [](const StuffleWord& a, const StuffleWord& b, int lv) { return stuffle(a, b, lv); };
    detail::Decomposer<YLetter, decltype(prod)> d(level, YLetter{1, 0}, prod);
    return d.run(w);
}

inline Decomposition<XLetter> shuffle_decompose(const ShuffleWord& w, int level = 1) {
    auto prod = [](const ShuffleWord& a, const ShuffleWord& b, int lv) { return shuffle(a, b, lv); };
    detail::Decomposer<XLetter, decltype(prod)> d(level, XLetter::x1(0), prod);
    return d.run(w);
}

// sum_i v_i * d^{*i}, the inverse of the decomposition.
inline WordPoly<YLetter> stuffle_reconstruct(const Decomposition<YLetter>& dec, int level = 1) {
    WordPoly<YLetter> out(level), power(StuffleWord{}, level), d(StuffleWord{YLetter{1, 0}}, level);
    for (const auto& v : dec) {
        out += stuffle(v, power);
        power = stuffle(power, d);
    }
    return out;
}

inline WordPoly<XLetter> shuffle_reconstruct(const Decomposition<XLetter>& dec, int level = 1) {
    WordPoly<XLetter> out(level), power(ShuffleWord{}, level), d(ShuffleWord{XLetter::x1(0)}, level);
    for (const auto& v : dec) {
        out += shuffle(v, power);
        power = shuffle(power, d);
    }
    return out;
}

inline StuffleWord to_stuffle_word(const MultiIndex& k, const std::optional<ColorVector>& colors = std::nullopt) {
    StuffleWord w;
    for (int i = 0; i < k.depth(); ++i) w.push_back({k[static_cast<std::size_t>(i)], colors ? (*colors)[static_cast<std::size_t>(i)] : 0});
    return w;
}

inline std::pair<MultiIndex, ColorVector> from_stuffle_word(const StuffleWord& w, int level = 1) {
    std::vector<int> k, a;
    for (const auto& y : w) {
        k.push_back(y.k);
        a.push_back(y.color);
    }
    return {MultiIndex(std::move(k)), ColorVector(level, std::move(a))};
}

// (k_1..k_r; mu) -> x_{xi_1} x0^{k_1-1} ... x_{xi_r} x0^{k_r-1}, xi_i = (mu_i ... mu_r)^{-1}.
inline ShuffleWord encode_binary(const MultiIndex& k, const std::optional<ColorVector>& colors = std::nullopt) {
    ShuffleWord w;
    int r = k.depth();
    for (int i = 0; i < r; ++i) {
        int e = 0;
        if (colors) {
            long s = 0;
            for (int l = i; l < r; ++l) s += (*colors)[static_cast<std::size_t>(l)];
            e = colors->reduce(-s);
        }
        w.push_back(XLetter::x1(e));
        for (int z = 1; z < k[static_cast<std::size_t>(i)]; ++z) w.push_back(XLetter::x0());
    }
    return w;
}

inline std::pair<MultiIndex, ColorVector> decode_binary(const ShuffleWord& w, int level = 1) {
    std::vector<int> k, xi;
    for (std::size_t p = 0; p < w.size(); ++p) {
        if (w[p].zero) {
            if (k.empty()) throw DecodeError("binary word must start with a non-zero letter");
            ++k.back();
        } else {
            k.push_back(1);
            xi.push_back(w[p].color);
        }
    }
    std::size_t r = k.size();
    std::vector<int> a(r);
    for (std::size_t i = 0; i < r; ++i) {
        int next = i + 1 < r ? xi[i + 1] : 0;
        a[i] = ((next - xi[i]) % level + level) % level;
    }
    return {MultiIndex(std::move(k)), ColorVector(level, std::move(a))};
}

inline std::string to_string(const StuffleWord& w) {
    if (w.empty()) return "1";
    std::string s;
    for (const auto& y : w) {
        s += "y" + std::to_string(y.k);
        if (y.color) s += "@" + std::to_string(y.color);
    }
    return s;
}

inline std::string to_string(const ShuffleWord& w) {
    if (w.empty()) return "1";
    std::string s;
    for (const auto& x : w) {
        if (x.zero) s += "x0";
        else {
            s += "x1";
            if (x.color) s += "@" + std::to_string(x.color);
        }
    }
    return s;
}

template <class L>
std::string to_string(const WordPoly<L>& p) {
    if (p.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [w, c] : p) {
        Rational a = abs(c);
        if (!first) s += c < 0 ? " - " : " + ";
        else if (c < 0) s += "-";
        first = false;
        if (a != 1) s += to_string(a) + "·";
        s += to_string(w);
    }
    return s;
}

// Literal grammar: "y:2,1", "y:2@1,1@3@N=4", "x:1,0,1", "x:1@2,0@N=4".
struct WordLiteral {
    std::optional<StuffleWord> y;
    std::optional<ShuffleWord> x;
    int level = 1;
};

inline WordLiteral parse_word(std::string_view text) {
    std::string_view t = detail::trim(text);
    if (t.size() < 2 || t[1] != ':' || (t[0] != 'x' && t[0] != 'y')) throw ParseError("word literal must start with 'x:' or 'y:'", 0);
    WordLiteral out;
    std::string_view body = t.substr(2);
    std::size_t offset = 2;
    std::size_t lv = body.rfind("@N=");
    if (lv != std::string_view::npos) {
        out.level = static_cast<int>(detail::parse_long(body.substr(lv + 3), offset + lv + 3, "level"));
        if (out.level < 1) throw ParseError("level must be positive", offset + lv + 3);
        body = body.substr(0, lv);
    }
    std::vector<std::pair<long, long>> items;
    std::size_t start = 0;
    if (!detail::trim(body).empty()) {
        while (true) {
            std::size_t comma = body.find(',', start);
            std::string_view piece = body.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
            std::size_t at = piece.find('@');
            long v = detail::parse_long(piece.substr(0, at), offset + start, "letter");
            long c = at == std::string_view::npos ? 0 : detail::parse_long(piece.substr(at + 1), offset + start + at + 1, "color");
            items.emplace_back(v, c);
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
    }
    auto reduce = [&](long c) { return static_cast<int>(((c % out.level) + out.level) % out.level); };
    if (t[0] == 'y') {
        StuffleWord w;
        for (auto [v, c] : items) {
            if (v < 1) throw ParseError("y letters need positive weight", offset);
            w.push_back({static_cast<int>(v), reduce(c)});
        }
        out.y = std::move(w);
    } else {
        ShuffleWord w;
        for (auto [v, c] : items) {
            if (v == 0) {
                if (c) throw ParseError("x0 carries no color", offset);
                w.push_back(XLetter::x0());
            } else if (v == 1) {
                w.push_back(XLetter::x1(reduce(c)));
            } else {
                throw ParseError("x letters are 0 or 1", offset);
            }
        }
        out.x = std::move(w);
    }
    return out;
}

} // namespace mzvlab
