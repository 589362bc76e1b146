#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace mzvlab {

// Ascending multi-index (k_1, ..., k_r): the sum runs over n_1 < ... < n_r.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> parts) : parts_(std::move(parts)) { validate(); }
    MultiIndex(std::initializer_list<int> parts) : parts_(parts) { validate(); }

    // {m}_r
    static MultiIndex repeated(int m, int r) { return MultiIndex(std::vector<int>(static_cast<std::size_t>(r), m)); }

    int depth() const { return static_cast<int>(parts_.size()); }
    int weight() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }
    bool empty() const { return parts_.empty(); }
    bool admissible() const { return parts_.empty() || parts_.back() > 1; }

    const std::vector<int>& parts() const { return parts_; }
    int operator[](std::size_t i) const { return parts_[i]; }
    // 1-based access, k_1 ... k_r.
    int at(int pos) const {
        if (pos < 1 || pos > depth()) throw RangeError("index position " + std::to_string(pos) + " out of 1.." + std::to_string(depth()));
        return parts_[static_cast<std::size_t>(pos - 1)];
    }

    MultiIndex reversed() const { return MultiIndex(std::vector<int>(parts_.rbegin(), parts_.rend())); }

    MultiIndex concat(const MultiIndex& other) const {
        std::vector<int> p = parts_;
        p.insert(p.end(), other.parts_.begin(), other.parts_.end());
        return MultiIndex(std::move(p));
    }

    MultiIndex appended(int part) const {
        std::vector<int> p = parts_;
        p.push_back(part);
        return MultiIndex(std::move(p));
    }

    // k + n, componentwise; n must have the same length and nonnegative entries.
    MultiIndex shifted(const std::vector<int>& n) const {
        if (n.size() != parts_.size()) throw RangeError("shift length does not match depth");
        std::vector<int> p = parts_;
        for (std::size_t i = 0; i < p.size(); ++i) p[i] += n[i];
        return MultiIndex(std::move(p));
    }

    std::string str() const {
        std::string s;
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(parts_[i]);
        }
        return s;
    }

    auto operator<=>(const MultiIndex&) const = default;
    bool operator==(const MultiIndex&) const = default;

private:
    void validate() const {
        for (int p : parts_)
            if (p < 1) throw RangeError("index parts must be positive, got " + std::to_string(p));
    }

    std::vector<int> parts_;
};

struct WeightDepth {
    int weight;
    int depth;
    bool operator==(const WeightDepth&) const = default;
};

inline WeightDepth weight_depth(const MultiIndex& k) { return {k.weight(), k.depth()}; }
inline MultiIndex reverse(const MultiIndex& k) { return k.reversed(); }

enum class Ends { ClosedClosed, ClosedOpen, OpenClosed, OpenOpen };

// Positions follow the slicing convention y_(i,j), y_[i,j), y_(i,j], y_[i,j] with 0 <= i <= j <= r+1.
struct SliceRange {
    int lo;
    int hi;
    Ends ends;

    static SliceRange closed(int lo, int hi) { return {lo, hi, Ends::ClosedClosed}; }
    static SliceRange closed_open(int lo, int hi) { return {lo, hi, Ends::ClosedOpen}; }
    static SliceRange open_closed(int lo, int hi) { return {lo, hi, Ends::OpenClosed}; }
    static SliceRange open(int lo, int hi) { return {lo, hi, Ends::OpenOpen}; }
};

namespace detail {

// Returns the 0-based half-open range [first, last) of the slice, validating it.
inline std::pair<std::size_t, std::size_t> slice_bounds(int r, SliceRange rng) {
    bool lo_open = rng.ends == Ends::OpenClosed || rng.ends == Ends::OpenOpen;
    bool hi_open = rng.ends == Ends::ClosedOpen || rng.ends == Ends::OpenOpen;
    int first = lo_open ? rng.lo + 1 : rng.lo;
    int last = hi_open ? rng.hi - 1 : rng.hi;
    if (rng.lo < 0 || rng.hi > r + 1 || rng.lo > rng.hi)
        throw RangeError("slice range (" + std::to_string(rng.lo) + "," + std::to_string(rng.hi) + ") invalid for depth " + std::to_string(r));
    if (last < first - 1) throw RangeError("malformed slice range");
    if (last == first - 1) return {0, 0};
    if (first < 1 || last > r) throw RangeError("slice reaches outside positions 1.." + std::to_string(r));
    return {static_cast<std::size_t>(first - 1), static_cast<std::size_t>(last)};
}

} // namespace detail

inline MultiIndex slice(const MultiIndex& k, SliceRange rng) {
    auto [a, b] = detail::slice_bounds(k.depth(), rng);
    return MultiIndex(std::vector<int>(k.parts().begin() + static_cast<long>(a), k.parts().begin() + static_cast<long>(b)));
}

// Prefix k_[1,j] and suffix k_(j,r], the two slices used everywhere.
inline MultiIndex head(const MultiIndex& k, int j) { return MultiIndex(std::vector<int>(k.parts().begin(), k.parts().begin() + j)); }
inline MultiIndex tail(const MultiIndex& k, int j) { return MultiIndex(std::vector<int>(k.parts().begin() + j, k.parts().end())); }

// Exponents a_i of mu_i = exp(2 pi i a_i / N), reduced mod N.
class ColorVector {
public:
    ColorVector() = default;
    ColorVector(int level, std::vector<int> exps) : level_(level), exps_(std::move(exps)) {
        if (level_ < 1) throw RangeError("color level must be positive");
        for (int& a : exps_) a = reduce(a);
    }
    static ColorVector trivial(int level, int r) { return ColorVector(level, std::vector<int>(static_cast<std::size_t>(r), 0)); }

    int level() const { return level_; }
    int size() const { return static_cast<int>(exps_.size()); }
    const std::vector<int>& exps() const { return exps_; }
    int operator[](std::size_t i) const { return exps_[i]; }
    bool is_trivial() const {
        for (int a : exps_)
            if (a) return false;
        return true;
    }
    // Exponent of mu_1 ... mu_r.
    int product() const { return reduce(std::accumulate(exps_.begin(), exps_.end(), 0)); }
    int reduce(long a) const { return static_cast<int>(((a % level_) + level_) % level_); }

    ColorVector reversed() const { return ColorVector(level_, std::vector<int>(exps_.rbegin(), exps_.rend())); }
    ColorVector inverse() const {
        std::vector<int> e = exps_;
        for (int& a : e) a = -a;
        return ColorVector(level_, std::move(e));
    }
    ColorVector head(int j) const { return ColorVector(level_, std::vector<int>(exps_.begin(), exps_.begin() + j)); }
    ColorVector tail(int j) const { return ColorVector(level_, std::vector<int>(exps_.begin() + j, exps_.end())); }
    ColorVector appended(int a) const {
        std::vector<int> e = exps_;
        e.push_back(a);
        return ColorVector(level_, std::move(e));
    }
    ColorVector slice(SliceRange rng) const {
        auto [a, b] = detail::slice_bounds(size(), rng);
        return ColorVector(level_, std::vector<int>(exps_.begin() + static_cast<long>(a), exps_.begin() + static_cast<long>(b)));
    }

    std::string str() const {
        std::string s;
        for (std::size_t i = 0; i < exps_.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(exps_[i]);
        }
        return s + "@" + std::to_string(level_);
    }

    auto operator<=>(const ColorVector&) const = default;
    bool operator==(const ColorVector&) const = default;

private:
    int level_ = 1;
    std::vector<int> exps_;
};

// (k_r, mu_r) != (1, 1).
inline bool convergent(const MultiIndex& k, const ColorVector& c) {
    if (k.empty()) return true;
    return k.parts().back() > 1 || c.exps().back() != 0;
}

// Calls fn(n) for every weak composition n = (n_1..n_r) of m into r nonnegative parts, in lexicographic order.
inline void for_each_composition(int m, int r, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> n(static_cast<std::size_t>(r), 0);
    if (r == 0) {
        if (m == 0) fn(n);
        return;
    }
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == r - 1) {
            n[static_cast<std::size_t>(pos)] = left;
            fn(n);
            return;
        }
        for (int v = 0; v <= left; ++v) {
            n[static_cast<std::size_t>(pos)] = v;
            rec(pos + 1, left - v);
        }
    };
    rec(0, m);
}

// All compositions of w (positive parts), used by sweeps: every index of weight exactly w and depth <= max_depth.
inline std::vector<MultiIndex> indices_of_weight(int w, int max_depth) {
    std::vector<MultiIndex> out;
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int left) {
        if (left == 0) {
            out.emplace_back(cur);
            return;
        }
        if (static_cast<int>(cur.size()) == max_depth) return;
        for (int p = 1; p <= left; ++p) {
            cur.push_back(p);
            rec(left - p);
            cur.pop_back();
        }
    };
    if (w > 0) rec(w);
    return out;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

// Signed decimal integer starting at text[offset..]; errors report absolute position.
inline long parse_long(std::string_view text, std::size_t offset, const char* what) {
    std::string_view t = trim(text);
    if (t.empty()) throw ParseError(std::string("empty ") + what, offset);
    std::size_t i = 0;
    bool neg = false;
    if (t[0] == '-' || t[0] == '+') {
        neg = t[0] == '-';
        i = 1;
    }
    if (i == t.size()) throw ParseError(std::string("missing digits in ") + what, offset);
    long v = 0;
    for (; i < t.size(); ++i) {
        char c = t[i];
        if (c < '0' || c > '9') throw ParseError(std::string("unexpected character '") + c + "' in " + what, offset + i);
        v = v * 10 + (c - '0');
        if (v > 1000000000L) throw ParseError(std::string(what) + " too large", offset);
    }
    return neg ? -v : v;
}

} // namespace detail

// "2,1,3"; the empty string (or "()") is the empty index.
inline MultiIndex parse_index(std::string_view text) {
    std::string_view t = detail::trim(text);
    if (t.empty() || t == "()" || t == "-") return MultiIndex();
    std::vector<int> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = t.find(',', start);
        std::string_view piece = t.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        long v = detail::parse_long(piece, start, "index part");
        if (v < 1) throw ParseError("index parts must be positive", start);
        parts.push_back(static_cast<int>(v));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return MultiIndex(std::move(parts));
}

// "a1,a2,...@N"
inline ColorVector parse_colors(std::string_view text) {
    std::string_view t = detail::trim(text);
    std::size_t at = t.rfind('@');
    if (at == std::string_view::npos) throw ParseError("colors need a level suffix '@N'", t.size());
    long level = detail::parse_long(t.substr(at + 1), at + 1, "level");
    if (level < 1) throw ParseError("level must be positive", at + 1);
    std::vector<int> exps;
    std::string_view body = t.substr(0, at);
    if (!detail::trim(body).empty()) {
        std::size_t start = 0;
        while (true) {
            std::size_t comma = body.find(',', start);
            std::string_view piece = body.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
            exps.push_back(static_cast<int>(detail::parse_long(piece, start, "color exponent")));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
    }
    return ColorVector(static_cast<int>(level), std::move(exps));
}

} // namespace mzvlab
