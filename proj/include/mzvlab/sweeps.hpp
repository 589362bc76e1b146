#pragma once

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "core_indices.hpp"
#include "finite_hurwitz.hpp"
#include "parity_verifier.hpp"
#include "series_expansion.hpp"
#include "word_algebra.hpp"

namespace mzvlab {

// Runs fn over items on a pool of threads; results come back in item order, so output does not depend on scheduling.
template <class T, class Fn>
auto ordered_map(const std::vector<T>& items, Fn fn, unsigned threads = 0) {
    using R = decltype(fn(items.front()));
    std::vector<R> out(items.size());
    if (items.empty()) return out;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(items.size()));
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(items.size());
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < items.size();) {
            try {
                out[i] = fn(items[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (threads == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

// Same ordering as ordered_map, but hands finished results to sink chunk by chunk so long sweeps stream.
template <class T, class Fn, class Sink>
void stream_ordered(const std::vector<T>& items, Fn fn, Sink sink, unsigned threads = 0) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    std::size_t chunk = std::max<std::size_t>(1, 4 * threads);
    for (std::size_t at = 0; at < items.size(); at += chunk) {
        std::vector<T> part(items.begin() + static_cast<long>(at), items.begin() + static_cast<long>(std::min(items.size(), at + chunk)));
        for (auto& r : ordered_map(part, fn, threads)) sink(r);
    }
}

namespace detail {

inline std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 1469598103934665603ull) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Per-instance generator: depends on the seed and the instance key only.
inline std::mt19937_64 instance_rng(std::uint64_t seed, const std::string& key) { return std::mt19937_64(fnv1a(key, seed ^ 0x9e3779b97f4a7c15ull)); }

inline long uniform(std::mt19937_64& g, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(g); }

// Non-integer rational with a small denominator, so no lattice point m + s vanishes.
inline Rational small_shift(std::mt19937_64& g) {
    long den = uniform(g, 2, 6);
    long num;
    do num = uniform(g, -3 * den, 3 * den);
    while (num % den == 0);
    return make_rational(num, den);
}

inline std::vector<ColorVector> sign_vectors(int r) {
    std::vector<ColorVector> out;
    for (int mask = 0; mask < (1 << r); ++mask) {
        std::vector<int> e;
        for (int i = 0; i < r; ++i) e.push_back((mask >> i) & 1);
        out.emplace_back(2, e);
    }
    return out;
}

inline Real exact_magnitude(const ExactValue& v) { return v.bounded().magnitude() + v.bounded().bound; }

} // namespace detail

// ---------------------------------------------------------------------------------------------------------------
// Exact finite identities: translation, decomposition, reflection, antipode, truncation and the expansion at 0.

struct IdentitySweepConfig {
    int max_weight = 6;
    int max_depth = 3;
    long window = 12;
    std::uint64_t seed = 42;
    int shifts = 5;
    int expansion_order = 3;
    bool colored = true;  // also every sign vector at level 2
    unsigned threads = 0;
};

struct IdentityCase {
    MultiIndex k;
    std::optional<ColorVector> colors;
};

inline std::vector<IdentityCase> identity_cases(const IdentitySweepConfig& c) {
    std::vector<IdentityCase> out;
    for (int w = 1; w <= c.max_weight; ++w)
        for (const auto& k : indices_of_weight(w, c.max_depth)) {
            out.push_back({k, std::nullopt});
            if (c.colored)
                for (const auto& mu : detail::sign_vectors(k.depth())) out.push_back({k, mu});
        }
    return out;
}

inline ResidualReport identity_case_report(const IdentityCase& ic, const IdentitySweepConfig& c) {
    const MultiIndex& k = ic.k;
    const auto& mu = ic.colors;
    std::string key = k.str() + "|" + (mu ? mu->str() : "");
    auto g = detail::instance_rng(c.seed, key);
    std::vector<Rational> shifts;
    for (int i = 0; i < c.shifts; ++i) shifts.push_back(detail::small_shift(g));

    std::map<std::string, long> checked, failed;
    Real worst = 0;
    json first_failure;
    auto record = [&](const std::string& name, const ExactValue& v, const std::function<json()>& where) {
        ++checked[name];
        if (v.is_zero()) return;
        ++failed[name];
        worst = std::max(worst, detail::exact_magnitude(v));
        if (first_failure.is_null()) first_failure = json{{"identity", name}, {"where", where()}, {"residual", v.str()}};
    };

    long W = c.window;
    for (long m1 = -W; m1 <= W; ++m1)
        for (long m2 = m1 + 1; m2 <= W; ++m2) {
            IntervalSpec iv = IntervalSpec::open(m1, m2);
            for (const Rational& s : shifts) {
                ShiftParam sp{s};
                auto where = [&] { return json{{"interval", iv.str()}, {"shift", to_string(s)}}; };
                record("translation", check_translation(k, iv, sp, detail::uniform(g, -W, W), mu), where);
                if (m2 - m1 >= 2) {
                    auto d = check_decomposition(k, iv, sp, detail::uniform(g, m1 + 1, m2 - 1), mu);
                    record("decomposition_split", d.closed_split, where);
                    record("decomposition_pinned", d.pinned_split, where);
                }
                record("reflection", check_reflection(k, iv, sp, mu), where);
                record("antipode", check_antipode(k, iv, sp, mu), where);
                long t = m1 > 0 ? 0 : 1 - m1;
                record("truncation", check_truncation(k, m2 + t, m1 + t, ShiftParam{s - t}, mu), where);
            }
            // Expansion at s = 0 needs a one-sided window; otherwise check the translated one.
            IntervalSpec one_sided = (m2 <= 0 || m1 >= 0) ? iv : iv.translated(-m1);
            auto where = [&] { return json{{"interval", one_sided.str()}}; };
            for (const auto& v : check_expansion(k, one_sided, c.expansion_order, mu)) record("expansion", v, where);
        }

    ResidualReport rep;
    rep.theorem = "finite_identities";
    rep.params = {{"index", k.str()}, {"window", W}, {"shifts", c.shifts}, {"seed", c.seed}};
    if (mu) rep.params["colors"] = mu->str();
    long total = 0, bad = 0;
    for (const auto& [name, n] : checked) {
        rep.blocks.emplace_back(name, std::to_string(n - failed[name]) + "/" + std::to_string(n));
        total += n;
        bad += failed[name];
    }
    rep.residual = bad ? first_failure.at("residual").get<std::string>() : "0";
    rep.residual_magnitude = worst;
    rep.allowance = 0;
    rep.pass = bad == 0;
    rep.extra = {{"instances", total}, {"failures", bad}};
    if (bad) rep.extra["first_failure"] = first_failure;
    return rep;
}

inline std::vector<ResidualReport> identity_sweep(const IdentitySweepConfig& c) {
    return ordered_map(identity_cases(c), [&](const IdentityCase& ic) { return identity_case_report(ic, c); }, c.threads);
}

// ---------------------------------------------------------------------------------------------------------------
// Truncated Taylor/Laurent series at integer centers against direct evaluation at s = n + t.

struct ExpansionSweepConfig {
    int instances = 200;
    int order = 8;
    Rational t = make_rational(1, 10);
    int max_weight = 4;
    int max_depth = 3;
    long window = 6;
    long center_range = 8;
    std::uint64_t seed = 42;
    unsigned threads = 0;
};

namespace detail {

struct SeriesTerm {
    int m;       // position in its own block
    int degree;  // power of t
    Rational c;
};

inline std::vector<SeriesTerm> series_terms(const MultiIndex& k, const IntervalSpec& iv, long n, int order) {
    std::vector<SeriesTerm> out;
    bool inside = -*iv.m2 < n && n < -*iv.m1;
    if (!inside || k.empty()) {
        auto c = taylor_at(k, iv, n, order);
        for (int m = 0; m <= order; ++m) out.push_back({m, m, c[static_cast<std::size_t>(m)].rational()});
        return out;
    }
    LaurentSeries L = laurent_at(k, iv, n, order);
    for (int m = 0; m <= order; ++m) out.push_back({m, m, L.a[static_cast<std::size_t>(m)].rational()});
    for (std::size_t j = 0; j < L.b.size(); ++j)
        for (int m = 0; m <= order; ++m) out.push_back({m, m - L.pole_orders[j], L.b[j][static_cast<std::size_t>(m)].rational()});
    return out;
}

inline Rational power_of(const Rational& t, int d) {
    return d >= 0 ? rational_pow(t, static_cast<unsigned>(d)) : Rational(1) / rational_pow(t, static_cast<unsigned>(-d));
}

} // namespace detail

inline ResidualReport expansion_instance(int idx, const ExpansionSweepConfig& c) {
    auto g = detail::instance_rng(c.seed, "expansion#" + std::to_string(idx));
    std::vector<MultiIndex> pool;
    for (int w = 1; w <= c.max_weight; ++w)
        for (const auto& k : indices_of_weight(w, c.max_depth)) pool.push_back(k);
    MultiIndex k = pool[static_cast<std::size_t>(detail::uniform(g, 0, static_cast<long>(pool.size()) - 1))];
    long m1 = detail::uniform(g, -c.window, c.window - 1);
    long m2 = detail::uniform(g, m1 + 1, c.window);
    IntervalSpec iv = IntervalSpec::open(m1, m2);
    long n = detail::uniform(g, -c.center_range, c.center_range);
    Rational t = detail::uniform(g, 0, 1) ? c.t : Rational(-c.t);

    // Extra orders locate the first omitted nonzero term.
    const int extra = 6;
    auto terms = detail::series_terms(k, iv, n, c.order + extra);
    Rational partial = 0;
    for (const auto& st : terms)
        if (st.m <= c.order) partial += st.c * detail::power_of(t, st.degree);
    Rational omitted = 0;
    int omitted_m = -1;
    for (int m = c.order + 1; m <= c.order + extra && omitted_m < 0; ++m) {
        Rational size = 0;
        for (const auto& st : terms)
            if (st.m == m) size += abs(st.c * detail::power_of(t, st.degree));
        if (size != 0) {
            omitted = size;
            omitted_m = m;
        }
    }
    Rational direct = eval_finite_rational(k, iv, n + t);
    Rational err = abs(direct - partial);

    ResidualReport rep;
    rep.theorem = "expansion_fidelity";
    rep.params = {{"index", k.str()}, {"interval", iv.str()}, {"center", n}, {"t", to_string(t)}, {"order", c.order}};
    rep.blocks = {{"direct", format_real(to_real(direct), 30)}, {"series", format_real(to_real(partial), 30)}};
    rep.residual = format_bound(to_real(err));
    rep.residual_magnitude = to_real(err);
    // No omitted nonzero term means the truncated series is the whole function.
    rep.allowance = to_real(2 * omitted);
    rep.pass = omitted_m < 0 ? err == 0 : err <= 2 * omitted;
    rep.extra = {{"first_omitted_order", omitted_m}, {"kind", (-m2 < n && n < -m1) ? "laurent" : "taylor"}};
    return rep;
}

inline std::vector<ResidualReport> expansion_sweep(const ExpansionSweepConfig& c) {
    std::vector<int> ids(static_cast<std::size_t>(c.instances));
    for (int i = 0; i < c.instances; ++i) ids[static_cast<std::size_t>(i)] = i;
    return ordered_map(ids, [&](int i) { return expansion_instance(i, c); }, c.threads);
}

// ---------------------------------------------------------------------------------------------------------------
// Kernel expansions of pi cot(pi s) and pi / sin(pi s) against direct evaluation.

inline ResidualReport kernel_report(KernelKind kind, long n, int terms) {
    KernelExpansion e = kernel_expand(kind, n, terms);
    const Real& pi = pi_real();
    Real worst_excess = -1;
    Real worst = 0;
    for (double tv : {-0.4, -0.3, -0.2, -0.1, -0.05, 0.05, 0.1, 0.2, 0.3, 0.4}) {
        Real t(tv);
        Real s = Real(n) + t;
        Real direct = kind == KernelKind::Cot ? pi * cos(pi * s) / sin(pi * s) : pi / sin(pi * s);
        BoundedReal series = e.evaluate(t);
        Real diff = abs(direct - series.value);
        Real allowed = series.bound + Real(1e-40);
        worst = std::max(worst, diff);
        worst_excess = std::max(worst_excess, diff - allowed);
    }
    Rational lead = e.leading();
    Rational want = kind == KernelKind::Cot ? Rational(1) : Rational(sign_pow(n));
    ResidualReport rep;
    rep.theorem = "kernel_expansion";
    rep.params = {{"kernel", kind == KernelKind::Cot ? "cot" : "csc"}, {"center", n}, {"terms", terms}};
    rep.blocks = {{"leading", to_string(lead)}};
    rep.residual = format_bound(worst);
    rep.residual_magnitude = worst;
    rep.allowance = worst - worst_excess;
    rep.pass = worst_excess <= 0 && lead == want;
    return rep;
}

inline std::vector<ResidualReport> kernel_sweep(long center_range = 5, int terms = 40) {
    std::vector<ResidualReport> out;
    for (KernelKind kind : {KernelKind::Cot, KernelKind::Csc})
        for (long n = -center_range; n <= center_range; ++n) out.push_back(kernel_report(kind, n, terms));
    return out;
}

// ---------------------------------------------------------------------------------------------------------------
// Algebraic laws of the two products and exact inversion of the regularization decomposition.

struct AlgebraTally {
    long checked = 0;
    long failed = 0;
    std::string first_failure;
    void note(bool ok, const std::string& what) {
        ++checked;
        if (!ok && failed++ == 0) first_failure = what;
    }
    bool pass() const { return failed == 0 && checked > 0; }
};

namespace detail {

inline StuffleWord random_stuffle_word(std::mt19937_64& g, int weight, int level) {
    StuffleWord w;
    while (weight > 0) {
        int k = static_cast<int>(uniform(g, 1, weight));
        w.push_back({k, static_cast<int>(uniform(g, 0, level - 1))});
        weight -= k;
    }
    return w;
}

inline ShuffleWord random_shuffle_word(std::mt19937_64& g, int weight, int level) {
    ShuffleWord w;
    for (int i = 0; i < weight; ++i)
        w.push_back(uniform(g, 0, 1) ? XLetter::x0() : XLetter::x1(static_cast<int>(uniform(g, 0, level - 1))));
    return w;
}

// A polynomial with up to three words whose weights are at most `weight`.
template <class L, class Gen>
WordPoly<L> random_poly(std::mt19937_64& g, int weight, int level, Gen gen) {
    WordPoly<L> p(level);
    long terms = uniform(g, 1, 3);
    for (long i = 0; i < terms; ++i) p.add(gen(g, static_cast<int>(uniform(g, 0, weight)), level), make_rational(uniform(g, -5, 5), uniform(g, 1, 4)));
    return p;
}

template <class L, class Gen, class Prod>
void product_laws(AlgebraTally& tally, std::mt19937_64& g, int total_weight, int level, Gen gen, Prod prod, const std::string& tag) {
    int wa = static_cast<int>(uniform(g, 0, total_weight));
    int wb = static_cast<int>(uniform(g, 0, total_weight - wa));
    int wc = total_weight - wa - wb;
    auto a = random_poly<L>(g, wa, level, gen);
    auto b = random_poly<L>(g, wb, level, gen);
    auto c = random_poly<L>(g, wc, level, gen);
    WordPoly<L> one(Word<L>{}, level);
    tally.note(prod(a, b) == prod(b, a), tag + " commutativity");
    tally.note(prod(prod(a, b), c) == prod(a, prod(b, c)), tag + " associativity");
    tally.note(prod(a, one) == a && prod(one, a) == a, tag + " unit");
}

} // namespace detail

inline AlgebraTally product_law_sweep(int pairs = 500, int max_weight = 7, std::uint64_t seed = 42) {
    AlgebraTally t;
    auto sg = [](std::mt19937_64& g, int w, int lv) { return detail::random_stuffle_word(g, w, lv); };
    auto hg = [](std::mt19937_64& g, int w, int lv) { return detail::random_shuffle_word(g, w, lv); };
    auto sp = [](const WordPoly<YLetter>& a, const WordPoly<YLetter>& b) { return stuffle(a, b); };
    auto hp = [](const WordPoly<XLetter>& a, const WordPoly<XLetter>& b) { return shuffle(a, b); };
    for (int i = 0; i < pairs; ++i) {
        auto g = detail::instance_rng(seed, "laws#" + std::to_string(i));
        int level = i % 2 ? 2 : 1;
        detail::product_laws<YLetter>(t, g, max_weight, level, sg, sp, "stuffle");
        detail::product_laws<XLetter>(t, g, max_weight, level, hg, hp, "shuffle");
    }
    return t;
}

inline AlgebraTally decomposition_sweep(int max_weight = 6) {
    AlgebraTally t;
    for (int w = 1; w <= max_weight; ++w) {
        for (const auto& k : indices_of_weight(w, w)) {
            StuffleWord sw = to_stuffle_word(k);
            t.note(stuffle_reconstruct(stuffle_decompose(sw)) == WordPoly<YLetter>(sw), "stuffle " + k.str());
        }
        for (int mask = 0; mask < (1 << w); ++mask) {
            ShuffleWord hw;
            for (int i = 0; i < w; ++i) hw.push_back((mask >> i) & 1 ? XLetter::x1() : XLetter::x0());
            t.note(shuffle_reconstruct(shuffle_decompose(hw)) == WordPoly<XLetter>(hw), "shuffle " + to_string(hw));
        }
    }
    return t;
}

// ---------------------------------------------------------------------------------------------------------------
// Case lists for the parity sweeps.

struct ParityCase {
    MultiIndex k;
    ColorVector mu;
    int q = 2;
    RegKind kind = RegKind::Stuffle;
};

inline ResidualReport run_parity_case(const ParityCase& c) {
    if (c.mu.level() == 1) return c.kind == RegKind::Stuffle ? stuffle_parity_residual(c.k, c.q) : shuffle_parity_residual(c.k, c.q);
    return cyclotomic_parity_residual(c.k, c.mu, c.q, c.kind);
}

// Level 1, every index with weight <= max_weight and depth <= max_depth.
inline std::vector<ParityCase> parity_cases(int max_weight, int max_depth, const std::vector<int>& qs, const std::vector<RegKind>& kinds) {
    std::vector<ParityCase> out;
    for (RegKind kind : kinds)
        for (int w = 1; w <= max_weight; ++w)
            for (const auto& k : indices_of_weight(w, max_depth))
                for (int q : qs) out.push_back({k, ColorVector::trivial(1, k.depth()), q, kind});
    return out;
}

// Every color vector of the given level; (q, prod mu) = (1, 1) is skipped.
inline std::vector<ParityCase> cyclotomic_cases(int level, int max_weight, int max_depth, const std::vector<int>& qs,
                                                const std::vector<RegKind>& kinds) {
    std::vector<ParityCase> out;
    for (RegKind kind : kinds)
        for (int w = 1; w <= max_weight; ++w)
            for (const auto& k : indices_of_weight(w, max_depth)) {
                int r = k.depth();
                long count = 1;
                for (int i = 0; i < r; ++i) count *= level;
                for (long code = 0; code < count; ++code) {
                    std::vector<int> e;
                    for (long c = code, i = 0; i < r; ++i, c /= level) e.push_back(static_cast<int>(c % level));
                    ColorVector mu(level, e);
                    for (int q : qs)
                        if (!(q == 1 && mu.product() == 0)) out.push_back({k, mu, q, kind});
                }
            }
    return out;
}

// Seeded finite-window instances; straddling windows go to the mixed form.
struct FiniteParityCase {
    MultiIndex k;
    int q = 2;
    IntervalSpec iv;
    long trunc = 10000;
};

inline std::vector<FiniteParityCase> finite_parity_cases(int count, std::uint64_t seed, long trunc, int max_weight = 4, int max_depth = 3,
                                                         long window = 6) {
    std::vector<MultiIndex> pool{MultiIndex()};
    for (int w = 1; w <= max_weight; ++w)
        for (const auto& k : indices_of_weight(w, max_depth)) pool.push_back(k);
    std::vector<FiniteParityCase> out;
    for (int i = 0; i < count; ++i) {
        auto g = detail::instance_rng(seed, "finite-parity#" + std::to_string(i));
        FiniteParityCase c;
        c.k = pool[static_cast<std::size_t>(detail::uniform(g, 0, static_cast<long>(pool.size()) - 1))];
        c.q = static_cast<int>(detail::uniform(g, 2, 4));
        long m1 = detail::uniform(g, -window, window - 1);
        c.iv = IntervalSpec::open(m1, detail::uniform(g, m1 + 1, window));
        c.trunc = trunc;
        out.push_back(c);
    }
    return out;
}

inline ResidualReport run_finite_parity_case(const FiniteParityCase& c) {
    bool mixed = *c.iv.m1 < 0 && 0 < *c.iv.m2;
    return mixed ? mixed_window_parity_residual(c.k, c.q, c.iv, c.trunc) : finite_parity_residual(c.k, c.q, c.iv, c.trunc);
}

// ---------------------------------------------------------------------------------------------------------------
// Decay of the finite-M gap along increasing M.

inline ResidualReport corollary_decay_report(const MultiIndex& k, int q, const std::vector<ResidualReport>& runs) {
    ResidualReport rep;
    rep.theorem = "corollary_M_decay";
    rep.params = {{"index", k.str()}, {"q", q}};
    json gaps = json::array();
    bool ok = !runs.empty();
    bool all_zero = true;
    Real prev = -1, last = 0, last_allowance = 0;
    for (const auto& r : runs) {
        auto [g, allowance] = corollary_gap(r);
        gaps.push_back({{"M", r.params.at("M")}, {"gap", format_bound(g)}, {"allowance", format_bound(allowance)}});
        bool zero = g <= allowance;
        all_zero = all_zero && zero;
        // Non-increasing, up to the gap allowance of the larger M.
        if (prev >= 0 && g > prev + allowance) ok = false;
        ok = ok && r.pass;
        prev = g;
        last = g;
        last_allowance = allowance;
        rep.blocks.emplace_back("M=" + r.params.at("M").dump(), format_bound(g));
    }
    if (runs.size() >= 2 && !all_zero) {
        auto [g0, a0] = corollary_gap(runs.front());
        ok = ok && last < g0;
    }
    rep.residual = format_bound(last);
    rep.residual_magnitude = last;
    rep.allowance = last_allowance;
    rep.pass = ok;
    rep.extra = {{"gaps", gaps}, {"identically_zero", all_zero}};
    return rep;
}

// ---------------------------------------------------------------------------------------------------------------
// Depth-reduction certificates for every admissible index whose weight and depth have different parity.

inline std::vector<MultiIndex> certificate_targets(int max_weight, int max_depth = 0) {
    std::vector<MultiIndex> out;
    for (int w = 2; w <= max_weight; ++w)
        for (const auto& k : indices_of_weight(w, max_depth > 0 ? max_depth : w))
            if (k.admissible() && (w - k.depth()) % 2 != 0) out.push_back(k);
    return out;
}

// ---------------------------------------------------------------------------------------------------------------
// Convergence of truncated sums to the stuffle-regularized value at T = zeta_(0,M)(1).

inline ResidualReport regularization_limit_report(const MultiIndex& k, const std::vector<long>& Ms) {
    RegPoly p = reg_stuffle(k);
    ResidualReport rep;
    rep.theorem = "regularization_limit";
    rep.params = {{"index", k.str()}};
    std::vector<Real> d, bound;
    for (long M : Ms) {
        Real T = truncated_zeta_real(MultiIndex{1}, M);
        Real trunc = truncated_zeta_real(k, M);
        BoundedComplex v = p.evaluate(BoundedComplex(Complex(T), abs(T) * Real(M) * unit_roundoff()));
        Real b = v.bound + abs(trunc) * Real(M) * Real(k.depth() + 2) * unit_roundoff();
        d.push_back(abs(trunc - v.value.re));
        bound.push_back(b);
        rep.blocks.emplace_back("M=" + std::to_string(M), format_bound(d.back()));
    }
    bool all_zero = true;
    for (std::size_t i = 0; i < d.size(); ++i) all_zero = all_zero && d[i] <= bound[i];
    bool ok = true;
    json ratios = json::array();
    for (std::size_t i = 1; i < d.size(); ++i) {
        if (all_zero) break;
        Real ratio = d[i] / d[i - 1];
        ratios.push_back(format_real(ratio, 6));
        ok = ok && ratio < Real(0.75);
    }
    rep.residual = format_bound(d.back());
    rep.residual_magnitude = d.back();
    rep.allowance = bound.back();
    rep.pass = ok;
    rep.extra = {{"ratios", ratios}, {"identically_zero", all_zero}};
    return rep;
}

// ---------------------------------------------------------------------------------------------------------------
// Numeric products against the stuffle product of their words: zeta(a) zeta(b) = sum_w c_w zeta(w).

inline BoundedReal stuffle_compatibility(const MultiIndex& a, const MultiIndex& b) {
    BoundedReal lhs = zeta(a) * zeta(b);
    BoundedReal rhs(Real(0), Real(0));
    for (const auto& [w, c] : stuffle(to_stuffle_word(a), to_stuffle_word(b)))
        rhs += BoundedReal::exact(c) * zeta(from_stuffle_word(w).first);
    return lhs - rhs;
}

inline std::vector<std::pair<MultiIndex, MultiIndex>> admissible_pairs(int count, int max_weight, std::uint64_t seed) {
    std::vector<MultiIndex> pool;
    for (int w = 2; w <= max_weight; ++w)
        for (const auto& k : indices_of_weight(w, w))
            if (k.admissible()) pool.push_back(k);
    std::vector<std::pair<MultiIndex, MultiIndex>> out;
    auto g = detail::instance_rng(seed, "admissible-pairs");
    for (int i = 0; i < count; ++i) {
        auto pick = [&] { return pool[static_cast<std::size_t>(detail::uniform(g, 0, static_cast<long>(pool.size()) - 1))]; };
        out.emplace_back(pick(), pick());
    }
    return out;
}

} // namespace mzvlab
