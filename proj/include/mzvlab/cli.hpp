#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "core_indices.hpp"
#include "finite_hurwitz.hpp"
#include "mzv_numeric.hpp"
#include "parity_verifier.hpp"
#include "sweeps.hpp"
#include "word_algebra.hpp"

namespace mzvlab::cli {

// Every setting, after merging defaults, config file, MZVLAB_* environment and flags (in increasing priority).
struct RunConfig {
    std::string index;
    std::optional<std::string> interval;
    std::string shift = "0";
    std::optional<std::string> colors;
    std::optional<int> q;
    std::optional<std::string> kind;
    double eps = 1e-12;
    int precision = 30;
    long trunc = 10000;
    std::uint64_t seed = 42;
    std::string format = "auto";
    std::optional<int> max_weight;
    std::optional<int> max_depth;
    long window = 12;
    std::optional<std::string> lemma;
    long n_max = 10000;
    std::vector<long> M;
    int instances = 0;
    int max_order = 8;
    std::string word;
    unsigned threads = 0;
    bool star = false;
    bool printed_colors = false;
    bool uncolored = false;
};

// Option names shared by flags, environment variables and the config file.
inline const std::vector<std::string>& setting_keys() {
    static const std::vector<std::string> keys{"index", "interval", "shift", "colors", "q", "kind", "eps", "precision", "trunc", "seed",
                                               "format", "max-weight", "max-depth", "window", "lemma", "n-max", "M", "instances",
                                               "max-order", "word", "threads", "star", "printed-colors", "uncolored"};
    return keys;
}

inline std::string env_name(const std::string& key) {
    std::string out = "MZVLAB_";
    for (char c : key) out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

namespace detail {

inline long to_long(const std::string& key, const std::string& v) { return mzvlab::detail::parse_long(v, 0, key.c_str()); }

inline bool to_bool(const std::string& key, const std::string& v) {
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw ParseError(key + ": expected a boolean, got '" + v + "'", 0);
}

inline int positive(const std::string& key, long v) {
    if (v < 1) throw ParameterError(key + " must be positive");
    return static_cast<int>(v);
}

inline std::vector<long> to_long_list(const std::string& key, const std::string& v) {
    std::vector<long> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = v.find(',', start);
        std::string piece = v.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        out.push_back(mzvlab::detail::parse_long(piece, start, key.c_str()));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

} // namespace detail

inline void apply_setting(RunConfig& c, const std::string& key, const std::string& v) {
    using namespace detail;
    if (key == "index") c.index = v;
    else if (key == "interval") c.interval = v;
    else if (key == "shift") c.shift = v;
    else if (key == "colors") c.colors = v;
    else if (key == "q") c.q = static_cast<int>(to_long(key, v));
    else if (key == "kind") c.kind = v;
    else if (key == "eps") {
        char* end = nullptr;
        c.eps = std::strtod(v.c_str(), &end);
        if (v.empty() || *end) throw ParseError("eps: not a number", static_cast<std::size_t>(end - v.c_str()));
        if (!(c.eps > 0)) throw ParameterError("eps must be positive");
    } else if (key == "precision") {
        c.precision = positive(key, to_long(key, v));
        if (c.precision > kWorkingDigits) throw PrecisionError("precision above the " + std::to_string(kWorkingDigits) + "-digit working precision");
    } else if (key == "trunc") c.trunc = positive(key, to_long(key, v));
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(to_long(key, v));
    else if (key == "format") {
        if (v != "json" && v != "table" && v != "auto") throw ParameterError("format must be json or table");
        c.format = v;
    } else if (key == "max-weight") c.max_weight = positive(key, to_long(key, v));
    else if (key == "max-depth") c.max_depth = positive(key, to_long(key, v));
    else if (key == "window") c.window = positive(key, to_long(key, v));
    else if (key == "lemma") c.lemma = v;
    else if (key == "n-max") c.n_max = positive(key, to_long(key, v));
    else if (key == "M") {
        c.M = to_long_list(key, v);
        for (long m : c.M) positive(key, m);
    } else if (key == "instances") c.instances = positive(key, to_long(key, v));
    else if (key == "max-order") c.max_order = static_cast<int>(to_long(key, v));
    else if (key == "word") c.word = v;
    else if (key == "threads") c.threads = static_cast<unsigned>(to_long(key, v));
    else if (key == "star") c.star = to_bool(key, v);
    else if (key == "printed-colors") c.printed_colors = to_bool(key, v);
    else if (key == "uncolored") c.uncolored = to_bool(key, v);
    else throw ParameterError("unknown setting '" + key + "'");
}

// key=value lines; '#' starts a comment.
inline std::map<std::string, std::string> read_config(std::istream& in, const std::string& name) {
    std::map<std::string, std::string> out;
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string_view t = mzvlab::detail::trim(line);
        if (t.empty()) continue;
        auto eq = t.find('=');
        if (eq == std::string_view::npos) throw ParseError(name + ":" + std::to_string(lineno) + ": expected key=value", 0);
        std::string key(mzvlab::detail::trim(t.substr(0, eq)));
        std::string value(mzvlab::detail::trim(t.substr(eq + 1)));
        if (std::find(setting_keys().begin(), setting_keys().end(), key) == setting_keys().end())
            throw ParseError(name + ":" + std::to_string(lineno) + ": unknown key '" + key + "'", 0);
        out[key] = value;
    }
    return out;
}

// ---------------------------------------------------------------------------------------------------------------

class Emitter {
public:
    Emitter(std::ostream& out, bool json_lines) : out_(out), json_(json_lines) {}

    void report(const ResidualReport& r) {
        ++count_;
        if (!r.pass) ++failed_;
        if (json_) {
            out_ << r.to_json().dump() << '\n';
        } else {
            out_ << (r.pass ? "PASS " : "FAIL ") << r.theorem;
            for (const auto& [k, v] : r.params.items()) out_ << ' ' << k << '=' << (v.is_string() ? v.get<std::string>() : v.dump());
            out_ << "  residual=" << format_bound(r.residual_magnitude) << " allowance=" << format_bound(r.allowance) << '\n';
        }
        out_.flush();
    }

    int finish(const std::string& command, json extra = json::object()) {
        bool ok = failed_ == 0 && count_ > 0;
        if (json_) {
            json s = {{"summary", true}, {"command", command}, {"reports", count_}, {"failed", failed_}, {"pass", ok}};
            for (auto& [k, v] : extra.items()) s[k] = v;
            out_ << s.dump() << '\n';
        } else {
            out_ << (ok ? "PASS" : "FAIL") << ' ' << command << ": " << count_ - failed_ << '/' << count_ << " passed\n";
        }
        return ok ? 0 : 1;
    }

private:
    std::ostream& out_;
    bool json_;
    long count_ = 0;
    long failed_ = 0;
};

namespace detail {

inline std::vector<RegKind> kinds_of(const RunConfig& c) {
    if (!c.kind) return {RegKind::Stuffle, RegKind::Shuffle};
    if (*c.kind == "stuffle") return {RegKind::Stuffle};
    if (*c.kind == "shuffle") return {RegKind::Shuffle};
    throw ParameterError("kind must be stuffle or shuffle");
}

inline RegKind one_kind(const RunConfig& c) {
    auto k = kinds_of(c);
    if (k.size() != 1) throw ParameterError("--kind stuffle|shuffle is required");
    return k.front();
}

inline std::optional<ColorVector> colors_of(const RunConfig& c, const MultiIndex& k) {
    if (!c.colors) return std::nullopt;
    ColorVector mu = parse_colors(*c.colors);
    if (mu.size() != k.depth()) throw RangeError("colors length must match the index depth");
    return mu;
}

inline MultiIndex required_index(const RunConfig& c) {
    if (c.index.empty()) throw ParameterError("--index is required");
    return parse_index(c.index);
}

inline std::vector<int> qs_of(const RunConfig& c, std::vector<int> fallback) { return c.q ? std::vector<int>{*c.q} : fallback; }

} // namespace detail

// ---------------------------------------------------------------------------------------------------------------

inline int cmd_eval(const std::string& what, const RunConfig& c, std::ostream& out) {
    using namespace detail;
    mzvlab::detail::check_eps(c.eps);
    bool as_json = c.format == "json";
    json rec = {{"command", "eval " + what}};
    std::string value;
    if (what == "finite") {
        MultiIndex k = parse_index(c.index);
        IntervalSpec iv = parse_interval(c.interval.value_or("(0,1)"));
        ShiftParam s = parse_shift(c.shift);
        ExactValue v = eval_finite(k, iv, s, c.star, colors_of(c, k));
        value = v.is_exact() ? v.str() : v.bounded().str(c.precision);
        rec.update({{"index", k.str()}, {"interval", iv.str()}, {"shift", to_string(s.s)}, {"star", c.star}});
    } else if (what == "mzv" || what == "star") {
        MultiIndex k = required_index(c);
        auto mu = colors_of(c, k);
        BoundedComplex v = mu ? (what == "mzv" ? colored_li(k, *mu, c.eps) : colored_li_star(k, *mu))
                              : BoundedComplex(what == "mzv" ? zeta(k, c.eps) : zeta_star(k, c.eps));
        if (v.bound > Real(c.eps)) throw PrecisionError("certified bound exceeds eps");
        value = v.str(c.precision);
        rec["index"] = k.str();
    } else if (what == "reg") {
        MultiIndex k = parse_index(c.index);
        ColorVector mu = colors_of(c, k).value_or(ColorVector::trivial(1, k.depth()));
        RegPoly p = one_kind(c) == RegKind::Stuffle ? reg_stuffle(k, mu, c.eps) : reg_shuffle(k, mu, c.eps);
        if (p.max_bound() > Real(c.eps)) throw PrecisionError("certified bound exceeds eps");
        value = p.str(c.precision);
        rec.update({{"index", k.str()}, {"kind", *c.kind}});
    } else if (what == "alt") {
        MultiIndex k = required_index(c);
        if (k.depth() != 1) throw ParameterError("alt takes a single argument s");
        value = alt_zeta(k.at(1), c.eps).str(c.precision);
        rec["s"] = k.at(1);
    } else if (what == "decompose") {
        WordLiteral w = parse_word(c.word);
        json parts = json::array();
        if (w.y) {
            for (const auto& p : stuffle_decompose(*w.y, w.level)) parts.push_back(to_string(p));
        } else {
            for (const auto& p : shuffle_decompose(*w.x, w.level)) parts.push_back(to_string(p));
        }
        rec.update({{"word", c.word}, {"parts", parts}});
        for (std::size_t i = 0; i < parts.size(); ++i) value += (i ? "; " : "") + parts[i].get<std::string>();
    } else {
        throw ParameterError("unknown eval target '" + what + "' (finite, mzv, star, reg, alt, decompose)");
    }
    if (as_json) {
        rec["value"] = value;
        out << rec.dump() << '\n';
    } else {
        out << value << '\n';
    }
    return 0;
}

inline int cmd_verify(const std::string& what, const RunConfig& c, std::ostream& out) {
    using namespace detail;
    Emitter em(out, c.format != "table");
    auto emit = [&](const ResidualReport& r) { em.report(r); };
    std::string command = "verify " + what;

    if (what == "prop23") {
        IdentitySweepConfig sc;
        sc.max_weight = c.max_weight.value_or(6);
        sc.max_depth = c.max_depth.value_or(3);
        sc.window = c.window;
        sc.seed = c.seed;
        sc.colored = !c.uncolored;
        sc.threads = c.threads;
        if (!c.index.empty()) {
            MultiIndex k = parse_index(c.index);
            emit(identity_case_report({k, colors_of(c, k)}, sc));
        } else {
            stream_ordered(identity_cases(sc), [&](const IdentityCase& ic) { return identity_case_report(ic, sc); }, emit, sc.threads);
        }
    } else if (what == "expansion") {
        ExpansionSweepConfig ec;
        if (c.instances) ec.instances = c.instances;
        ec.order = c.max_order;
        ec.seed = c.seed;
        ec.threads = c.threads;
        std::vector<int> ids(static_cast<std::size_t>(ec.instances));
        for (int i = 0; i < ec.instances; ++i) ids[static_cast<std::size_t>(i)] = i;
        stream_ordered(ids, [&](int i) { return expansion_instance(i, ec); }, emit, ec.threads);
        for (const auto& r : kernel_sweep()) emit(r);
    } else if (what == "parity") {
        std::string kind = c.kind.value_or("stuffle");
        if (kind == "finite") {
            if (!c.index.empty() || c.interval) {
                FiniteParityCase fc{parse_index(c.index), c.q.value_or(2), parse_interval(c.interval.value_or("(0,8)")), c.trunc};
                emit(run_finite_parity_case(fc));
            } else {
                auto cases = finite_parity_cases(c.instances ? c.instances : 50, c.seed, c.trunc);
                stream_ordered(cases, run_finite_parity_case, emit, c.threads);
            }
        } else {
            RegKind rk = kind == "shuffle" ? RegKind::Shuffle : kind == "stuffle" ? RegKind::Stuffle
                                                                                  : throw ParameterError("kind must be stuffle, shuffle or finite");
            if (!c.index.empty()) {
                MultiIndex k = parse_index(c.index);
                emit(run_parity_case({k, ColorVector::trivial(1, k.depth()), c.q.value_or(2), rk}));
            } else {
                auto cases = parity_cases(c.max_weight.value_or(5), c.max_depth.value_or(3), qs_of(c, {2, 3, 4}), {rk});
                stream_ordered(cases, run_parity_case, emit, c.threads);
                if (rk == RegKind::Stuffle)
                    for (int k1 = 1; k1 <= 4; ++k1)
                        for (int q : qs_of(c, {2, 3})) emit(r1_example_residual(k1, q));
            }
        }
    } else if (what == "cyclotomic") {
        if (!c.index.empty()) {
            MultiIndex k = parse_index(c.index);
            ColorVector mu = colors_of(c, k).value_or(ColorVector::trivial(1, k.depth()));
            emit(cyclotomic_parity_residual(k, mu, c.q.value_or(2), one_kind(c), c.printed_colors));
        } else {
            int level = c.colors ? parse_colors(*c.colors).level() : 2;
            auto cases = cyclotomic_cases(level, c.max_weight.value_or(4), c.max_depth.value_or(2), qs_of(c, {1, 2, 3}), kinds_of(c));
            stream_ordered(cases, run_parity_case, emit, c.threads);
        }
    } else if (what == "bounds") {
        BoundGrid g;
        g.n_max = c.n_max;
        if (!c.M.empty()) g.M_list = c.M;
        std::vector<BoundLemma> lemmas;
        if (c.lemma) lemmas.push_back(parse_lemma(*c.lemma));
        else lemmas = {BoundLemma::StarLog, BoundLemma::Tail, BoundLemma::Positive, BoundLemma::FarWindow};
        if (!c.index.empty()) {
            if (lemmas.size() != 1) throw ParameterError("--index needs a single --lemma");
            MultiIndex k = parse_index(c.index);
            long M = g.M_list.front();
            switch (lemmas.front()) {
            case BoundLemma::StarLog: emit(star_log_bound(k, g.n_max)); break;
            case BoundLemma::Tail: emit(tail_bound(k, g.n_max)); break;
            case BoundLemma::Positive:
                for (int s = 1; s <= 2; ++s) emit(positive_bound(k, s, c.q.value_or(2), M));
                break;
            case BoundLemma::FarWindow: emit(far_window_bound(k, c.q.value_or(2), M)); break;
            }
        } else {
            for (BoundLemma l : lemmas)
                for (const auto& r : bound_suite(l, g)) emit(r);
        }
    } else if (what == "corollaryM") {
        std::vector<MultiIndex> ks = c.index.empty() ? std::vector<MultiIndex>{MultiIndex{2}, MultiIndex{2, 1}, MultiIndex{1}}
                                                     : std::vector<MultiIndex>{parse_index(c.index)};
        std::vector<long> Ms = c.M.empty() ? std::vector<long>{1024, 2048, 4096} : c.M;
        int q = c.q.value_or(2);
        for (const auto& k : ks) {
            std::vector<ResidualReport> runs;
            for (long M : Ms) {
                runs.push_back(corollary_M_residual(k, q, M));
                emit(runs.back());
            }
            emit(corollary_decay_report(k, q, runs));
        }
    } else if (what == "depthcert") {
        std::vector<MultiIndex> ks = c.index.empty() ? certificate_targets(c.max_weight.value_or(5)) : std::vector<MultiIndex>{parse_index(c.index)};
        for (const auto& k : ks) emit(depth_reduction_certificate(k).report);
    } else {
        throw ParameterError("unknown verify target '" + what + "' (prop23, expansion, parity, cyclotomic, bounds, corollaryM, depthcert)");
    }
    return em.finish(command);
}

// ---------------------------------------------------------------------------------------------------------------

using EnvLookup = std::function<const char*(const char*)>;

// Full command line handling. Returns the process exit code: 0 pass, 1 a check failed, 2 usage or domain error.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err, const EnvLookup& env = [](const char* n) { return std::getenv(n); }) {
    CLI::App app{"Finite and multiple Hurwitz zeta values, regularization and parity identity checks", "mzvlab"};
    app.require_subcommand(1);
    std::map<std::string, std::string> flags;
    std::map<std::string, bool> switches;
    std::string config_path;
    std::string target;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("target", target, "what to evaluate or verify")->required();
        for (const auto& key : setting_keys()) {
            if (key == "star" || key == "printed-colors" || key == "uncolored") {
                sub->add_flag("--" + key, switches[key]);
            } else {
                sub->add_option("--" + key, flags[key]);
            }
        }
        sub->add_option("--config", config_path, "key=value settings file");
    };
    CLI::App* eval = app.add_subcommand("eval", "evaluate finite|mzv|star|reg|alt|decompose");
    CLI::App* verify = app.add_subcommand("verify", "verify prop23|expansion|parity|cyclotomic|bounds|corollaryM|depthcert");
    add_common(eval);
    add_common(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    }
    CLI::App* sub = eval->parsed() ? eval : verify;

    try {
        std::map<std::string, std::string> merged;
        if (config_path.empty())
            if (const char* p = env("MZVLAB_CONFIG")) config_path = p;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw ParameterError("cannot open config file '" + config_path + "'");
            merged = read_config(in, config_path);
        }
        for (const auto& key : setting_keys())
            if (const char* v = env(env_name(key).c_str())) merged[key] = v;
        for (const auto& key : setting_keys()) {
            auto* opt = sub->get_option_no_throw("--" + key);
            if (opt && opt->count() > 0) merged[key] = switches.count(key) ? "true" : flags[key];
        }
        RunConfig c;
        for (const auto& [k, v] : merged) apply_setting(c, k, v);
        if (sub == eval) {
            if (c.format == "auto") c.format = "table";
            return cmd_eval(target, c, out);
        }
        return cmd_verify(target, c, out);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

} // namespace mzvlab::cli
