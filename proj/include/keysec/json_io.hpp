#pragma once

// JSON import/export. Distributions travel as
//   {"n": <bits>, "atoms": [[<key bits, transmission order>, <prob>], ...],
//    "background": "uniform" | "zero"}
// where unlisted keys share the leftover mass equally ("uniform") or are
// impossible ("zero"). Probabilities are numbers in double mode and "num/den"
// strings in exact mode; the importer accepts either in either mode.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "keysec/bounds.hpp"
#include "keysec/distribution.hpp"
#include "keysec/oracle.hpp"
#include "keysec/pipeline.hpp"

namespace keysec {

using ordered_json = nlohmann::ordered_json;

// Exact conversion; every double is a dyadic rational.
inline Rational rational_from_double(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("rational_from_double: non-finite value");
    int exp = 0;
    double m = std::frexp(v, &exp);  // v = m * 2^exp, |m| in [0.5, 1)
    std::int64_t mant = std::int64_t(std::ldexp(m, 53));
    exp -= 53;
    if (mant == 0) return Rational(0);
    while ((mant & 1) == 0 && exp < 0) {
        mant >>= 1;
        ++exp;
    }
    Rational r(mant);
    // apply 2^exp in chunks to stay inside 64-bit intermediates
    while (exp > 0) {
        int step = std::min(exp, 30);
        r *= Rational::pow2(step);
        exp -= step;
    }
    while (exp < 0) {
        int step = std::min(-exp, 30);
        r /= Rational::pow2(step);
        exp += step;
    }
    return r;
}

inline Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    if (slash == std::string::npos) {
        // allow "2^-k" alongside integers
        auto caret = text.find('^');
        if (caret != std::string::npos) {
            if (text.substr(0, caret) != "2") throw std::invalid_argument("only base-2 powers supported");
            return Rational::pow2(std::stoi(text.substr(caret + 1)));
        }
        return Rational(std::stoll(text));
    }
    return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
}

namespace detail {

template <class R>
R prob_from_json(const ordered_json& j) {
    if constexpr (scalar_traits<R>::exact) {
        if (j.is_string()) return parse_rational(j.get<std::string>());
        return rational_from_double(j.get<double>());
    } else {
        if (j.is_string()) return parse_rational(j.get<std::string>()).to_double();
        return j.get<double>();
    }
}

template <class R>
ordered_json prob_to_json(const R& v) {
    if constexpr (scalar_traits<R>::exact) return v.str();
    else return v;
}

}  // namespace detail

template <class R>
ordered_json distribution_to_json(const BasicKeyDistribution<R>& p) {
    ordered_json atoms = ordered_json::array();
    std::string background = "zero";
    if (p.dense()) {
        // compress around the most frequent value
        std::vector<R> sorted = p.dense_probs();
        std::sort(sorted.begin(), sorted.end());
        R modal = sorted[0];
        std::size_t best_run = 0, run = 1;
        for (std::size_t i = 1; i <= sorted.size(); ++i) {
            if (i < sorted.size() && sorted[i] == sorted[i - 1]) {
                ++run;
            } else {
                if (run > best_run) {
                    best_run = run;
                    modal = sorted[i - 1];
                }
                run = 1;
            }
        }
        background = (modal == scalar_traits<R>::zero()) ? "zero" : "uniform";
        for (std::uint64_t k = 0; k < p.size(); ++k) {
            const R& v = p.dense_probs()[k];
            if (!(v == modal))
                atoms.push_back(ordered_json::array(
                    {key_to_string(k, p.bits()), detail::prob_to_json(v)}));
        }
    } else {
        background = p.background() == Background::uniform ? "uniform" : "zero";
        for (const auto& [k, v] : p.atoms())
            atoms.push_back(ordered_json::array(
                {key_to_string(k, p.bits()), detail::prob_to_json(v)}));
    }
    return ordered_json{{"n", p.bits()}, {"atoms", atoms}, {"background", background}};
}

template <class R>
BasicKeyDistribution<R> distribution_from_json(const ordered_json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("atoms") || !j.contains("background"))
        throw std::invalid_argument("distribution JSON needs n, atoms and background fields");
    const int n = j.at("n").get<int>();
    const std::string bg_name = j.at("background").get<std::string>();
    Background bg;
    if (bg_name == "uniform") bg = Background::uniform;
    else if (bg_name == "zero") bg = Background::zero;
    else throw std::invalid_argument("background must be 'uniform' or 'zero'");

    std::vector<typename BasicKeyDistribution<R>::Atom> atoms;
    for (const auto& entry : j.at("atoms")) {
        if (!entry.is_array() || entry.size() != 2)
            throw std::invalid_argument("each atom must be a [key, probability] pair");
        std::uint64_t key = key_from_string(entry.at(0).get<std::string>());
        if (int(entry.at(0).get<std::string>().size()) != n)
            throw std::invalid_argument("atom key length disagrees with n");
        atoms.push_back({key, detail::prob_from_json<R>(entry.at(1))});
    }
    auto dist = BasicKeyDistribution<R>::from_atoms(n, std::move(atoms), bg);
    if (n <= kDenseMaxBits) return dist.densified();
    return dist;
}

// ---------------------------------------------------------------------------
// Report serialization
// ---------------------------------------------------------------------------

inline ordered_json to_json(const BoundResult& r) {
    ordered_json inputs = ordered_json::object();
    for (const auto& [k, v] : r.inputs) inputs[k] = v;
    ordered_json extras = ordered_json::object();
    for (const auto& [k, v] : r.extras) extras[k] = v;
    ordered_json out{{"formula", r.formula},
                     {"value", r.value},
                     {"flag", r.flag == Soundness::valid ? "valid" : "refuted"},
                     {"clamped", r.clamped},
                     {"inputs", inputs}};
    if (!r.extras.empty()) out["extras"] = extras;
    return out;
}

inline ordered_json to_json(const oracle::VerificationReport& r) {
    ordered_json violations = ordered_json::array();
    for (const auto& v : r.violations)
        violations.push_back(ordered_json{{"instance", v.instance},
                                          {"bound", v.bound_value},
                                          {"true_value", v.true_value}});
    return ordered_json{{"bound", r.bound_name},
                        {"instances_checked", r.instances_checked},
                        {"min_slack", r.instances_checked ? r.min_slack : 0.0},
                        {"max_slack", r.instances_checked ? r.max_slack : 0.0},
                        {"seed", r.seed},
                        {"refutation_target", r.refutation_target},
                        {"passed", r.passed()},
                        {"violations", violations}};
}

inline ordered_json to_json(const pipeline::LeakProjection& p) {
    return ordered_json{{"model", pipeline::model_name(p.model)},
                        {"blocks_per_day", p.blocks_per_day},
                        {"per_block_prob", p.per_block_prob},
                        {"per_block_log2", p.per_block_log2},
                        {"block_leaks_per_day", p.block_leaks_per_day},
                        {"bit_leaks_per_day", p.bit_leaks_per_day},
                        {"mean_seconds_between_leaks",
                         std::isinf(p.mean_seconds_between_leaks) ? ordered_json("inf")
                                                                  : ordered_json(p.mean_seconds_between_leaks)},
                        {"flagged_incorrect", p.flagged_incorrect},
                        {"expectation_only", p.expectation_only}};
}

inline ordered_json to_json(const pipeline::ComparisonTable& t) {
    ordered_json rows = ordered_json::array();
    for (const auto& r : t.rows)
        rows.push_back(ordered_json{{"label", r.label},
                                    {"model", pipeline::model_name(r.model)},
                                    {"per_block_prob", r.per_block_prob},
                                    {"per_block_log2", r.per_block_log2},
                                    {"security_bits", r.security_bits},
                                    {"block_leaks_per_day", r.block_leaks_per_day},
                                    {"bit_leaks_per_day", r.bit_leaks_per_day},
                                    {"mean_days_between_leaks",
                                     std::isinf(r.mean_days_between_leaks)
                                         ? ordered_json("inf")
                                         : ordered_json(r.mean_days_between_leaks)},
                                    {"flagged", r.flagged_incorrect}});
    return ordered_json{{"params",
                         ordered_json{{"block_len", t.params.block_len},
                                      {"d_level", t.params.d_level},
                                      {"key_rate_bps", t.params.key_rate_bps},
                                      {"seed_key_bits", t.params.seed_key_bits}}},
                        {"rows", rows},
                        {"note", t.note}};
}

}  // namespace keysec
