#pragma once

// Closed-form evaluators for the security bounds this library verifies:
// subset and whole-key compromise caps from a statistical-distance level,
// average-to-individual conversions, Fano-based error-rate floors, leftover
// hashing and error-correction accounting, and authentication-code
// degradation under an imperfect key. Two formulas are kept only as
// comparison columns ("refuted"): the independent-per-bit failure reading and
// the (1-d)/2 error-rate floor. Both are disproved by explicit instances in
// constructions.hpp and the brute-force oracle.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "keysec/distribution.hpp"

namespace keysec {

enum class Soundness { valid, refuted };

struct BoundResult {
    std::string formula;
    double value = 0.0;
    Soundness flag = Soundness::valid;
    bool clamped = false;
    std::vector<std::pair<std::string, double>> inputs;
    std::vector<std::pair<std::string, double>> extras;
};

namespace detail {

inline double clamp01(double x, bool* clamped = nullptr) {
    if (x > 1.0) {
        if (clamped) *clamped = true;
        return 1.0;
    }
    if (x < 0.0) {
        if (clamped) *clamped = true;
        return 0.0;
    }
    return x;
}

inline void check_probability(double x, const char* what) {
    if (!(x >= 0.0) || x > 1.0) throw std::invalid_argument(std::string(what) + " outside [0,1]");
}

}  // namespace detail

// Best guess of any |K*|-bit segment succeeds with at most 2^-|K*| + delta.
inline double subset_leak_bound(double subset_len, double delta, bool* clamped = nullptr) {
    if (subset_len < 1.0) throw std::invalid_argument("subset length must be at least one bit");
    detail::check_probability(delta, "delta");
    return detail::clamp01(std::exp2(-subset_len) + delta, clamped);
}

// Joint leak of several disjoint segments: 2^-(sum of lengths) + delta.
inline double multi_segment_bound(std::span<const double> segment_lens, double delta,
                                  bool* clamped = nullptr) {
    if (segment_lens.empty()) throw std::invalid_argument("need at least one segment");
    double total = 0.0;
    for (double len : segment_lens) {
        if (len < 1.0) throw std::invalid_argument("segment length must be at least one bit");
        total += len;
    }
    return subset_leak_bound(total, delta, clamped);
}

// Same cap, but contractually an average over the revealed part of the key:
// individual revealed values may do far worse (see kpa_counterexample).
inline double kpa_average_bound(double subset_len, double delta, bool* clamped = nullptr) {
    return subset_leak_bound(subset_len, delta, clamped);
}

// P[Z >= gamma] <= E[Z]/gamma for nonnegative Z.
inline double markov_tail(double mean, double gamma) {
    if (mean < 0.0) throw std::invalid_argument("markov_tail: negative mean");
    if (!(gamma > 0.0)) throw std::invalid_argument("markov_tail: gamma must be positive");
    return std::min(1.0, mean / gamma);
}

// Per-round guarantee from an averaged distance level epsilon: splitting at
// threshold sqrt(epsilon) and applying the Markov tail gives 2 sqrt(epsilon).
inline double individual_guarantee(double epsilon, bool* clamped = nullptr) {
    detail::check_probability(epsilon, "epsilon");
    return detail::clamp01(2.0 * std::sqrt(epsilon), clamped);
}

// Per-round known-plaintext guarantee; two averages are removed (distance
// level and revealed prefix), costing a cube root: 3 epsilon^(1/3).
inline double kpa_individual_guarantee(double epsilon, bool* clamped = nullptr) {
    detail::check_probability(epsilon, "epsilon");
    return detail::clamp01(3.0 * std::cbrt(epsilon), clamped);
}

// Lower bound on Eve's best average per-bit error rate for an n-bit key at
// distance level epsilon from uniform. Chains H(K) >= n - 2 eps (n +
// log2(1/(2 eps))) with the Fano inequality n H2(pb) >= H(K) - I_E and
// returns the smaller root of H2. Throws when the entropy bound is vacuous.
inline double fano_ber_bound(int n, double epsilon, double i_e = 0.0) {
    if (n < 1) throw std::invalid_argument("fano_ber_bound: n must be positive");
    detail::check_probability(epsilon, "epsilon");
    if (i_e < 0.0) throw std::invalid_argument("fano_ber_bound: negative mutual information");
    double entropy_floor;
    if (epsilon == 0.0) {
        entropy_floor = double(n);
    } else {
        entropy_floor = double(n) - 2.0 * epsilon * (double(n) + std::log2(1.0 / (2.0 * epsilon)));
    }
    entropy_floor -= i_e;
    if (!(entropy_floor > 0.0))
        throw std::domain_error("fano_ber_bound: entropy bound non-positive, no usable floor");
    double target = std::min(1.0, entropy_floor / double(n));
    return h2_inverse(target);
}

// Two-sided band on the information leak n - H(P) in terms of the distance
// delta: 2 delta^2 from below, 8 n delta + 2 H2(2 delta) from above. The
// upper branch needs 2 delta <= 1 and is omitted otherwise.
struct PinskerBand {
    double lower = 0.0;
    std::optional<double> upper;
};

inline PinskerBand pinsker_band(double delta, int n) {
    if (delta < 0.0) throw std::invalid_argument("pinsker_band: negative delta");
    if (n < 1) throw std::invalid_argument("pinsker_band: n must be positive");
    PinskerBand band;
    band.lower = 2.0 * delta * delta;
    if (2.0 * delta <= 1.0)
        band.upper = 8.0 * double(n) * delta + 2.0 * binary_entropy(2.0 * delta);
    return band;
}

// Longest key obtainable from l bits of min-entropy at target distance d:
// floor(l - 2 log2(1/d)). A negative budget means the target is infeasible.
struct LhlKeyLength {
    std::int64_t bits = 0;
    bool feasible = true;
};

inline LhlKeyLength lhl_key_length(double min_entropy_bits, double d_target) {
    if (!(min_entropy_bits > 0.0)) throw std::invalid_argument("lhl_key_length: min-entropy must be positive");
    if (!(d_target > 0.0) || d_target > 1.0)
        throw std::invalid_argument("lhl_key_length: target distance outside (0,1]");
    double raw = min_entropy_bits - 2.0 * std::log2(1.0 / d_target);
    LhlKeyLength out;
    if (raw < 0.0) {
        out.bits = 0;
        out.feasible = false;
    } else {
        out.bits = std::int64_t(std::floor(raw));
    }
    return out;
}

// Smallest distance any universal-hashing compression can reach, given the
// best whole-input guess probability p1 of the source: sqrt(p1).
inline double lhl_min_d(double p1_input) {
    if (!(p1_input > 0.0) || p1_input > 1.0)
        throw std::invalid_argument("lhl_min_d: p1 outside (0,1]");
    return std::sqrt(p1_input);
}

// Shared-secret bits consumed by covering the parity digits of the error
// correction step: f * sifted * H2(qber).
inline double ecc_leak(double sifted_len, double qber, double f) {
    if (sifted_len < 1.0) throw std::invalid_argument("ecc_leak: sifted length must be positive");
    if (qber < 0.0 || qber >= 0.5) throw std::invalid_argument("ecc_leak: qber outside [0, 0.5)");
    if (f < 1.0 || f > 2.0) throw std::invalid_argument("ecc_leak: efficiency factor outside [1,2]");
    return f * sifted_len * binary_entropy(qber);
}

// Variant for a systematic code whose appended parity digits travel over a
// channel with the same error rate: sifted * H2 / (1 - H2).
inline double ecc_leak_systematic(double sifted_len, double qber) {
    if (sifted_len < 1.0) throw std::invalid_argument("ecc_leak_systematic: sifted length must be positive");
    if (qber < 0.0 || qber >= 0.5) throw std::invalid_argument("ecc_leak_systematic: qber outside [0, 0.5)");
    double h = binary_entropy(qber);
    if (h >= 1.0) throw std::domain_error("ecc_leak_systematic: undefined at H2 = 1");
    return sifted_len * h / (1.0 - h);
}

// Authentication with an almost-strongly-universal family of quality
// eps_asu, keyed by a key at distance eps_key from uniform. The worst single
// observed tag may succeed with eps_asu + eps_key * tag_space (attainable,
// may reach one); averages over tags stay at eps_asu + eps_key. Multi-use
// with tag covers at distance eps_tag_cover costs uses * eps_tag_cover.
//
// Whether the achievability floor divides by the tag-space cardinality or by
// the tag bit length is a convention choice; both readings are reported and
// neither is asserted anywhere.
struct MacBoundSet {
    double worst_tag_cap = 0.0;       // may clamp at 1
    double avg_substitution = 0.0;
    double avg_impersonation = 0.0;
    double multiuse_avg = 0.0;
    double floor_cardinality = 0.0;   // 1 / |tag space|
    double floor_bit_length = 0.0;    // 1 / log2 |tag space|
    bool worst_clamped = false;
};

inline MacBoundSet mac_bounds(double eps_asu, double eps_key, double tag_space, int uses,
                              double eps_tag_cover = -1.0) {
    detail::check_probability(eps_asu, "eps_asu");
    detail::check_probability(eps_key, "eps_key");
    if (tag_space < 2.0) throw std::invalid_argument("mac_bounds: tag space must have at least two values");
    if (uses < 1) throw std::invalid_argument("mac_bounds: need at least one use");
    if (eps_tag_cover < 0.0) eps_tag_cover = eps_key;
    MacBoundSet out;
    out.worst_tag_cap = detail::clamp01(eps_asu + eps_key * tag_space, &out.worst_clamped);
    out.avg_substitution = detail::clamp01(eps_asu + eps_key);
    out.avg_impersonation = out.avg_substitution;
    out.multiuse_avg = detail::clamp01(eps_asu + double(uses) * eps_tag_cover);
    out.floor_cardinality = 1.0 / tag_space;
    out.floor_bit_length = 1.0 / std::log2(tag_space);
    return out;
}

// Success of an exhaustive search allowed M trials over N equally likely
// keys: M/N.
inline double complexity_success(double trials, double keyspace) {
    if (trials < 0.0) throw std::invalid_argument("complexity_success: negative trial count");
    if (!(keyspace > 0.0)) throw std::invalid_argument("complexity_success: empty key space");
    if (trials > keyspace) throw std::invalid_argument("complexity_success: more trials than keys");
    return trials / keyspace;
}

// REFUTED comparison column: treats d/n as an independent per-bit failure
// rate and multiplies, yielding (d/n)^n. Underestimates the real compromise
// probability by an enormous margin; see the refutation sweep.
inline double per_bit_fallacy(double d, double n) {
    detail::check_probability(d, "d");
    if (n < 1.0) throw std::invalid_argument("per_bit_fallacy: n must be at least one");
    if (d == 0.0) return 0.0;
    return std::pow(d / n, n);
}

// log2 of the same quantity, usable when the value itself underflows.
inline double per_bit_fallacy_log2(double d, double n) {
    detail::check_probability(d, "d");
    if (n < 1.0) throw std::invalid_argument("per_bit_fallacy_log2: n must be at least one");
    if (d == 0.0) return -std::numeric_limits<double>::infinity();
    return n * std::log2(d / n);
}

// REFUTED comparison column: the claimed error-rate floor (1-d)/2 for any
// per-bit guess. ber_counterexample_search produces distributions below it.
inline double ber_fallacy_bound(double d) {
    detail::check_probability(d, "d");
    return (1.0 - d) / 2.0;
}

// Whole-keystream compromise probability of a non-degenerate keystream
// generator seeded with seed_bits uniform bits: 2^-seed_bits.
inline double lfsr_whole_key_leak(double seed_bits) {
    if (seed_bits < 1.0) throw std::invalid_argument("lfsr_whole_key_leak: seed must be at least one bit");
    return std::exp2(-seed_bits);
}

// ---------------------------------------------------------------------------
// Named dispatch (CLI surface)
// ---------------------------------------------------------------------------

// Evaluates a bound by name from a parameter map, echoing the inputs.
// Multi-valued bounds report a headline value plus extras.
inline BoundResult evaluate_bound(const std::string& name,
                                  const std::map<std::string, double>& args) {
    auto need = [&](const std::string& key) {
        auto it = args.find(key);
        if (it == args.end()) throw std::invalid_argument("missing parameter: " + key);
        return it->second;
    };
    auto opt = [&](const std::string& key, double fallback) {
        auto it = args.find(key);
        return it == args.end() ? fallback : it->second;
    };

    BoundResult r;
    r.formula = name;
    for (const auto& [k, v] : args) r.inputs.push_back({k, v});

    if (name == "subset-leak") {
        r.value = subset_leak_bound(need("subset_len"), need("delta"), &r.clamped);
    } else if (name == "multi-segment") {
        std::vector<double> lens;
        for (int i = 1; args.count("len" + std::to_string(i)); ++i)
            lens.push_back(args.at("len" + std::to_string(i)));
        r.value = multi_segment_bound(lens, need("delta"), &r.clamped);
    } else if (name == "kpa-average") {
        r.value = kpa_average_bound(need("subset_len"), need("delta"), &r.clamped);
    } else if (name == "markov-tail") {
        r.value = markov_tail(need("mean"), need("gamma"));
    } else if (name == "individual") {
        r.value = individual_guarantee(need("epsilon"), &r.clamped);
    } else if (name == "kpa-individual") {
        r.value = kpa_individual_guarantee(need("epsilon"), &r.clamped);
    } else if (name == "fano-ber") {
        r.value = fano_ber_bound(int(need("n")), need("epsilon"), opt("i_e", 0.0));
    } else if (name == "pinsker-band") {
        PinskerBand band = pinsker_band(need("delta"), int(need("n")));
        r.value = band.lower;
        if (band.upper) r.extras.push_back({"upper", *band.upper});
    } else if (name == "lhl-key-length") {
        LhlKeyLength len = lhl_key_length(need("min_entropy"), need("d_target"));
        r.value = double(len.bits);
        r.extras.push_back({"feasible", len.feasible ? 1.0 : 0.0});
    } else if (name == "lhl-min-d") {
        r.value = lhl_min_d(need("p1"));
    } else if (name == "ecc-leak") {
        r.value = ecc_leak(need("sifted_len"), need("qber"), opt("f", 1.0));
    } else if (name == "ecc-leak-systematic") {
        r.value = ecc_leak_systematic(need("sifted_len"), need("qber"));
    } else if (name == "mac") {
        MacBoundSet mac = mac_bounds(need("eps_asu"), need("eps_key"), need("tag_space"),
                                     int(opt("uses", 1.0)), opt("eps_tag_cover", -1.0));
        r.value = mac.avg_substitution;
        r.clamped = mac.worst_clamped;
        r.extras = {{"worst_tag_cap", mac.worst_tag_cap},
                    {"avg_impersonation", mac.avg_impersonation},
                    {"multiuse_avg", mac.multiuse_avg},
                    {"floor_cardinality", mac.floor_cardinality},
                    {"floor_bit_length", mac.floor_bit_length}};
    } else if (name == "complexity-success") {
        r.value = complexity_success(need("trials"), need("keyspace"));
    } else if (name == "per-bit-fallacy") {
        r.value = per_bit_fallacy(need("d"), need("n"));
        r.flag = Soundness::refuted;
        r.extras.push_back({"log2_value", per_bit_fallacy_log2(need("d"), need("n"))});
    } else if (name == "ber-fallacy") {
        r.value = ber_fallacy_bound(need("d"));
        r.flag = Soundness::refuted;
    } else if (name == "lfsr-whole-key") {
        r.value = lfsr_whole_key_leak(need("seed_bits"));
    } else {
        throw std::invalid_argument("unknown bound: " + name);
    }
    return r;
}

inline const std::vector<std::string>& bound_names() {
    static const std::vector<std::string> names = {
        "subset-leak",     "multi-segment", "kpa-average",    "markov-tail",
        "individual",      "kpa-individual", "fano-ber",      "pinsker-band",
        "lhl-key-length",  "lhl-min-d",     "ecc-leak",       "ecc-leak-systematic",
        "mac",             "complexity-success", "per-bit-fallacy", "ber-fallacy",
        "lfsr-whole-key"};
    return names;
}

}  // namespace keysec
