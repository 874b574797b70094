#pragma once

// Builders for the distributions this library reasons about: the
// known-plaintext counter-example, subset-bound-saturating profiles, spiked
// low-entropy profiles, mixture-decomposition feasibility, and couplings that
// attain the coupling inequality. Every constructor works in exact rational
// arithmetic as well as double precision.

#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <vector>

#include "keysec/distribution.hpp"

namespace keysec {

inline constexpr std::uint64_t kDefaultSearchSeed = 0x5eed0001;

// Key distribution that breaks the "remainder stays private except with
// probability delta" reading of a statistical-distance guarantee. One key k0
// carries probability 2^-m, the other keys sharing k0's first m bits carry 0,
// and every key with a different m-bit prefix keeps the uniform 2^-n. The
// distance from uniform is exactly 2^-m - 2^-n, yet revealing the prefix of
// k0 exposes the remaining n-m bits with certainty.
template <class R = double>
BasicKeyDistribution<R> kpa_counterexample(int n, int m, std::uint64_t k0 = 0) {
    using S = scalar_traits<R>;
    if (n < 2 || n > kDenseMaxBits) throw std::invalid_argument("kpa_counterexample: n out of range");
    if (m < 1 || m >= n) throw std::invalid_argument("kpa_counterexample: need 1 <= m < n");
    if (k0 >= domain_size(n)) throw std::invalid_argument("kpa_counterexample: k0 outside domain");
    const std::uint64_t prefix_mask = domain_size(m) - 1;
    const std::uint64_t prefix = k0 & prefix_mask;
    std::vector<R> p(domain_size(n), S::pow2(-n));
    for (std::uint64_t k = prefix; k < domain_size(n); k += domain_size(m))
        p[k] = S::zero();
    p[k0] = S::pow2(-m);
    return BasicKeyDistribution<R>::from_dense(n, std::move(p));
}

// Closed-form distance of the construction above.
inline double kpa_counterexample_distance(int n, int m) {
    return std::ldexp(1.0, -m) - std::ldexp(1.0, -n);
}

// Distribution with stat_distance to uniform exactly `delta` whose best guess
// of the bits selected by `subset_mask` succeeds with probability
// 2^-|subset| + delta exactly. The construction adds delta to the
// lexicographically first key whose subset bits equal `subset_value` and
// removes delta spread evenly over the keys with a different subset value.
template <class R>
BasicKeyDistribution<R> saturating_distribution(int n, std::uint64_t subset_mask, R delta,
                                                std::uint64_t subset_value = 0) {
    using S = scalar_traits<R>;
    if (n < 1 || n > kDenseMaxBits) throw std::invalid_argument("saturating_distribution: n out of range");
    if (subset_mask == 0 || subset_mask >= domain_size(n))
        throw std::invalid_argument("saturating_distribution: bad subset mask");
    const int s = popcount(subset_mask);
    if (subset_value >= domain_size(s)) throw std::invalid_argument("saturating_distribution: subset value out of range");
    if (delta < S::zero()) throw std::invalid_argument("saturating_distribution: negative delta");
    const R max_delta = S::one() - S::pow2(-s);
    if (delta > max_delta) {
        std::ostringstream msg;
        msg << "saturating_distribution: delta infeasible, maximum removable mass is "
            << S::to_double(max_delta);
        throw std::invalid_argument(msg.str());
    }

    const std::uint64_t off_class = domain_size(n) - domain_size(n - s);
    R removal = delta;
    if constexpr (S::exact) removal /= R(std::int64_t(off_class));
    else removal /= double(off_class);

    const std::uint64_t k_add = deposit_bits(subset_value, subset_mask);
    const R u = S::pow2(-n);
    std::vector<R> p(domain_size(n), u);
    for (std::uint64_t k = 0; k < p.size(); ++k)
        if (extract_bits(k, subset_mask) != subset_value) p[k] = u - removal;
    p[k_add] = u + delta;
    return BasicKeyDistribution<R>::from_dense(n, std::move(p));
}

// Profile with a single spike p(k0) = 2^-l over an otherwise uniform
// remainder. For n much larger than l the normalized information leak
// (n - H)/n sits near 2^-l while the best whole-key guess already succeeds
// with 2^-l: vanishing leak per bit does not mean a nearly uniform key.
// l = n is allowed and yields the uniform distribution.
template <class R = double>
BasicKeyDistribution<R> spiked_distribution(int n, int l, std::uint64_t k0 = 0) {
    using S = scalar_traits<R>;
    if (n < 1 || n > 62) throw std::invalid_argument("spiked_distribution: n out of range");
    if (l < 1 || l > n) throw std::invalid_argument("spiked_distribution: need 1 <= l <= n");
    if (k0 >= domain_size(n)) throw std::invalid_argument("spiked_distribution: k0 outside domain");
    if (l == n) return BasicKeyDistribution<R>::uniform(n);
    if (n <= kDenseMaxBits) {
        R rest = (S::one() - S::pow2(-l));
        if constexpr (S::exact) rest /= R(std::int64_t(domain_size(n) - 1));
        else rest /= double(domain_size(n) - 1);
        std::vector<R> p(domain_size(n), rest);
        p[k0] = S::pow2(-l);
        return BasicKeyDistribution<R>::from_dense(n, std::move(p));
    }
    return BasicKeyDistribution<R>::from_atoms(n, {{k0, S::pow2(-l)}}, Background::uniform);
}

// n - H(P) of the spiked profile, in closed form (cross-checks entropy()).
inline double spiked_information_leak(int n, int l) {
    if (l == n) return 0.0;
    const double spike = std::ldexp(1.0, -l);
    const double rest = 1.0 - spike;
    // log2(2^n - 1) without forming 2^n
    const double log_others = double(n) + std::log1p(-std::ldexp(1.0, -n)) / std::numbers::ln2;
    const double h = spike * double(l) + rest * (log_others - std::log2(rest));
    return double(n) - h;
}

// ---------------------------------------------------------------------------
// Mixture feasibility
// ---------------------------------------------------------------------------

// Can P be written as (1-lambda) U + lambda P' for some distribution P'?
// Total probability forces (1-lambda)/N <= p_i <= lambda + (1-lambda)/N for
// every key; the first violating key is reported. Applied at
// lambda = stat_distance(P,U) this refutes the reading of the distance as a
// probability that the key "fails to be uniform".
template <class R>
struct MixtureFeasibility {
    bool feasible = false;
    std::optional<std::uint64_t> violating_key;
    R lower;
    R upper;
};

template <class R>
MixtureFeasibility<R> mixture_feasibility(const BasicKeyDistribution<R>& p, R lambda) {
    using S = scalar_traits<R>;
    if (lambda < S::zero() || lambda > S::one())
        throw std::invalid_argument("mixture_feasibility: lambda outside [0,1]");
    R unif_part = (S::one() - lambda) * S::pow2(-p.bits());
    MixtureFeasibility<R> out;
    out.lower = unif_part;
    out.upper = lambda + unif_part;
    auto ok = [&](const R& v) { return !(v < out.lower) && !(out.upper < v); };
    if (p.dense()) {
        const auto& probs = p.dense_probs();
        for (std::uint64_t k = 0; k < probs.size(); ++k) {
            if (!ok(probs[k])) {
                out.violating_key = k;
                return out;
            }
        }
    } else {
        for (const auto& [k, v] : p.atoms()) {
            if (!ok(v)) {
                out.violating_key = k;
                return out;
            }
        }
        if (p.background_count() > 0 && !ok(p.background_value())) {
            // report the first background key
            std::uint64_t k = 0;
            for (const auto& [ak, v] : p.atoms()) {
                if (ak != k) break;
                ++k;
            }
            out.violating_key = k;
            return out;
        }
    }
    out.feasible = true;
    return out;
}

// ---------------------------------------------------------------------------
// Couplings
// ---------------------------------------------------------------------------

// Joint distribution over (X, Y) pairs whose marginals are P and Q.
template <class R>
class CouplingTable {
public:
    static constexpr int kMaxBits = 10;

    static CouplingTable from_matrix(int bits, std::vector<R> joint) {
        if (bits < 1 || bits > kMaxBits) throw std::invalid_argument("CouplingTable: bits out of range");
        std::uint64_t nn = domain_size(bits);
        if (joint.size() != nn * nn) throw std::invalid_argument("CouplingTable: matrix size mismatch");
        CouplingTable t;
        t.bits_ = bits;
        t.joint_ = std::move(joint);
        return t;
    }

    int bits() const { return bits_; }
    const R& at(std::uint64_t x, std::uint64_t y) const { return joint_[x * domain_size(bits_) + y]; }
    R& at(std::uint64_t x, std::uint64_t y) { return joint_[x * domain_size(bits_) + y]; }

    R prob_equal() const {
        R s = scalar_traits<R>::zero();
        for (std::uint64_t i = 0; i < domain_size(bits_); ++i) s += at(i, i);
        return s;
    }

    std::vector<R> row_marginal() const {
        std::vector<R> m(domain_size(bits_), scalar_traits<R>::zero());
        for (std::uint64_t x = 0; x < m.size(); ++x)
            for (std::uint64_t y = 0; y < m.size(); ++y) m[x] += at(x, y);
        return m;
    }

    std::vector<R> col_marginal() const {
        std::vector<R> m(domain_size(bits_), scalar_traits<R>::zero());
        for (std::uint64_t x = 0; x < m.size(); ++x)
            for (std::uint64_t y = 0; y < m.size(); ++y) m[y] += at(x, y);
        return m;
    }

private:
    int bits_ = 1;
    std::vector<R> joint_;
};

// Coupling attaining P(X=Y) = 1 - stat_distance(P,Q): the diagonal holds
// min(P_i,Q_i) and the residual mass couples as an outer product.
template <class R>
CouplingTable<R> maximal_coupling(const BasicKeyDistribution<R>& p, const BasicKeyDistribution<R>& q) {
    using S = scalar_traits<R>;
    if (p.bits() != q.bits()) throw std::invalid_argument("maximal_coupling: dimension mismatch");
    if (p.bits() > CouplingTable<R>::kMaxBits)
        throw std::invalid_argument("maximal_coupling: domain too large to tabulate");
    auto pd = p.densified().dense_probs();
    auto qd = q.densified().dense_probs();
    const std::uint64_t nn = pd.size();
    std::vector<R> excess_p(nn), excess_q(nn);
    R delta = S::zero();
    for (std::uint64_t i = 0; i < nn; ++i) {
        R m = std::min(pd[i], qd[i]);
        excess_p[i] = pd[i] - m;
        excess_q[i] = qd[i] - m;
        delta += excess_p[i];
    }
    std::vector<R> joint(nn * nn, S::zero());
    for (std::uint64_t i = 0; i < nn; ++i) joint[i * nn + i] = std::min(pd[i], qd[i]);
    if (delta > S::zero()) {
        for (std::uint64_t i = 0; i < nn; ++i) {
            if (!(excess_p[i] > S::zero())) continue;
            for (std::uint64_t j = 0; j < nn; ++j) {
                if (!(excess_q[j] > S::zero())) continue;
                joint[i * nn + j] += excess_p[i] * excess_q[j] / delta;
            }
        }
    }
    return CouplingTable<R>::from_matrix(p.bits(), std::move(joint));
}

// Independent product coupling, for comparison against the maximum.
template <class R>
CouplingTable<R> independent_coupling(const BasicKeyDistribution<R>& p, const BasicKeyDistribution<R>& q) {
    if (p.bits() != q.bits()) throw std::invalid_argument("independent_coupling: dimension mismatch");
    if (p.bits() > CouplingTable<R>::kMaxBits)
        throw std::invalid_argument("independent_coupling: domain too large to tabulate");
    auto pd = p.densified().dense_probs();
    auto qd = q.densified().dense_probs();
    const std::uint64_t nn = pd.size();
    std::vector<R> joint(nn * nn);
    for (std::uint64_t i = 0; i < nn; ++i)
        for (std::uint64_t j = 0; j < nn; ++j) joint[i * nn + j] = pd[i] * qd[j];
    return CouplingTable<R>::from_matrix(p.bits(), std::move(joint));
}

// ---------------------------------------------------------------------------
// Per-bit error-rate counter-example search
// ---------------------------------------------------------------------------

// Independent bits, each equal to 0 with probability p_zero.
inline KeyDistribution biased_bits_distribution(int n, double p_zero) {
    if (n < 1 || n > kDenseMaxBits) throw std::invalid_argument("biased_bits_distribution: n out of range");
    if (p_zero < 0.0 || p_zero > 1.0) throw std::invalid_argument("biased_bits_distribution: bias outside [0,1]");
    std::vector<double> p(domain_size(n));
    for (std::uint64_t k = 0; k < p.size(); ++k) {
        int ones = popcount(k);
        p[k] = std::pow(1.0 - p_zero, ones) * std::pow(p_zero, n - ones);
    }
    return KeyDistribution::from_dense(n, std::move(p));
}

// Searches for a distribution with stat_distance(P,U) <= d whose best
// per-bit guess beats the (1-d)/2 error floor sometimes claimed for it.
// Biased independent-bit families are scanned first, then seeded random
// perturbations of uniform. Returns the first counter-example found, or
// nothing once the candidate budget is exhausted (which proves nothing).
inline std::optional<KeyDistribution> ber_counterexample_search(int n, double d,
                                                                std::uint64_t seed = kDefaultSearchSeed,
                                                                std::uint64_t budget = 100000) {
    if (n < 1 || n > 12) throw std::invalid_argument("ber_counterexample_search: n out of range");
    if (d < 0.0 || d > 1.0) throw std::invalid_argument("ber_counterexample_search: d outside [0,1]");
    const double floor = (1.0 - d) / 2.0;
    std::uint64_t tried = 0;
    auto is_violation = [&](const KeyDistribution& p) {
        return stat_distance_from_uniform(p) <= d && optimal_ber(p) < floor - 1e-12;
    };

    // deterministic sweep through single-bias product families
    for (int step = 1; step <= 400 && tried < budget; ++step) {
        double bias = 0.5 + 0.5 * double(step) / 401.0;
        KeyDistribution cand = biased_bits_distribution(n, bias);
        ++tried;
        if (is_violation(cand)) return cand;
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    while (tried < budget) {
        ++tried;
        // random direction away from uniform, scaled back inside the d-ball
        std::vector<double> w(domain_size(n));
        double total = 0.0;
        for (double& x : w) {
            x = -std::log(1.0 - unit(rng));
            total += x;
        }
        for (double& x : w) x /= total;
        KeyDistribution dir = KeyDistribution::from_dense(n, std::move(w));
        double dist = stat_distance_from_uniform(dir);
        if (dist <= 0.0) continue;
        double theta = std::min(1.0, 0.999 * d / dist) * unit(rng);
        std::vector<double> mixed(domain_size(n));
        const double u = std::ldexp(1.0, -n);
        for (std::uint64_t k = 0; k < mixed.size(); ++k)
            mixed[k] = u + theta * (dir.prob(k) - u);
        KeyDistribution cand = KeyDistribution::from_dense(n, std::move(mixed));
        if (is_violation(cand)) return cand;
    }
    return std::nullopt;
}

}  // namespace keysec
