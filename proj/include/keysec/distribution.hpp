#pragma once

// Exact finite distributions over n-bit key spaces and the information
// measures computed from them: statistical distance, ordered probability
// profiles, entropies, conditional profiles and per-bit guessing error.
//
// Distributions up to 24 bits are stored densely (one probability per key);
// wider ones keep an explicit atom list over a uniform-or-zero background,
// which is all the constructions in this library ever need. Probabilities are
// either `double` or exact `Rational`.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "keysec/bits.hpp"
#include "keysec/rational.hpp"

namespace keysec {

inline constexpr int kDenseMaxBits = 24;
inline constexpr double kProbTolerance = 1e-12;

enum class Background { uniform, zero };

template <class R>
class BasicKeyDistribution {
public:
    using scalar = scalar_traits<R>;
    using Atom = std::pair<std::uint64_t, R>;

    static BasicKeyDistribution uniform(int n) {
        check_bits(n);
        if (n <= kDenseMaxBits)
            return from_dense(n, std::vector<R>(domain_size(n), scalar::pow2(-n)));
        return from_atoms(n, {}, Background::uniform);
    }

    static BasicKeyDistribution point_mass(int n, std::uint64_t key) {
        check_bits(n);
        check_key(n, key);
        if (n <= kDenseMaxBits) {
            std::vector<R> p(domain_size(n), scalar::zero());
            p[key] = scalar::one();
            return from_dense(n, std::move(p));
        }
        return from_atoms(n, {{key, scalar::one()}}, Background::zero);
    }

    static BasicKeyDistribution from_dense(int n, std::vector<R> probs) {
        check_bits(n);
        if (n > kDenseMaxBits) throw std::invalid_argument("dense mode is limited to 24 key bits");
        if (probs.size() != domain_size(n)) throw std::invalid_argument("dense mode needs exactly 2^n probabilities");
        BasicKeyDistribution d;
        d.n_ = n;
        d.dense_ = std::move(probs);
        d.validate();
        return d;
    }

    static BasicKeyDistribution from_atoms(int n, std::vector<Atom> atoms, Background bg) {
        check_bits(n);
        BasicKeyDistribution d;
        d.n_ = n;
        d.sparse_ = true;
        d.bg_ = bg;
        std::sort(atoms.begin(), atoms.end(),
                  [](const Atom& a, const Atom& b) { return a.first < b.first; });
        for (std::size_t i = 0; i + 1 < atoms.size(); ++i)
            if (atoms[i].first == atoms[i + 1].first)
                throw std::invalid_argument("duplicate atom key");
        if (!atoms.empty()) check_key(n, atoms.back().first);
        d.atoms_ = std::move(atoms);
        d.validate();
        return d;
    }

    int bits() const { return n_; }
    bool dense() const { return !sparse_; }
    std::uint64_t size() const { return domain_size(n_); }

    const std::vector<R>& dense_probs() const {
        require_dense();
        return dense_;
    }
    const std::vector<Atom>& atoms() const { return atoms_; }
    Background background() const { return bg_; }

    std::uint64_t background_count() const {
        return sparse_ ? size() - atoms_.size() : 0;
    }

    R background_value() const {
        if (!sparse_ || bg_ == Background::zero) return scalar::zero();
        std::uint64_t count = background_count();
        if (count == 0) return scalar::zero();
        R rest = scalar::one() - atom_sum();
        if constexpr (scalar::exact) {
            return rest / R(std::int64_t(count));
        } else {
            return rest / double(count);
        }
    }

    R prob(std::uint64_t key) const {
        check_key(n_, key);
        if (!sparse_) return dense_[key];
        auto it = std::lower_bound(atoms_.begin(), atoms_.end(), key,
                                   [](const Atom& a, std::uint64_t k) { return a.first < k; });
        if (it != atoms_.end() && it->first == key) return it->second;
        return background_value();
    }

    // p1: the largest probability anywhere in the domain.
    R max_prob() const {
        if (!sparse_) return *std::max_element(dense_.begin(), dense_.end());
        R best = background_count() > 0 ? background_value() : scalar::zero();
        for (const auto& [k, p] : atoms_)
            if (p > best) best = p;
        return best;
    }

    // A key attaining max_prob (smallest such key).
    std::uint64_t arg_max_prob() const {
        if (!sparse_) {
            return std::uint64_t(std::max_element(dense_.begin(), dense_.end()) - dense_.begin());
        }
        R best = max_prob();
        for (const auto& [k, p] : atoms_)
            if (p == best) return k;
        // background attains the max: first key not covered by an atom
        std::uint64_t k = 0;
        for (const auto& [ak, p] : atoms_) {
            if (ak != k) break;
            ++k;
        }
        return k;
    }

    BasicKeyDistribution densified() const {
        if (!sparse_) return *this;
        if (n_ > kDenseMaxBits) throw std::invalid_argument("distribution too wide to densify");
        std::vector<R> p(size(), background_value());
        for (const auto& [k, v] : atoms_) p[k] = v;
        return from_dense(n_, std::move(p));
    }

    // Invariants: every probability nonnegative, total mass one (exactly in
    // rational mode, to 1e-12 in double mode).
    void validate() const {
        R total = sparse_ ? atom_sum() : dense_sum();
        if (sparse_) {
            for (const auto& [k, p] : atoms_)
                if (p < scalar::zero()) throw std::invalid_argument("negative probability");
            if (bg_ == Background::uniform) {
                if (background_count() > 0 && total > scalar::one())
                    throw std::invalid_argument("atom mass exceeds one");
                total = background_count() > 0 ? scalar::one() : total;
            }
        } else {
            for (const R& p : dense_)
                if (p < scalar::zero()) throw std::invalid_argument("negative probability");
        }
        if constexpr (scalar::exact) {
            if (total != scalar::one()) throw std::invalid_argument("probabilities must sum to one");
        } else {
            if (std::fabs(total - 1.0) > kProbTolerance)
                throw std::invalid_argument("probabilities must sum to one");
        }
    }

    R atom_sum() const {
        R s = scalar::zero();
        for (const auto& [k, p] : atoms_) s += p;
        return s;
    }

private:
    void require_dense() const {
        if (sparse_) throw std::invalid_argument("operation requires a dense distribution");
    }

    R dense_sum() const {
        if constexpr (scalar::exact) {
            R s = scalar::zero();
            for (const R& p : dense_) s += p;
            return s;
        } else {
            // Neumaier summation keeps the 1e-12 mass check honest for
            // dense vectors with millions of entries.
            double s = 0.0, c = 0.0;
            for (double p : dense_) {
                double t = s + p;
                c += std::fabs(s) >= std::fabs(p) ? (s - t) + p : (p - t) + s;
                s = t;
            }
            return s + c;
        }
    }

    static void check_bits(int n) {
        if (n < 1 || n > 62) throw std::invalid_argument("key bit length out of range");
    }
    static void check_key(int n, std::uint64_t key) {
        if (key >= domain_size(n)) throw std::invalid_argument("key outside domain");
    }

    int n_ = 1;
    bool sparse_ = false;
    Background bg_ = Background::zero;
    std::vector<R> dense_;
    std::vector<Atom> atoms_;
};

using KeyDistribution = BasicKeyDistribution<double>;
using ExactKeyDistribution = BasicKeyDistribution<Rational>;

// ---------------------------------------------------------------------------
// Statistical (variational) distance
// ---------------------------------------------------------------------------

namespace detail {

template <class R>
R abs_value(const R& x) {
    if constexpr (scalar_traits<R>::exact) return abs(x);
    else return std::fabs(x);
}

}  // namespace detail

// delta(P,Q) = (1/2) sum_k |P(k) - Q(k)|.
template <class R>
R stat_distance(const BasicKeyDistribution<R>& p, const BasicKeyDistribution<R>& q) {
    if (p.bits() != q.bits()) throw std::invalid_argument("stat_distance: dimension mismatch");
    using S = scalar_traits<R>;
    R acc = S::zero();
    if (p.dense() && q.dense()) {
        const auto& a = p.dense_probs();
        const auto& b = q.dense_probs();
        for (std::size_t i = 0; i < a.size(); ++i) acc += detail::abs_value(a[i] - b[i]);
    } else if (!p.dense() && !q.dense()) {
        const R bp = p.background_value(), bq = q.background_value();
        std::uint64_t covered = 0;
        auto ia = p.atoms().begin(), ea = p.atoms().end();
        auto ib = q.atoms().begin(), eb = q.atoms().end();
        while (ia != ea || ib != eb) {
            ++covered;
            if (ib == eb || (ia != ea && ia->first < ib->first)) {
                acc += detail::abs_value(ia->second - bq);
                ++ia;
            } else if (ia == ea || ib->first < ia->first) {
                acc += detail::abs_value(bp - ib->second);
                ++ib;
            } else {
                acc += detail::abs_value(ia->second - ib->second);
                ++ia;
                ++ib;
            }
        }
        std::uint64_t remaining = p.size() - covered;
        if (remaining > 0) {
            R diff = detail::abs_value(bp - bq);
            if constexpr (S::exact) acc += diff * R(std::int64_t(remaining));
            else acc += diff * double(remaining);
        }
    } else {
        return stat_distance(p.densified(), q.densified());
    }
    return acc * S::pow2(-1);
}

template <class R>
R stat_distance_from_uniform(const BasicKeyDistribution<R>& p) {
    using S = scalar_traits<R>;
    const R u = S::pow2(-p.bits());
    R acc = S::zero();
    if (p.dense()) {
        for (const R& v : p.dense_probs()) acc += detail::abs_value(v - u);
    } else {
        for (const auto& [k, v] : p.atoms()) acc += detail::abs_value(v - u);
        std::uint64_t count = p.background_count();
        if (count > 0) {
            R diff = detail::abs_value(p.background_value() - u);
            if constexpr (S::exact) acc += diff * R(std::int64_t(count));
            else acc += diff * double(count);
        }
    }
    return acc * S::pow2(-1);
}

// ---------------------------------------------------------------------------
// Ordered probability profile
// ---------------------------------------------------------------------------

// The descending profile p_1 >= p_2 >= ... stored as (value, multiplicity)
// runs so that wide sparse distributions stay representable.
template <class R>
class OrderedProfile {
public:
    using Run = std::pair<R, std::uint64_t>;

    explicit OrderedProfile(std::vector<Run> runs) : runs_(std::move(runs)) {}

    const std::vector<Run>& runs() const { return runs_; }

    R p1() const { return runs_.empty() ? scalar_traits<R>::zero() : runs_.front().first; }

    std::uint64_t total_count() const {
        std::uint64_t t = 0;
        for (const auto& [v, c] : runs_) t += c;
        return t;
    }

    // Probability at 1-based rank r.
    R at_rank(std::uint64_t r) const {
        std::uint64_t seen = 0;
        for (const auto& [v, c] : runs_) {
            seen += c;
            if (r <= seen) return v;
        }
        throw std::out_of_range("rank beyond profile");
    }

    // Fully expanded profile; refuses to materialize more than `limit` entries.
    std::vector<R> flat(std::uint64_t limit = domain_size(kDenseMaxBits)) const {
        if (total_count() > limit) throw std::invalid_argument("profile too large to flatten");
        std::vector<R> out;
        out.reserve(total_count());
        for (const auto& [v, c] : runs_)
            for (std::uint64_t i = 0; i < c; ++i) out.push_back(v);
        return out;
    }

private:
    std::vector<Run> runs_;
};

template <class R>
OrderedProfile<R> ordered_profile(const BasicKeyDistribution<R>& p) {
    std::vector<std::pair<R, std::uint64_t>> runs;
    if (p.dense()) {
        std::vector<R> v = p.dense_probs();
        std::sort(v.begin(), v.end(), [](const R& a, const R& b) { return b < a; });
        for (const R& x : v) {
            if (!runs.empty() && runs.back().first == x) ++runs.back().second;
            else runs.push_back({x, 1});
        }
    } else {
        for (const auto& [k, v] : p.atoms()) runs.push_back({v, 1});
        if (p.background_count() > 0) runs.push_back({p.background_value(), p.background_count()});
        std::sort(runs.begin(), runs.end(), [](const auto& a, const auto& b) { return b.first < a.first; });
        std::vector<std::pair<R, std::uint64_t>> merged;
        for (const auto& r : runs) {
            if (!merged.empty() && merged.back().first == r.first) merged.back().second += r.second;
            else merged.push_back(r);
        }
        runs = std::move(merged);
    }
    return OrderedProfile<R>(std::move(runs));
}

// ---------------------------------------------------------------------------
// Entropies
// ---------------------------------------------------------------------------

// -x log2 x with the 0 log 0 = 0 convention.
inline double xlog2x(double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; }

inline double binary_entropy(double x) {
    if (x < 0.0 || x > 1.0) throw std::domain_error("binary_entropy: argument outside [0,1]");
    return xlog2x(x) + xlog2x(1.0 - x);
}

// Smaller root of H2(p) = h on [0, 1/2], by bisection to 1e-9.
inline double h2_inverse(double h, double tol = 1e-9) {
    if (h < 0.0 || h > 1.0) throw std::domain_error("h2_inverse: argument outside [0,1]");
    double lo = 0.0, hi = 0.5;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        (binary_entropy(mid) < h ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Shannon entropy in bits.
template <class R>
double entropy(const BasicKeyDistribution<R>& p) {
    using S = scalar_traits<R>;
    double h = 0.0;
    if (p.dense()) {
        for (const R& v : p.dense_probs()) h += xlog2x(S::to_double(v));
    } else {
        for (const auto& [k, v] : p.atoms()) h += xlog2x(S::to_double(v));
        std::uint64_t count = p.background_count();
        if (count > 0) h += double(count) * xlog2x(S::to_double(p.background_value()));
    }
    return h;
}

// ---------------------------------------------------------------------------
// Joint distribution over key x observation
// ---------------------------------------------------------------------------

class JointKY {
public:
    static JointKY from_matrix(int key_bits, int obs_count, std::vector<double> probs) {
        if (key_bits < 1 || key_bits > 20) throw std::invalid_argument("JointKY: key bits out of range");
        if (obs_count < 1) throw std::invalid_argument("JointKY: need at least one observation");
        if (probs.size() != domain_size(key_bits) * std::uint64_t(obs_count))
            throw std::invalid_argument("JointKY: matrix size mismatch");
        JointKY j;
        j.key_bits_ = key_bits;
        j.obs_count_ = obs_count;
        j.p_ = std::move(probs);
        j.validate();
        return j;
    }

    static JointKY product(const KeyDistribution& key, const std::vector<double>& obs) {
        std::vector<double> m;
        m.reserve(key.size() * obs.size());
        for (std::uint64_t k = 0; k < key.size(); ++k)
            for (double q : obs) m.push_back(key.prob(k) * q);
        return from_matrix(key.bits(), int(obs.size()), std::move(m));
    }

    int key_bits() const { return key_bits_; }
    int obs_count() const { return obs_count_; }
    double prob(std::uint64_t k, int y) const { return p_[k * std::uint64_t(obs_count_) + y]; }

    KeyDistribution key_marginal() const {
        std::vector<double> m(domain_size(key_bits_), 0.0);
        for (std::uint64_t k = 0; k < m.size(); ++k)
            for (int y = 0; y < obs_count_; ++y) m[k] += prob(k, y);
        return KeyDistribution::from_dense(key_bits_, std::move(m));
    }

    std::vector<double> obs_marginal() const {
        std::vector<double> m(obs_count_, 0.0);
        for (std::uint64_t k = 0; k < domain_size(key_bits_); ++k)
            for (int y = 0; y < obs_count_; ++y) m[y] += prob(k, y);
        return m;
    }

    KeyDistribution conditional_key(int y) const {
        double mass = 0.0;
        for (std::uint64_t k = 0; k < domain_size(key_bits_); ++k) mass += prob(k, y);
        if (mass <= 0.0) throw std::domain_error("JointKY: conditioning on zero-probability observation");
        std::vector<double> m(domain_size(key_bits_));
        for (std::uint64_t k = 0; k < m.size(); ++k) m[k] = prob(k, y) / mass;
        return KeyDistribution::from_dense(key_bits_, std::move(m));
    }

    // I(K;Y) in bits.
    double mutual_information() const {
        std::vector<double> py = obs_marginal();
        std::vector<double> pk(domain_size(key_bits_), 0.0);
        for (std::uint64_t k = 0; k < pk.size(); ++k)
            for (int y = 0; y < obs_count_; ++y) pk[k] += prob(k, y);
        double mi = 0.0;
        for (std::uint64_t k = 0; k < pk.size(); ++k) {
            for (int y = 0; y < obs_count_; ++y) {
                double pxy = prob(k, y);
                if (pxy > 0.0 && pk[k] > 0.0 && py[y] > 0.0)
                    mi += pxy * std::log2(pxy / (pk[k] * py[y]));
            }
        }
        return std::max(0.0, mi);
    }

    // H(K|Y) in bits.
    double conditional_key_entropy() const {
        std::vector<double> py = obs_marginal();
        double h = 0.0;
        for (int y = 0; y < obs_count_; ++y) {
            if (py[y] <= 0.0) continue;
            for (std::uint64_t k = 0; k < domain_size(key_bits_); ++k) {
                double pxy = prob(k, y);
                if (pxy > 0.0) h += pxy * std::log2(py[y] / pxy);
            }
        }
        return h;
    }

    void validate() const {
        double total = 0.0;
        for (double v : p_) {
            if (v < 0.0) throw std::invalid_argument("JointKY: negative probability");
            total += v;
        }
        if (std::fabs(total - 1.0) > 1e-9)
            throw std::invalid_argument("JointKY: probabilities must sum to one");
    }

private:
    int key_bits_ = 1;
    int obs_count_ = 1;
    std::vector<double> p_;
};

inline double mutual_information(const JointKY& j) { return j.mutual_information(); }

// ---------------------------------------------------------------------------
// Conditioning
// ---------------------------------------------------------------------------

// Distribution of the unknown bits after revealing the bits selected by
// `known_mask` to equal `known_values` (positions keep their relative order).
// Conditioning on a zero-probability event is an error, never a silent NaN.
template <class R>
BasicKeyDistribution<R> conditional_profile(const BasicKeyDistribution<R>& p,
                                            std::uint64_t known_mask,
                                            std::uint64_t known_values) {
    using S = scalar_traits<R>;
    const std::uint64_t full = domain_size(p.bits()) - 1;
    if ((known_mask & ~full) != 0) throw std::invalid_argument("known positions outside key");
    const int known = popcount(known_mask);
    if (known == 0) return p;
    if (known == p.bits()) throw std::invalid_argument("conditioning on the entire key");
    const int rest_bits = p.bits() - known;
    const std::uint64_t rest_mask = full & ~known_mask;
    const std::uint64_t want = known_values & known_mask;

    if (p.dense()) {
        std::vector<R> out(domain_size(rest_bits), S::zero());
        R mass = S::zero();
        for (std::uint64_t k = 0; k < p.size(); ++k) {
            if ((k & known_mask) != want) continue;
            R v = p.dense_probs()[k];
            out[extract_bits(k, rest_mask)] = v;
            mass += v;
        }
        if (!(mass > S::zero())) throw std::domain_error("conditioning event has zero probability");
        for (R& v : out) v /= mass;
        return BasicKeyDistribution<R>::from_dense(rest_bits, std::move(out));
    }

    std::vector<typename BasicKeyDistribution<R>::Atom> atoms;
    R atom_mass = S::zero();
    std::uint64_t matching_atoms = 0;
    for (const auto& [k, v] : p.atoms()) {
        if ((k & known_mask) != want) continue;
        atoms.push_back({extract_bits(k, rest_mask), v});
        atom_mass += v;
        ++matching_atoms;
    }
    const std::uint64_t bg_count = domain_size(rest_bits) - matching_atoms;
    R bg = p.background_value();
    R mass = atom_mass;
    if (bg_count > 0 && p.background() == Background::uniform) {
        if constexpr (S::exact) mass += bg * R(std::int64_t(bg_count));
        else mass += bg * double(bg_count);
    }
    if (!(mass > S::zero())) throw std::domain_error("conditioning event has zero probability");
    for (auto& [k, v] : atoms) v /= mass;
    Background outbg = p.background();
    if (outbg == Background::uniform && bg_count == 0) outbg = Background::zero;
    return BasicKeyDistribution<R>::from_atoms(rest_bits, std::move(atoms), outbg);
}

// ---------------------------------------------------------------------------
// Per-bit guessing error
// ---------------------------------------------------------------------------

// Probability that bit i equals one.
template <class R>
double bit_marginal(const BasicKeyDistribution<R>& p, int i) {
    using S = scalar_traits<R>;
    if (i < 0 || i >= p.bits()) throw std::invalid_argument("bit index out of range");
    const std::uint64_t bit = std::uint64_t(1) << i;
    double m = 0.0;
    if (p.dense()) {
        for (std::uint64_t k = 0; k < p.size(); ++k)
            if (k & bit) m += S::to_double(p.dense_probs()[k]);
        return m;
    }
    std::uint64_t atoms_set = 0;
    for (const auto& [k, v] : p.atoms()) {
        if (k & bit) {
            m += S::to_double(v);
            ++atoms_set;
        }
    }
    const std::uint64_t bg_set = domain_size(p.bits() - 1) - atoms_set;
    m += double(bg_set) * S::to_double(p.background_value());
    return m;
}

// Average error rate of the best per-bit guess: (1/n) sum_i min(m_i, 1-m_i),
// where m_i is the marginal of bit i. 1/2 for the uniform key, 0 for a point
// mass.
template <class R>
double optimal_ber(const BasicKeyDistribution<R>& p) {
    double acc = 0.0;
    for (int i = 0; i < p.bits(); ++i) {
        double m = bit_marginal(p, i);
        acc += std::min(m, 1.0 - m);
    }
    return acc / double(p.bits());
}

// ---------------------------------------------------------------------------
// Pushforward through a key map
// ---------------------------------------------------------------------------

// Distribution of f(K) for a dense input; `f` maps keys into out_bits.
template <class R, class F>
BasicKeyDistribution<R> pushforward(const BasicKeyDistribution<R>& p, int out_bits, F&& f) {
    using S = scalar_traits<R>;
    std::vector<R> out(domain_size(out_bits), S::zero());
    if (!p.dense()) throw std::invalid_argument("pushforward requires a dense distribution");
    for (std::uint64_t k = 0; k < p.size(); ++k) {
        std::uint64_t img = f(k);
        if (img >= out.size()) throw std::invalid_argument("pushforward image outside range");
        out[img] += p.dense_probs()[k];
    }
    return BasicKeyDistribution<R>::from_dense(out_bits, std::move(out));
}

}  // namespace keysec
