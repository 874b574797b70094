#pragma once

// Toy-scale cryptographic mechanisms: one-time pad, Toeplitz hashing over
// GF(2) for privacy amplification, Fibonacci shift-register keystreams, and a
// polynomial-evaluation authentication family whose quality is measured
// exhaustively rather than assumed. Bit 0 is the least significant bit and
// counts as the first transmitted bit everywhere.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "keysec/bits.hpp"
#include "keysec/distribution.hpp"

namespace keysec {

// ---------------------------------------------------------------------------
// Bit strings and the one-time pad
// ---------------------------------------------------------------------------

struct BitString {
    std::uint64_t value = 0;
    int size = 0;

    static BitString make(std::uint64_t value, int size) {
        if (size < 1 || size > 62) throw std::invalid_argument("BitString: size out of range");
        if (size < 62 && value >= (std::uint64_t(1) << size))
            throw std::invalid_argument("BitString: value wider than size");
        return {value, size};
    }

    static BitString from_string(const std::string& s) {
        return {key_from_string(s), int(s.size())};
    }

    std::string str() const { return key_to_string(value, size); }

    friend bool operator==(const BitString&, const BitString&) = default;
};

// y_i = x_i xor k_i; self-inverse, and uniform k makes y uniform for any x.
inline BitString otp_encrypt(const BitString& x, const BitString& k) {
    if (x.size != k.size) throw std::invalid_argument("otp_encrypt: length mismatch");
    return {x.value ^ k.value, x.size};
}

inline BitString otp_decrypt(const BitString& y, const BitString& k) { return otp_encrypt(y, k); }

// ---------------------------------------------------------------------------
// Toeplitz matrices over GF(2)
// ---------------------------------------------------------------------------

// rows x cols binary matrix determined by rows+cols-1 diagonal bits:
// entry(i,j) = diagonals[i - j + cols - 1].
class ToeplitzMatrix {
public:
    static ToeplitzMatrix from_diagonals(int rows, int cols, std::uint64_t diagonals) {
        if (rows < 1 || cols < 1 || rows + cols - 1 > 62)
            throw std::invalid_argument("ToeplitzMatrix: shape out of range");
        if (rows + cols - 1 < 62 && diagonals >= (std::uint64_t(1) << (rows + cols - 1)))
            throw std::invalid_argument("ToeplitzMatrix: diagonal word wider than shape");
        ToeplitzMatrix t;
        t.rows_ = rows;
        t.cols_ = cols;
        t.diagonals_ = diagonals;
        t.row_masks_.resize(std::size_t(rows));
        for (int i = 0; i < rows; ++i) {
            std::uint64_t mask = 0;
            for (int j = 0; j < cols; ++j)
                if ((diagonals >> (i - j + cols - 1)) & 1u) mask |= std::uint64_t(1) << j;
            t.row_masks_[std::size_t(i)] = mask;
        }
        return t;
    }

    static ToeplitzMatrix identity(int n) {
        return from_diagonals(n, n, std::uint64_t(1) << (n - 1));
    }

    static ToeplitzMatrix random(int rows, int cols, std::mt19937_64& rng) {
        int bits = rows + cols - 1;
        std::uint64_t word = rng() & (bits >= 62 ? ~std::uint64_t(0) : (std::uint64_t(1) << bits) - 1);
        return from_diagonals(rows, cols, word);
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::uint64_t diagonals() const { return diagonals_; }

    int entry(int i, int j) const {
        if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw std::out_of_range("ToeplitzMatrix::entry");
        return int((diagonals_ >> (i - j + cols_ - 1)) & 1u);
    }

    std::uint64_t row_mask(int i) const { return row_masks_[std::size_t(i)]; }

    // Rank over GF(2), by elimination on the row masks.
    int rank() const {
        std::vector<std::uint64_t> rows(row_masks_);
        int r = 0;
        for (int col = 0; col < cols_ && r < rows_; ++col) {
            std::uint64_t bit = std::uint64_t(1) << col;
            int pivot = -1;
            for (int i = r; i < rows_; ++i)
                if (rows[std::size_t(i)] & bit) { pivot = i; break; }
            if (pivot < 0) continue;
            std::swap(rows[std::size_t(pivot)], rows[std::size_t(r)]);
            for (int i = 0; i < rows_; ++i)
                if (i != r && (rows[std::size_t(i)] & bit)) rows[std::size_t(i)] ^= rows[std::size_t(r)];
            ++r;
        }
        return r;
    }

private:
    int rows_ = 1, cols_ = 1;
    std::uint64_t diagonals_ = 0;
    std::vector<std::uint64_t> row_masks_;
};

// Matrix-vector product over GF(2); linear by construction.
inline std::uint64_t toeplitz_hash(const ToeplitzMatrix& t, std::uint64_t input) {
    if (t.cols() < 62 && input >= (std::uint64_t(1) << t.cols()))
        throw std::invalid_argument("toeplitz_hash: input wider than matrix");
    std::uint64_t out = 0;
    for (int i = 0; i < t.rows(); ++i)
        out |= std::uint64_t(parity(t.row_mask(i) & input)) << i;
    return out;
}

// ---------------------------------------------------------------------------
// Linear feedback shift registers
// ---------------------------------------------------------------------------

// Fibonacci register of seed_bits cells. `poly` holds the feedback
// coefficients: bit i is the coefficient of x^i, the x^seed_bits term is
// implicit, and bit 0 must be set (non-degenerate).
struct LfsrSpec {
    int seed_bits = 4;
    std::uint64_t poly = 0b1001;

    static LfsrSpec make(int seed_bits, std::uint64_t poly) {
        if (seed_bits < 2 || seed_bits > 32) throw std::invalid_argument("LfsrSpec: seed bits out of range");
        if ((poly & 1u) == 0) throw std::invalid_argument("LfsrSpec: degenerate feedback (constant term unset)");
        if (poly >> seed_bits != 0) throw std::invalid_argument("LfsrSpec: coefficients wider than register");
        return {seed_bits, poly};
    }
};

inline std::uint64_t lfsr_step(const LfsrSpec& spec, std::uint64_t state) {
    std::uint64_t fb = std::uint64_t(parity(state & spec.poly));
    return (state >> 1) | (fb << (spec.seed_bits - 1));
}

// Output stream, one bit per element. The zero seed would emit the all-zero
// period-one stream and is rejected.
inline std::vector<std::uint8_t> lfsr_keystream(const LfsrSpec& spec, std::uint64_t seed,
                                                std::size_t length) {
    if (seed == 0) throw std::invalid_argument("lfsr_keystream: zero seed is degenerate");
    if (seed >> spec.seed_bits != 0) throw std::invalid_argument("lfsr_keystream: seed wider than register");
    std::vector<std::uint8_t> out;
    out.reserve(length);
    std::uint64_t state = seed;
    for (std::size_t i = 0; i < length; ++i) {
        out.push_back(std::uint8_t(state & 1u));
        state = lfsr_step(spec, state);
    }
    return out;
}

// State cycle length starting from `seed` (at most 2^seed_bits steps).
inline std::uint64_t lfsr_period(const LfsrSpec& spec, std::uint64_t seed) {
    if (seed == 0) throw std::invalid_argument("lfsr_period: zero seed is degenerate");
    std::uint64_t state = seed;
    for (std::uint64_t steps = 1; steps <= domain_size(spec.seed_bits); ++steps) {
        state = lfsr_step(spec, state);
        if (state == seed) return steps;
    }
    throw std::logic_error("lfsr_period: no cycle found");  // unreachable
}

// ---------------------------------------------------------------------------
// GF(2^t) and the polynomial-evaluation authentication family
// ---------------------------------------------------------------------------

// One irreducible polynomial per field degree (bit i = coefficient of x^i).
inline std::uint32_t gf2_reduction_poly(int t) {
    static constexpr std::uint32_t table[9] = {0,     0b11,      0b111,     0b1011,   0b10011,
                                               0b100101, 0b1000011, 0b10000011, 0b100011011};
    if (t < 1 || t > 8) throw std::invalid_argument("gf2_reduction_poly: degree out of range");
    return table[t];
}

inline std::uint32_t gf2_mul(std::uint32_t a, std::uint32_t b, int t) {
    const std::uint32_t poly = gf2_reduction_poly(t);
    const std::uint32_t top = std::uint32_t(1) << t;
    std::uint32_t r = 0;
    while (b != 0) {
        if (b & 1u) r ^= a;
        b >>= 1;
        a <<= 1;
        if (a & top) a ^= poly;
    }
    return r;
}

// Hash family h_{a,b}(m) = b + sum_i m_i a^i over GF(2^t), keyed by the pair
// (a,b). Messages are msg_blocks field elements packed into one word. The
// family quality (best substitution success under a uniform key) is computed
// by mac_epsilon by exhausting keys and message pairs, never assumed.
class PolyMacFamily {
public:
    static PolyMacFamily make(int tag_bits, int msg_blocks) {
        if (tag_bits < 1 || tag_bits > 8) throw std::invalid_argument("PolyMacFamily: tag bits out of range");
        if (msg_blocks < 0 || msg_blocks > 6) throw std::invalid_argument("PolyMacFamily: block count out of range");
        if (2 * tag_bits > 16) throw std::invalid_argument("PolyMacFamily: key space beyond exhaustive budget");
        PolyMacFamily f;
        f.tag_bits_ = tag_bits;
        f.msg_blocks_ = msg_blocks;
        return f;
    }

    int tag_bits() const { return tag_bits_; }
    int msg_blocks() const { return msg_blocks_; }
    int key_bits() const { return 2 * tag_bits_; }
    std::uint64_t key_space() const { return domain_size(key_bits()); }
    std::uint64_t tag_space() const { return domain_size(tag_bits_); }
    std::uint64_t message_space() const { return domain_size(tag_bits_ * msg_blocks_); }

    std::uint32_t message_block(std::uint64_t message, int i) const {
        return std::uint32_t((message >> (i * tag_bits_)) & (tag_space() - 1));
    }

    std::uint32_t tag(std::uint64_t key, std::uint64_t message) const {
        if (key >= key_space()) throw std::invalid_argument("PolyMacFamily::tag: key outside space");
        if (message >= message_space()) throw std::invalid_argument("PolyMacFamily::tag: message outside space");
        const std::uint32_t a = std::uint32_t(key & (tag_space() - 1));
        const std::uint32_t b = std::uint32_t(key >> tag_bits_);
        // Horner: ((m_{s-1}) a + m_{s-2}) a + ... , yielding sum m_i a^{i+1}
        std::uint32_t acc = 0;
        for (int i = msg_blocks_ - 1; i >= 0; --i)
            acc = gf2_mul(acc ^ message_block(message, i), a, tag_bits_);
        return acc ^ b;
    }

private:
    int tag_bits_ = 4;
    int msg_blocks_ = 2;
};

// True worst-case substitution success under a uniform key: the maximum over
// observed (m1,t1) and forged m2 != m1 of the conditional probability that
// some t2 verifies. Exhaustive; errors out rather than sampling when the
// space is too large.
inline double mac_epsilon(const PolyMacFamily& f) {
    const std::uint64_t msgs = f.message_space();
    if (msgs < 2) throw std::domain_error("mac_epsilon: substitution undefined for a single-message family");
    const std::uint64_t keys = f.key_space();
    const std::uint64_t tags = f.tag_space();
    if (msgs * msgs * keys > (std::uint64_t(1) << 31))
        throw std::invalid_argument("mac_epsilon: family beyond exhaustive budget");

    double worst = 0.0;
    std::vector<std::uint32_t> t1_of_key(keys);
    std::vector<double> joint(tags * tags);
    std::vector<double> row(tags);
    for (std::uint64_t m1 = 0; m1 < msgs; ++m1) {
        for (std::uint64_t k = 0; k < keys; ++k) t1_of_key[k] = f.tag(k, m1);
        for (std::uint64_t m2 = 0; m2 < msgs; ++m2) {
            if (m2 == m1) continue;
            std::fill(joint.begin(), joint.end(), 0.0);
            std::fill(row.begin(), row.end(), 0.0);
            for (std::uint64_t k = 0; k < keys; ++k) {
                std::uint32_t t1 = t1_of_key[k];
                std::uint32_t t2 = f.tag(k, m2);
                joint[t1 * tags + t2] += 1.0;
                row[t1] += 1.0;
            }
            for (std::uint64_t t1 = 0; t1 < tags; ++t1) {
                if (row[t1] <= 0.0) continue;
                for (std::uint64_t t2 = 0; t2 < tags; ++t2)
                    worst = std::max(worst, joint[t1 * tags + t2] / row[t1]);
            }
        }
    }
    return worst;
}

// Best impersonation success under a uniform key: max over (m,t) of the
// fraction of keys with h_k(m) = t.
inline double mac_impersonation_success(const PolyMacFamily& f) {
    const std::uint64_t keys = f.key_space();
    const std::uint64_t tags = f.tag_space();
    double worst = 0.0;
    std::vector<double> count(tags);
    for (std::uint64_t m = 0; m < f.message_space(); ++m) {
        std::fill(count.begin(), count.end(), 0.0);
        for (std::uint64_t k = 0; k < keys; ++k) count[f.tag(k, m)] += 1.0;
        for (std::uint64_t t = 0; t < tags; ++t) worst = std::max(worst, count[t] / double(keys));
    }
    return worst;
}

}  // namespace keysec
