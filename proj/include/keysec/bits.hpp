#pragma once

// Bit-level helpers shared by the whole library. Keys are plain integers;
// bit 0 is the least significant bit and counts as the first key bit.

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace keysec {

inline int popcount(std::uint64_t x) { return std::popcount(x); }

inline int parity(std::uint64_t x) { return std::popcount(x) & 1; }

// 2^n as a count; n is capped well below 64 by every caller.
inline std::uint64_t domain_size(int bits) {
    if (bits < 0 || bits > 62) throw std::invalid_argument("domain_size: bits out of range");
    return std::uint64_t(1) << bits;
}

// Gathers the bits of `key` selected by `mask` into a compact low-order word,
// preserving their relative order (software pext).
inline std::uint64_t extract_bits(std::uint64_t key, std::uint64_t mask) {
    std::uint64_t out = 0;
    int pos = 0;
    while (mask != 0) {
        int b = std::countr_zero(mask);
        out |= ((key >> b) & 1u) << pos;
        ++pos;
        mask &= mask - 1;
    }
    return out;
}

// Scatters the low-order bits of `value` into the positions selected by
// `mask` (software pdep); the inverse of extract_bits on its image.
inline std::uint64_t deposit_bits(std::uint64_t value, std::uint64_t mask) {
    std::uint64_t out = 0;
    int pos = 0;
    while (mask != 0) {
        int b = std::countr_zero(mask);
        out |= ((value >> pos) & 1u) << b;
        ++pos;
        mask &= mask - 1;
    }
    return out;
}

// Key rendered in transmission order: character i is bit i, so the string
// reads least-significant bit first.
inline std::string key_to_string(std::uint64_t key, int bits) {
    std::string s(static_cast<std::size_t>(bits), '0');
    for (int i = 0; i < bits; ++i)
        if ((key >> i) & 1u) s[static_cast<std::size_t>(i)] = '1';
    return s;
}

inline std::uint64_t key_from_string(const std::string& s) {
    if (s.empty() || s.size() > 62) throw std::invalid_argument("key string length out of range");
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '1') key |= std::uint64_t(1) << i;
        else if (s[i] != '0') throw std::invalid_argument("key string must be binary");
    }
    return key;
}

}  // namespace keysec
