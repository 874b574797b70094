#pragma once

// Exact rational arithmetic for probability bookkeeping on small key spaces.
// Numerator/denominator are kept reduced in 64 bits; intermediate products go
// through 128-bit integers and overflow raises instead of wrapping.

#include <cmath>
#include <cstdint>
#include <compare>
#include <numeric>
#include <stdexcept>
#include <string>

namespace keysec {

class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t value) : num_(value), den_(1) {}

    Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
        if (den_ == 0) throw std::invalid_argument("Rational: zero denominator");
        normalize();
    }

    // 2^e for any e with |e| < 63.
    static Rational pow2(int e) {
        if (e < -62 || e > 62) throw std::overflow_error("Rational::pow2: exponent out of range");
        Rational r;
        if (e >= 0) {
            r.num_ = std::int64_t(1) << e;
            r.den_ = 1;
        } else {
            r.num_ = 1;
            r.den_ = std::int64_t(1) << (-e);
        }
        return r;
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    bool is_zero() const { return num_ == 0; }

    double to_double() const { return double(num_) / double(den_); }

    std::string str() const {
        return den_ == 1 ? std::to_string(num_)
                         : std::to_string(num_) + "/" + std::to_string(den_);
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return from_i128(i128(a.num_) * b.den_ + i128(b.num_) * a.den_,
                         i128(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return from_i128(i128(a.num_) * b.den_ - i128(b.num_) * a.den_,
                         i128(a.den_) * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from_i128(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
        return from_i128(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }
    Rational operator-() const {
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        return i128(a.num_) * b.den_ <=> i128(b.num_) * a.den_;
    }

    friend Rational abs(const Rational& a) { return a.num_ < 0 ? -a : a; }

private:
    using i128 = __int128;

    static Rational from_i128(i128 num, i128 den) {
        if (den < 0) { num = -num; den = -den; }
        i128 g = gcd128(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
        constexpr i128 lo = -i128(INT64_MAX), hi = i128(INT64_MAX);
        if (num < lo || num > hi || den > hi)
            throw std::overflow_error("Rational: value exceeds 64-bit range");
        Rational r;
        r.num_ = std::int64_t(num);
        r.den_ = std::int64_t(den);
        return r;
    }

    static i128 gcd128(i128 a, i128 b) {
        while (b != 0) { i128 t = a % b; a = b; b = t; }
        return a == 0 ? 1 : a;
    }

    void normalize() {
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

// Uniform access to the two probability scalar types (double / Rational).
template <class R>
struct scalar_traits;

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double pow2(int e) { return std::ldexp(1.0, e); }
    static double to_double(double x) { return x; }
    static double from_ratio(std::int64_t n, std::int64_t d) { return double(n) / double(d); }
};

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static Rational pow2(int e) { return Rational::pow2(e); }
    static double to_double(const Rational& x) { return x.to_double(); }
    static Rational from_ratio(std::int64_t n, std::int64_t d) { return Rational(n, d); }
};

}  // namespace keysec
