#pragma once
/**
 * @file rational.hpp
 * @brief Exact rationals over int64 with overflow-checked arithmetic.
 */

#include "core.hpp"

#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

namespace cuntz {

class Rational {
public:
    Rational() = default;
    Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit from integers is intended
    Rational(std::int64_t n, std::int64_t d) {
        if (d == 0) throw InvalidInput("rational with zero denominator");
        set(n, d);
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    bool is_zero() const { return num_ == 0; }
    int sign() const { return (num_ > 0) - (num_ < 0); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return from_wide(__int128(a.num_) * b.den_ + __int128(b.num_) * a.den_, __int128(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return from_wide(__int128(a.num_) * b.den_ - __int128(b.num_) * a.den_, __int128(a.den_) * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from_wide(__int128(a.num_) * b.num_, __int128(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw InvalidInput("rational division by zero");
        return from_wide(__int128(a.num_) * b.den_, __int128(a.den_) * b.num_);
    }
    Rational operator-() const { return from_wide(-__int128(num_), den_); }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator<(const Rational& a, const Rational& b) {
        return __int128(a.num_) * b.den_ < __int128(b.num_) * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    std::string str() const { return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_); }
    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    static Rational from_wide(__int128 n, __int128 d) {
        if (d == 0) throw InvalidInput("rational with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        __int128 a = n < 0 ? -n : n, b = d;
        while (b != 0) { __int128 t = a % b; a = b; b = t; }
        if (a > 1) { n /= a; d /= a; }
        constexpr __int128 lim = std::numeric_limits<std::int64_t>::max();
        if (n > lim || n < -lim || d > lim) throw BoundExceeded("rational overflow");
        Rational r;
        r.num_ = std::int64_t(n);
        r.den_ = std::int64_t(d);
        return r;
    }
    void set(std::int64_t n, std::int64_t d) { *this = from_wide(n, d); }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace cuntz
