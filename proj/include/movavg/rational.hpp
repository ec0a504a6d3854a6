#pragma once

#include <cstdint>
#include <compare>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace movavg {

/**
 * Exact rational arithmetic on 128-bit integers.
 *
 * Every operation normalizes (gcd-reduced, positive denominator) and checks
 * for overflow, throwing std::overflow_error instead of wrapping.  The
 * magnitudes used here stay small: weight vectors with denominators of a few
 * hundred and products of at most ~16 stochastic matrices, whose entry
 * denominators divide den^m.
 */
class rational {
public:
    using int_type = __int128;

    rational() : num_(0), den_(1) {}
    rational(long long n) : num_(n), den_(1) {} // NOLINT: implicit by design
    rational(long long n, long long d) : num_(n), den_(d) { normalize(); }

    static rational from_int128(int_type n, int_type d) {
        rational r;
        r.num_ = n;
        r.den_ = d;
        r.normalize();
        return r;
    }

    int_type num() const { return num_; }
    int_type den() const { return den_; }

    double to_double() const {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    friend rational operator+(const rational& x, const rational& y) {
        return from_int128(checked_add(checked_mul(x.num_, y.den_), checked_mul(y.num_, x.den_)),
                           checked_mul(x.den_, y.den_));
    }
    friend rational operator-(const rational& x, const rational& y) {
        return from_int128(checked_sub(checked_mul(x.num_, y.den_), checked_mul(y.num_, x.den_)),
                           checked_mul(x.den_, y.den_));
    }
    friend rational operator*(const rational& x, const rational& y) {
        // cross-reduce first to keep intermediates small
        int_type g1 = gcd_abs(x.num_, y.den_);
        int_type g2 = gcd_abs(y.num_, x.den_);
        return from_int128(checked_mul(x.num_ / g1, y.num_ / g2),
                           checked_mul(x.den_ / g2, y.den_ / g1));
    }
    friend rational operator/(const rational& x, const rational& y) {
        if (y.num_ == 0) throw std::domain_error("rational division by zero");
        return x * from_int128(y.den_, y.num_);
    }
    rational operator-() const { return from_int128(-num_, den_); }

    rational& operator+=(const rational& y) { return *this = *this + y; }
    rational& operator-=(const rational& y) { return *this = *this - y; }
    rational& operator*=(const rational& y) { return *this = *this * y; }
    rational& operator/=(const rational& y) { return *this = *this / y; }

    friend bool operator==(const rational& x, const rational& y) {
        return x.num_ == y.num_ && x.den_ == y.den_;
    }
    friend std::strong_ordering operator<=>(const rational& x, const rational& y) {
        // denominators are positive, so cross multiplication preserves order
        int_type l = checked_mul(x.num_, y.den_);
        int_type r = checked_mul(y.num_, x.den_);
        return l <=> r;
    }

    friend rational abs(const rational& x) {
        return x.num_ < 0 ? -x : x;
    }

    /// Integer power with nonnegative exponent.
    friend rational pow(rational base, unsigned e) {
        rational out(1);
        while (e > 0) {
            if (e & 1u) out *= base;
            base *= base;
            e >>= 1u;
        }
        return out;
    }

    std::string to_string() const {
        std::string s = int128_to_string(num_);
        if (den_ != 1) s += "/" + int128_to_string(den_);
        return s;
    }

    friend std::ostream& operator<<(std::ostream& os, const rational& r) {
        return os << r.to_string();
    }

private:
    int_type num_;
    int_type den_;

    void normalize() {
        if (den_ == 0) throw std::domain_error("rational with zero denominator");
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        int_type g = gcd_abs(num_, den_);
        num_ /= g;
        den_ /= g;
    }

    static int_type gcd_abs(int_type a, int_type b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b != 0) {
            int_type t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? 1 : a;
    }

    static int_type checked_add(int_type a, int_type b) {
        int_type r;
        if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("rational overflow");
        return r;
    }
    static int_type checked_sub(int_type a, int_type b) {
        int_type r;
        if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("rational overflow");
        return r;
    }
    static int_type checked_mul(int_type a, int_type b) {
        int_type r;
        if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("rational overflow");
        return r;
    }

    static std::string int128_to_string(int_type v) {
        if (v == 0) return "0";
        bool neg = v < 0;
        std::string digits;
        // careful with the most negative value: negate digit by digit
        while (v != 0) {
            int d = static_cast<int>(v % 10);
            if (d < 0) d = -d;
            digits.push_back(static_cast<char>('0' + d));
            v /= 10;
        }
        if (neg) digits.push_back('-');
        return {digits.rbegin(), digits.rend()};
    }
};

} // namespace movavg
