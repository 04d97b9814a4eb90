#ifndef HERZLAB_RATIONAL_HPP
#define HERZLAB_RATIONAL_HPP

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace herz {

// Exact rational endpoints for mesh breakpoints. Coefficient arithmetic is
// double precision; breakpoints stay exact so cell/annulus membership is
// decided without rounding.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n) : num(n), den(1) {}
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    bool is_zero() const { return num == 0; }
    bool is_negative() const { return num < 0; }
    bool is_positive() const { return num > 0; }

    Rational operator-() const { return make_raw(-num, den); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        __int128 n = (__int128)a.num * b.den + (__int128)b.num * a.den;
        __int128 d = (__int128)a.den * b.den;
        return reduce128(n, d);
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return reduce128((__int128)a.num * b.num, (__int128)a.den * b.den);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num == 0) throw std::invalid_argument("Rational: division by zero");
        return reduce128((__int128)a.num * b.den, (__int128)a.den * b.num);
    }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return (__int128)a.num * b.den < (__int128)b.num * a.den;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    Rational abs() const { return num < 0 ? -*this : *this; }

    // 2^k for |k| <= 62
    static Rational pow2(int k);

    // Parses "p/q", integers, or plain decimals ("-0.25", "1.5e0" not supported).
    static Rational parse(const std::string& s);
    std::string str() const;

  private:
    static Rational make_raw(std::int64_t n, std::int64_t d) {
        Rational r; r.num = n; r.den = d; return r;
    }
    static Rational reduce128(__int128 n, __int128 d);
};

}  // namespace herz

#endif
