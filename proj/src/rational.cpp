#include "herzlab/rational.hpp"

#include <cstdlib>

namespace herz {

Rational Rational::reduce128(__int128 n, __int128 d) {
    if (d == 0) throw std::invalid_argument("Rational: zero denominator");
    if (d < 0) { n = -n; d = -d; }
    __int128 an = n < 0 ? -n : n;
    // binary gcd on __int128
    __int128 a = an, b = d;
    while (b != 0) { __int128 t = a % b; a = b; b = t; }
    if (a > 1) { n /= a; d /= a; }
    constexpr __int128 lim = (__int128)INT64_MAX;
    if (n > lim || n < -lim || d > lim)
        throw std::overflow_error("Rational: overflow after reduction");
    Rational r;
    r.num = (std::int64_t)n;
    r.den = (std::int64_t)d;
    return r;
}

Rational Rational::pow2(int k) {
    if (k < -62 || k > 62) throw std::overflow_error("Rational::pow2: exponent out of range");
    if (k >= 0) return Rational((std::int64_t)1 << k, 1);
    return Rational(1, (std::int64_t)1 << (-k));
}

Rational Rational::parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("Rational::parse: empty string");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::int64_t n = std::stoll(s.substr(0, slash));
        std::int64_t d = std::stoll(s.substr(slash + 1));
        return Rational(n, d);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(std::stoll(s), 1);
    std::string head = s.substr(0, dot), frac = s.substr(dot + 1);
    bool neg = !head.empty() && head[0] == '-';
    if (!head.empty() && (head[0] == '+' || head[0] == '-')) head = head.substr(1);
    if (frac.size() > 18) frac = frac.substr(0, 18);
    std::int64_t ip = head.empty() ? 0 : std::stoll(head);
    std::int64_t fp = frac.empty() ? 0 : std::stoll(frac);
    std::int64_t den = 1;
    for (size_t i = 0; i < frac.size(); ++i) den *= 10;
    __int128 n = (__int128)ip * den + fp;
    if (neg) n = -n;
    return reduce128(n, den);
}

std::string Rational::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

}  // namespace herz
