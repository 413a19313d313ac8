#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <tuple>

#include "iet/error.hpp"

namespace iet {

// Arbitrary-precision integers and rationals. cpp_rational keeps the value
// in lowest terms with a positive denominator, which is exactly the
// normal form the persistence layer requires.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer num(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer den(const Rational& q) { return boost::multiprecision::denominator(q); }

inline int sign_of(const Rational& q) { return q.sign(); }

// floor(a/b) for b != 0, rounding toward -inf.
inline Integer floor_div(const Integer& a, const Integer& b) {
    Integer q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

inline Integer floor_int(const Rational& q) { return floor_div(num(q), den(q)); }

inline bool is_integer(const Rational& q) { return den(q) == 1; }

// Extended gcd: returns (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0.
inline std::tuple<Integer, Integer, Integer> ext_gcd(Integer a, Integer b) {
    Integer old_r = a, r = b;
    Integer old_s = 1, s = 0;
    Integer old_t = 0, t = 1;
    while (r != 0) {
        Integer q = old_r / r;
        old_r -= q * r; std::swap(old_r, r);
        old_s -= q * s; std::swap(old_s, s);
        old_t -= q * t; std::swap(old_t, t);
    }
    if (old_r < 0) { old_r = -old_r; old_s = -old_s; old_t = -old_t; }
    return {old_r, old_s, old_t};
}

// Largest s with s^2 | n, together with the squarefree part n / s^2.
// Trial division; radicands are small in practice and construction-time only.
inline std::pair<Integer, Integer> squarefree_decompose(Integer n) {
    if (n <= 0) fail(errc::nonpositive_radicand, "radicand must be positive");
    if (n > Integer(1) << 62)
        fail(errc::radicand_too_large, "radicand too large for squarefree check");
    Integer square_part = 1;
    Integer rest = 1;
    for (Integer p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        for (int i = 0; i + 1 < e; i += 2) square_part *= p;
        if (e % 2 == 1) rest *= p;
    }
    rest *= n;  // remaining prime
    return {square_part, rest};
}

inline std::string to_string(const Rational& q) {
    if (den(q) == 1) return num(q).str();
    return num(q).str() + "/" + den(q).str();
}

// Accepts "p" or "p/q" with optional leading minus; q must be positive.
inline Rational parse_rational(const std::string& s) {
    auto bad = [&]() -> Rational {
        fail(errc::invalid_document, "malformed rational '" + s + "'");
    };
    if (s.empty()) return bad();
    auto slash = s.find('/');
    auto check_digits = [&](const std::string& part) {
        if (part.empty()) return false;
        std::size_t i = (part[0] == '-') ? 1 : 0;
        if (i == part.size()) return false;
        for (; i < part.size(); ++i)
            if (part[i] < '0' || part[i] > '9') return false;
        return true;
    };
    try {
        if (slash == std::string::npos) {
            if (!check_digits(s)) return bad();
            return Rational(Integer(s));
        }
        std::string p = s.substr(0, slash), q = s.substr(slash + 1);
        if (!check_digits(p) || !check_digits(q)) return bad();
        Integer qi(q);
        if (qi <= 0) return bad();
        return Rational(Integer(p), qi);
    } catch (const std::exception&) {
        return bad();
    }
}

} // namespace iet
