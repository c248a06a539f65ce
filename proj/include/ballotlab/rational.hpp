#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

#include "ballotlab/error.hpp"

namespace ballotlab {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const Integer& num, const Integer& den) {
    if (den == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator in rational literal");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Rational make_rational(long num, long den = 1) {
    return make_rational(Integer(num), Integer(den));
}

inline Integer floor_of(const Rational& q) {
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

inline Integer ceil_of(const Rational& q) {
    Integer r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

// Result lies in [0, m) for m > 0.
inline Rational mod_positive(const Rational& a, const Rational& m) {
    return a - m * Rational(floor_of(a / m));
}

inline std::string to_string(const Rational& q) { return q.get_str(); }
inline std::string to_string(const Integer& z) { return z.get_str(); }

// Accepts "p", "p/q", or a plain decimal such as "0.25" (converted exactly).
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw Error(ErrorCode::ParseError, "empty rational literal");
    try {
        auto dot = s.find('.');
        if (dot != std::string::npos && s.find('/') == std::string::npos) {
            std::string digits = s.substr(0, dot) + s.substr(dot + 1);
            Integer den = 1;
            for (std::size_t i = dot + 1; i < s.size(); ++i) den *= 10;
            return make_rational(Integer(digits, 10), den);
        }
        Rational q(s, 10);
        if (q.get_den() == 0) throw Error(ErrorCode::ParseError, "zero denominator: " + s);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw Error(ErrorCode::ParseError, "malformed rational: " + s);
    }
}

inline Integer pow_integer(const Integer& base, unsigned long exp) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
    return r;
}

inline Integer lcm(const Integer& a, const Integer& b) {
    Integer r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Integer gcd(const Integer& a, const Integer& b) {
    Integer r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

// Exact ratio a/b rendered as a double without overflowing for huge operands.
inline double ratio_to_double(const Integer& a, const Integer& b) {
    Rational q(a, b);
    q.canonicalize();
    return q.get_d();
}

}  // namespace ballotlab
