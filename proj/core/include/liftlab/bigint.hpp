#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace liftlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt pow2(unsigned e) {
    BigInt r = 1;
    r <<= e;
    return r;
}

inline BigInt ipow(const BigInt& base, unsigned e) {
    return boost::multiprecision::pow(base, e);
}

BigInt binomial(unsigned n, unsigned k);

/// log2 of a positive big integer, accurate to double precision.
double log2_big(const BigInt& v);

/// Parses "p/q", "p" or a terminating decimal such as "2.5".
Rational parse_rational(const std::string& text);

std::string to_string(const Rational& r);

BigInt floor_of(const Rational& r);
BigInt ceil_of(const Rational& r);

}  // namespace liftlab
