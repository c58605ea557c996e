#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "apxgroups/errors.hpp"

namespace apx {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational with unbounded numerator/denominator, always kept in
/// lowest terms with a positive denominator. Every bound, ratio and
/// threshold in this library is one of these; nothing is ever rounded.
using Rational = boost::multiprecision::cpp_rational;

/// Parses "p/q", "p", or a plain decimal such as "0.1" (converted
/// exactly, 0.1 -> 1/10). Throws InputError on anything else.
Rational parse_rational(const std::string& text);

/// Formats as "p/q", or just "p" when the denominator is 1.
std::string format_rational(const Rational& r);

/// Fixed-point decimal approximation (round toward zero), for the
/// non-authoritative "approx" report fields.
std::string decimal_approx(const Rational& r, int digits = 6);

/// r^k by binary powering, k >= 0.
Rational rational_pow(const Rational& r, unsigned k);

inline BigInt numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

}  // namespace apx
