#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace mancalog {

// Exact rational arithmetic for all weight-interval endpoints. Fixpoint
// detection compares bounds for exact equality, so endpoint values must
// never pass through binary floating point.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

Rational rational_pow(const Rational& base, unsigned long exponent);

// Accepts "3", "9/10" and "0.9". Decimal literals are scaled by powers of
// ten, so 0.9 parses to exactly 9/10. Returns nullopt on malformed input
// or a zero denominator.
std::optional<Rational> parse_rational(std::string_view text);

std::string to_fraction_string(const Rational& r);

// Decimal rendering for reports. Exact when the reduced denominator is of
// the form 2^a*5^b, otherwise rounded to max_digits fractional digits. The
// fraction form is the authoritative serialization.
std::string to_decimal_string(const Rational& r, int max_digits = 12);

double to_double(const Rational& r);

} // namespace mancalog
