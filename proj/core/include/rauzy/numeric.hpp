#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace rauzy {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

enum class NumericMode : std::uint8_t { exact, fast };

std::string_view to_string(NumericMode mode);
NumericMode parse_numeric_mode(std::string_view text);

// Accepts "p", "p/q", and decimal literals with an optional exponent
// ("0.25", "-1.5e-3"). Decimal input is converted exactly.
Rational parse_rational(std::string_view text);

// "p/q", or "p" when the denominator is 1.
std::string format_rational(const Rational& value);

// 17 significant digits, enough to round-trip any double.
std::string format_double(double value);

double to_double(const Rational& value);
double to_double(const BigInt& value);

// Exact conversion; every finite double is a dyadic rational.
Rational exact_rational(double value);

}  // namespace rauzy
