#include "rauzy/numeric.hpp"

#include "rauzy/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

namespace rauzy {

std::string_view to_string(NumericMode mode) {
  return mode == NumericMode::exact ? "exact" : "fast";
}

NumericMode parse_numeric_mode(std::string_view text) {
  if (text == "exact") return NumericMode::exact;
  if (text == "fast") return NumericMode::fast;
  throw ParseError("unknown numeric mode '" + std::string(text) + "'");
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

BigInt pow10(unsigned k) {
  BigInt r = 1;
  for (unsigned i = 0; i < k; ++i) r *= 10;
  return r;
}

BigInt parse_integer(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw ParseError("malformed integer '" + std::string(s) + "'");
  // A leading zero would select octal.
  while (s.size() > 1 && s.front() == '0') s.remove_prefix(1);
  BigInt v{std::string(s)};
  return negative ? BigInt(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw ParseError("empty number");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(text.substr(0, slash));
    BigInt den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }

  std::string_view mantissa = text;
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = text.substr(0, e);
    BigInt ev = parse_integer(text.substr(e + 1));
    if (abs(ev) > 10000) throw ParseError("exponent out of range in '" + std::string(text) + "'");
    exponent = ev.convert_to<long>();
  }

  bool negative = false;
  if (!mantissa.empty() && (mantissa.front() == '-' || mantissa.front() == '+')) {
    negative = mantissa.front() == '-';
    mantissa.remove_prefix(1);
  }
  std::string_view int_part = mantissa;
  std::string_view frac_part;
  if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
    int_part = mantissa.substr(0, dot);
    frac_part = mantissa.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty()) throw ParseError("malformed number '" + std::string(text) + "'");
  if ((!int_part.empty() && !all_digits(int_part)) || (!frac_part.empty() && !all_digits(frac_part))) {
    throw ParseError("malformed number '" + std::string(text) + "'");
  }

  std::string digits = std::string(int_part) + std::string(frac_part);
  BigInt num = digits.empty() ? BigInt(0) : parse_integer(digits);
  long scale = static_cast<long>(frac_part.size()) - exponent;
  Rational value = scale >= 0 ? Rational(num, pow10(static_cast<unsigned>(scale)))
                              : Rational(num * pow10(static_cast<unsigned>(-scale)));
  return negative ? Rational(-value) : value;
}

std::string format_rational(const Rational& value) {
  const BigInt num = numerator(value);
  const BigInt den = denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  // Shortest representation that reads back to the same double.
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

double to_double(const BigInt& value) { return value.convert_to<double>(); }

Rational exact_rational(double value) {
  if (!std::isfinite(value)) throw DomainError("cannot convert non-finite double to a rational");
  int exp = 0;
  double mant = std::frexp(value, &exp);
  // mant in [0.5, 1): scale to a 53-bit integer.
  auto m = static_cast<long long>(std::ldexp(mant, 53));
  exp -= 53;
  Rational r{BigInt(m)};
  if (exp > 0) {
    BigInt p = 1;
    p <<= exp;
    r *= p;
  } else if (exp < 0) {
    BigInt p = 1;
    p <<= -exp;
    r /= p;
  }
  return r;
}

}  // namespace rauzy
