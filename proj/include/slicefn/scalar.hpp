#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <type_traits>

#include <boost/multiprecision/gmp.hpp>

#include "slicefn/error.hpp"

namespace slicefn {

/// Exact rational scalar (GMP backed, expression templates off so that
/// `auto` deduces plain values in generic code).
using Rational =
    boost::multiprecision::number<boost::multiprecision::gmp_rational, boost::multiprecision::et_off>;
using BigInt =
    boost::multiprecision::number<boost::multiprecision::gmp_int, boost::multiprecision::et_off>;

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static constexpr const char* mode_name = "double";

  static double from_ratio(long long p, long long q) { return double(p) / double(q); }
  static double from_double(double x) { return x; }
  static double to_double(double x) { return x; }
  static bool is_zero(double x, double tol) { return std::abs(x) <= tol; }
  static std::optional<double> exact_sqrt(double x) {
    if (x < 0) return std::nullopt;
    return std::sqrt(x);
  }
  static std::string to_string(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
  }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr const char* mode_name = "rational";

  static Rational from_ratio(long long p, long long q) { return Rational(p) / Rational(q); }
  // Every finite double is a dyadic rational, so this conversion is exact.
  static Rational from_double(double x) { return Rational(x); }
  static double to_double(const Rational& x) { return x.convert_to<double>(); }
  static bool is_zero(const Rational& x, double) { return x == 0; }
  static std::optional<Rational> exact_sqrt(const Rational& x) {
    if (x < 0) return std::nullopt;
    BigInt num = boost::multiprecision::numerator(x);
    BigInt den = boost::multiprecision::denominator(x);
    BigInt rn = boost::multiprecision::sqrt(num);
    BigInt rd = boost::multiprecision::sqrt(den);
    if (rn * rn != num || rd * rd != den) return std::nullopt;
    return Rational(rn) / Rational(rd);
  }
  static std::string to_string(const Rational& x) {
    BigInt num = boost::multiprecision::numerator(x);
    BigInt den = boost::multiprecision::denominator(x);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
  }
};

template <class S>
concept Scalar = std::is_same_v<S, double> || std::is_same_v<S, Rational>;

template <Scalar S>
double to_double(const S& x) {
  return ScalarTraits<S>::to_double(x);
}

template <Scalar S>
S from_double(double x) {
  return ScalarTraits<S>::from_double(x);
}

template <Scalar S>
bool near_zero(const S& x, double tol) {
  return ScalarTraits<S>::is_zero(x, tol);
}

/// Square root that stays in S. Rational inputs must be perfect squares.
template <Scalar S>
S scalar_sqrt(const S& x) {
  auto r = ScalarTraits<S>::exact_sqrt(x);
  if (!r) {
    throw SliceError(ErrorCode::InexactSquareRoot,
                     "square root of " + ScalarTraits<S>::to_string(x) + " is not representable");
  }
  return *r;
}

/// Parses "p", "p/q" or a decimal literal such as "-1.25" exactly.
inline Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    Rational num = parse_rational(text.substr(0, slash));
    Rational den = parse_rational(text.substr(slash + 1));
    if (den == 0) throw SliceError(ErrorCode::InvalidArgument, "zero denominator in " + text);
    return num / den;
  }
  std::string digits;
  bool negative = false;
  std::size_t pos = 0;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
    negative = text[pos] == '-';
    ++pos;
  }
  int frac_digits = -1;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (c == '.' && frac_digits < 0) {
      frac_digits = 0;
    } else if (c >= '0' && c <= '9') {
      digits.push_back(c);
      if (frac_digits >= 0) ++frac_digits;
    } else {
      throw SliceError(ErrorCode::InvalidArgument, "malformed number '" + text + "'");
    }
  }
  if (digits.empty()) throw SliceError(ErrorCode::InvalidArgument, "malformed number '" + text + "'");
  Rational value{BigInt(digits)};
  if (frac_digits > 0) value /= Rational(boost::multiprecision::pow(BigInt(10), frac_digits));
  return negative ? Rational(-value) : value;
}

}  // namespace slicefn
