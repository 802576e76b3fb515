#pragma once

/// \file rational.hpp
/// Exact rational scalars (GMP backed) and the small helpers the rest of the
/// library needs: parsing "p/q" and decimal strings, printing, conversion.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace geodec {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p", "p/q", "-p/q" or a plain decimal such as "0.125" / "-1.5e-2".
/// Decimals are converted exactly (0.1 becomes 1/10, not the nearest double).
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
  if (s.empty()) throw std::invalid_argument("empty rational literal");

  if (s.find('/') != std::string::npos) {
    Rational q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational literal '" + s + "'");
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
  }

  // decimal with optional exponent
  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
  Integer mantissa = 0;
  long scale = 0;
  bool digits = false;
  bool seen_point = false;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (c >= '0' && c <= '9') {
      mantissa = mantissa * 10 + (c - '0');
      if (seen_point) --scale;
      digits = true;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!digits) throw std::invalid_argument("malformed rational literal '" + s + "'");
  if (pos < s.size()) {
    if (s[pos] != 'e' && s[pos] != 'E') throw std::invalid_argument("malformed rational literal '" + s + "'");
    ++pos;
    std::size_t used = 0;
    long exponent = 0;
    try {
      exponent = std::stol(s.substr(pos), &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed exponent in '" + s + "'");
    }
    if (pos + used != s.size()) throw std::invalid_argument("malformed rational literal '" + s + "'");
    scale += exponent;
  }
  Rational q(mantissa);
  Integer ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  if (scale < 0)
    q /= Rational(ten_pow);
  else
    q *= Rational(ten_pow);
  if (negative) q = -q;
  q.canonicalize();
  return q;
}

/// Canonical "p/q" text; integers print without a denominator.
inline std::string to_string(const Rational& q) { return q.get_str(10); }

inline double to_double(const Rational& q) { return q.get_d(); }
inline double to_double(double x) { return x; }

inline Rational abs(const Rational& q) { return ::abs(q); }

inline Integer factorial(int n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

/// Exact square root when q is the square of a rational.
inline bool rational_sqrt(const Rational& q, Rational& root) {
  if (sgn(q) < 0) return false;
  Integer num = q.get_num(), den = q.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) return false;
  Integer rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  root = Rational(rn, rd);
  root.canonicalize();
  return true;
}

}  // namespace geodec
