#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace bergman {

using Rational = mpq_class;
using Integer = mpz_class;

/// Builds a canonical rational from a numerator/denominator pair.
Rational make_rational(long num, long den = 1);

/// Parses "p", "p/q" or a decimal literal such as "0.1" into an exact rational.
Rational parse_rational(const std::string& text);

std::string numerator_string(const Rational& q);
std::string denominator_string(const Rational& q);

Integer factorial(unsigned n);
Integer binomial(unsigned n, unsigned k);

double to_double(const Rational& q);

/// Scalar-type glue so the series templates can run over Rational or double.
template <typename S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static bool is_zero(const Rational& s) { return sgn(s) == 0; }
  static Rational from_rational(const Rational& q) { return q; }
  static double to_double(const Rational& s) { return bergman::to_double(s); }
  static constexpr bool exact = true;
};

template <>
struct ScalarTraits<double> {
  static bool is_zero(double s) { return s == 0.0; }
  static double from_rational(const Rational& q) { return bergman::to_double(q); }
  static double to_double(double s) { return s; }
  static constexpr bool exact = false;
};

}  // namespace bergman
