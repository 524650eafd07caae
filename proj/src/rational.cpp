#include "bergman/rational.hpp"

#include <stdexcept>

namespace bergman {

Rational make_rational(long num, long den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  const auto dot = text.find('.');
  const auto exp = text.find_first_of("eE");
  if (dot == std::string::npos && exp == std::string::npos) {
    Rational q;
    if (q.set_str(text, 10) != 0) throw std::invalid_argument("bad rational literal '" + text + "'");
    if (q.get_den() == 0) throw std::invalid_argument("rational with zero denominator: '" + text + "'");
    q.canonicalize();
    return q;
  }
  // Decimal literal: mantissa digits over a power of ten, scaled by the exponent.
  std::string mantissa = text.substr(0, exp);
  long exponent = 0;
  if (exp != std::string::npos) {
    try {
      exponent = std::stol(text.substr(exp + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad exponent in '" + text + "'");
    }
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_dot = false;
  for (char ch : mantissa) {
    if (ch == '.') {
      if (seen_dot) throw std::invalid_argument("bad decimal literal '" + text + "'");
      seen_dot = true;
    } else {
      digits.push_back(ch);
      if (seen_dot) ++frac_digits;
    }
  }
  Integer num;
  if (digits.empty() || digits == "-" || digits == "+" || num.set_str(digits, 10) != 0) {
    throw std::invalid_argument("bad decimal literal '" + text + "'");
  }
  const long shift = exponent - frac_digits;
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  Rational q = shift < 0 ? Rational(num, scale) : Rational(num * scale);
  q.canonicalize();
  return q;
}

std::string numerator_string(const Rational& q) { return q.get_num().get_str(); }
std::string denominator_string(const Rational& q) { return q.get_den().get_str(); }

Integer factorial(unsigned n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

Integer binomial(unsigned n, unsigned k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

double to_double(const Rational& q) { return mpq_get_d(q.get_mpq_t()); }

}  // namespace bergman
