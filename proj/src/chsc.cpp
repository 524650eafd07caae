#include "bergman/chsc.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bergman/truncated_series.hpp"

namespace bergman {

std::vector<Rational> chsc_a_coeffs(std::size_t n, unsigned L) {
  if (n < 1) throw std::invalid_argument("chsc_a_coeffs: n must be positive");
  std::vector<std::pair<MultiIndex, Rational>> exp_terms, quot_terms;
  for (unsigned k = 0; k <= L; ++k) {
    exp_terms.emplace_back(MultiIndex{k}, Rational(1) / Rational(factorial(k)));
    quot_terms.emplace_back(MultiIndex{k}, Rational(1) / Rational(factorial(k + 1)));
  }
  const auto ex = RationalSeries::from_terms(1, L, exp_terms);
  const auto quot = RationalSeries::from_terms(1, L, quot_terms);  // (e^u - 1)/u
  RationalSeries g = ex;
  for (std::size_t i = 1; i < n; ++i) g = g * quot;
  std::vector<Rational> a;
  for (unsigned l = 0; l <= L; ++l) a.push_back(g.coeff(MultiIndex{l}));
  return a;
}

std::vector<Rational> chsc_b(std::size_t n, const Rational& c, unsigned M) {
  const auto a = chsc_a_coeffs(n, M);
  std::vector<Rational> b{Rational(1)};
  for (unsigned m = 1; m <= M; ++m) {
    Rational sum = 0, cpow = 1;
    for (unsigned l = 1; l <= m; ++l) {
      cpow *= -c;
      const Integer rising_int = factorial(static_cast<unsigned>(l + n - 1)) / factorial(static_cast<unsigned>(n - 1));
      const Rational rising(rising_int);
      sum += cpow * rising * a[l] * b[m - l];
    }
    b.push_back(-sum);
  }
  return b;
}

ChscModel make_chsc_model(std::size_t n, const Rational& c, unsigned M) {
  return ChscModel{n, c, chsc_a_coeffs(n, M), chsc_b(n, c, M)};
}

std::vector<Rational> gamma_quotient_polynomial(std::size_t n, const Rational& c) {
  // Multiply out prod_j (k + c j), coefficients in descending powers.
  std::vector<Rational> poly{Rational(1)};
  for (std::size_t j = 1; j <= n; ++j) {
    const Rational root = c * Rational(static_cast<long>(j));
    std::vector<Rational> next(poly.size() + 1, Rational(0));
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i] += poly[i];
      next[i + 1] += poly[i] * root;
    }
    poly = std::move(next);
  }
  return poly;
}

bool chsc_polynomial_check(const ChscModel& model) {
  if (model.b.size() < model.n + 1) throw std::invalid_argument("chsc_polynomial_check: b must reach order n");
  const auto rhs = gamma_quotient_polynomial(model.n, model.c);
  for (std::size_t j = 0; j <= model.n; ++j) {
    if (model.b[j] != rhs[j]) return false;
  }
  for (std::size_t m = model.n + 1; m < model.b.size(); ++m) {
    if (sgn(model.b[m]) != 0) return false;
  }
  return true;
}

namespace {

std::complex<double> hermitian_dot(std::span<const std::complex<double>> x, std::span<const std::complex<double>> y) {
  if (x.size() != y.size()) throw std::invalid_argument("kernel: points have different dimensions");
  std::complex<double> s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * std::conj(y[i]);
  return s;
}

}  // namespace

std::complex<double> exact_cpn_kernel(std::size_t n, unsigned k, std::span<const std::complex<double>> x,
                                      std::span<const std::complex<double>> y) {
  if (x.size() != n) throw std::invalid_argument("exact_cpn_kernel: dimension mismatch");
  // (k+n)!/k! via lgamma keeps large k finite; the power is taken in the log domain.
  const double log_prefactor = std::lgamma(k + n + 1.0) - std::lgamma(k + 1.0) - n * std::log(std::numbers::pi);
  const std::complex<double> base = 1.0 + hermitian_dot(x, y);
  return std::exp(log_prefactor + static_cast<double>(k) * std::log(base));
}

std::complex<double> exact_flat_kernel(std::size_t n, unsigned k, std::span<const std::complex<double>> x,
                                       std::span<const std::complex<double>> y) {
  if (x.size() != n) throw std::invalid_argument("exact_flat_kernel: dimension mismatch");
  const double kd = k;
  return std::exp(n * std::log(kd / std::numbers::pi) + kd * hermitian_dot(x, y));
}

}  // namespace bergman
