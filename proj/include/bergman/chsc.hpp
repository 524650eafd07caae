#pragma once

#include <complex>
#include <span>
#include <vector>

#include "bergman/rational.hpp"

namespace bergman {

/// Closed-form data for constant holomorphic sectional curvature c (curvature convention in
/// which CP^n with the Fubini-Study potential log(1 + |x|^2) has c = 1).
struct ChscModel {
  std::size_t n = 1;
  Rational c;
  std::vector<Rational> a;  // Taylor coefficients of e^u ((e^u - 1)/u)^{n-1}
  std::vector<Rational> b;  // b_0..b_M
};

/// Taylor coefficients a_0..a_L of e^u ((e^u - 1)/u)^{n-1}.
std::vector<Rational> chsc_a_coeffs(std::size_t n, unsigned L);

/// b_m = -sum_{l=1}^m (-c)^l (l+n-1)!/(n-1)! a_l b_{m-l}, b_0 = 1.
std::vector<Rational> chsc_b(std::size_t n, const Rational& c, unsigned M);

ChscModel make_chsc_model(std::size_t n, const Rational& c, unsigned M);

/// Coefficients of c^n prod_{j=1}^n (k/c + j) = prod_j (k + c j) in descending powers of k
/// (index j holds the coefficient of k^{n-j}). For c = 0 this is k^n.
std::vector<Rational> gamma_quotient_polynomial(std::size_t n, const Rational& c);

/// Compares sum_j b_j k^{n-j} with the product above; requires b through order n and checks
/// that any stored b_m with m > n vanishes.
bool chsc_polynomial_check(const ChscModel& model);

/// ((k+n)! / (k! pi^n)) (1 + x . conj y)^k, the Bergman kernel of O(k) over CP^n in the
/// affine chart.
std::complex<double> exact_cpn_kernel(std::size_t n, unsigned k, std::span<const std::complex<double>> x,
                                      std::span<const std::complex<double>> y);

/// (k/pi)^n exp(k x . conj y).
std::complex<double> exact_flat_kernel(std::size_t n, unsigned k, std::span<const std::complex<double>> x,
                                       std::span<const std::complex<double>> y);

}  // namespace bergman
