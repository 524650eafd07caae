#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bergman/multi_index.hpp"
#include "bergman/rational.hpp"

namespace bergman {

/// Raised when a potential violates one of its invariants; `field` names the offending
/// entry so the CLI can point at it.
class SpecError : public std::runtime_error {
 public:
  SpecError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct PotentialTerm {
  MultiIndex alpha;  // exponent of x
  MultiIndex beta;   // exponent of conj(x)
  Rational coeff;
};

/// Real-analytic Kahler potential phi(x) = sum c_{alpha beta} x^alpha conj(x)^beta near 0,
/// truncated at total degree |alpha| + |beta| <= trunc_degree. Coefficients are real
/// rationals, so Hermitian symmetry reads c_{alpha beta} = c_{beta alpha}.
struct PotentialSpec {
  std::string name = "custom";
  std::size_t n = 1;
  unsigned trunc_degree = 8;
  double eval_radius = 0.3;
  std::vector<PotentialTerm> terms;

  Rational coeff(const MultiIndex& alpha, const MultiIndex& beta) const;
  /// Hessian entries c_{e_i e_j}, row-major n x n.
  std::vector<Rational> hessian() const;
  /// phi(x) evaluated from the truncated coefficients.
  double phi(std::span<const std::complex<double>> x) const;
};

/// Checks normalization, Hermitian symmetry, positivity of the Hessian, degree bounds and
/// the absence of linear terms. Throws SpecError naming the violated invariant.
void validate(const PotentialSpec& spec);

/// Smallest eigenvalue of the (real symmetric) Hessian.
double hessian_min_eigenvalue(const PotentialSpec& spec);

PotentialSpec flat_potential(std::size_t n, unsigned trunc_degree);
/// (1/c) log(1 + c |x|^2); c = 0 gives the flat potential.
PotentialSpec chsc_potential(std::size_t n, const Rational& c, unsigned trunc_degree);
/// |x|^2 + t |x|^4.
PotentialSpec quartic_potential(std::size_t n, const Rational& t, unsigned trunc_degree);

/// Parses "flat(n)", "chsc(n,c)" or "quartic(n,t)" (c and t may be p/q or decimals).
PotentialSpec preset_potential(const std::string& preset, unsigned trunc_degree);

/// File form: { n, trunc_degree, eval_radius, terms: [ { alpha, beta, num, den } ] }.
nlohmann::json potential_to_json(const PotentialSpec& spec);
PotentialSpec potential_from_json(const nlohmann::json& j);

/// Stable 64-bit FNV-1a digest of the canonical JSON form, as 16 hex digits.
std::string potential_hash(const PotentialSpec& spec);

}  // namespace bergman
