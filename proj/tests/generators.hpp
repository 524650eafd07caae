#pragma once

// Hand-rolled generators for property tests. Every generator is driven by an explicit
// std::mt19937_64 so failures can be replayed from the seed printed by the test.

#include <random>

#include "bergman/potential.hpp"
#include "bergman/truncated_series.hpp"

namespace gen {

using bergman::MultiIndex;
using bergman::Rational;
using bergman::RationalSeries;

inline Rational small_rational(std::mt19937_64& rng, long max_num = 5, long max_den = 4) {
  std::uniform_int_distribution<long> num(-max_num, max_num), den(1, max_den);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

inline MultiIndex index_up_to(std::mt19937_64& rng, std::size_t nvars, unsigned max_degree) {
  std::uniform_int_distribution<unsigned> deg(0, max_degree), var(0, static_cast<unsigned>(nvars - 1));
  MultiIndex a(nvars);
  const unsigned d = deg(rng);
  for (unsigned k = 0; k < d; ++k) ++a[var(rng)];
  return a;
}

/// Sparse random series; `zero_constant` forces a vanishing constant term.
inline RationalSeries sparse_series(std::mt19937_64& rng, std::size_t nvars, unsigned degree, std::size_t nterms,
                                    bool zero_constant = false) {
  std::vector<std::pair<MultiIndex, Rational>> entries;
  for (std::size_t k = 0; k < nterms; ++k) {
    auto a = index_up_to(rng, nvars, degree);
    if (zero_constant && a.total() == 0) continue;
    entries.emplace_back(a, small_rational(rng));
  }
  return RationalSeries::from_terms(nvars, degree, entries);
}

/// Random series with the given constant term, useful for invertible elements.
inline RationalSeries unit_series(std::mt19937_64& rng, std::size_t nvars, unsigned degree, std::size_t nterms,
                                  const Rational& c0) {
  auto s = sparse_series(rng, nvars, degree, nterms, true);
  return s + RationalSeries::constant(nvars, degree, c0);
}

/// Flat potential plus random Hermitian-symmetric terms x^alpha conj(x)^beta with
/// |alpha|, |beta| >= 1 and |alpha| + |beta| >= 3, so the Hessian at 0 stays the identity.
inline bergman::PotentialSpec hermitian_potential(std::mt19937_64& rng, std::size_t n, unsigned degree,
                                                  std::size_t nterms) {
  auto spec = bergman::flat_potential(n, degree);
  spec.name = "random";
  std::uniform_int_distribution<unsigned> deg(3, degree);
  std::uniform_int_distribution<std::size_t> var(0, n - 1);
  for (std::size_t t = 0; t < nterms; ++t) {
    const unsigned d = deg(rng);
    std::uniform_int_distribution<unsigned> split(1, d - 1);
    const unsigned da = split(rng);
    MultiIndex a(n), b(n);
    for (unsigned k = 0; k < da; ++k) ++a[var(rng)];
    for (unsigned k = da; k < d; ++k) ++b[var(rng)];
    const Rational c = small_rational(rng, 3, 10) / 4;
    if (sgn(c) == 0 || spec.coeff(a, b) != 0) continue;
    spec.terms.push_back({a, b, c});
    if (!(a == b)) spec.terms.push_back({b, a, c});
  }
  return spec;
}

}  // namespace gen
