#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "bergman/geometry.hpp"

namespace bergman {

/// Raised when the geometry is not truncated deep enough for the requested order.
class DegreeBudgetError : public std::runtime_error {
 public:
  DegreeBudgetError(unsigned required, const std::string& what)
      : std::runtime_error(what + " requires trunc_degree >= " + std::to_string(required)), required_(required) {}
  unsigned required() const { return required_; }

 private:
  unsigned required_;
};

/// Degree through which b_m is exact when the potential is truncated at D: the amplitude
/// Delta0 already loses two orders, and each recursion level applies D_y . D_theta once more.
/// Negative values mean b_m is out of reach.
int coefficient_exact_degree(unsigned D, unsigned m);
/// Smallest D for which b_0..b_M are all defined (exact at least in their constant term).
unsigned required_trunc_degree(unsigned M);

struct CoefficientTable {
  std::size_t n = 0;
  unsigned trunc_degree = 0;   // D of the geometry
  unsigned max_order = 0;      // M
  std::vector<RationalSeries> b;  // (x,z), index 0..M; b[m] truncated at its exact degree
  std::vector<RationalSeries> a;  // (x,y,theta); empty until amplitude_from_b runs
  std::vector<unsigned> exact_degree;
};

/// The contraction (D_y . D_theta)^l / l! followed by y = x, applied to a three-block series:
///   x^a y^b th^c -> sum_{|d|=l, d<=b, d<=c} [b!/(b-d)!][c!/(c-d)!]/d! x^{a+b-d} th^{c-d}.
/// The result lives in (x,theta) and is truncated at D - 2l.
RationalSeries contract_diagonal(const RationalSeries& f, std::size_t n, unsigned l);

CoefficientTable bbs_recursion(const GeometryPack& geom, unsigned M, GeometryCompositions& comps);
CoefficientTable bbs_recursion(const GeometryPack& geom, unsigned M);

/// Fills a[0] = Delta0 - 1 and a[m] = b_m(x, z(x,y,theta)) Delta0 for m >= 1.
void amplitude_from_b(CoefficientTable& table, const GeometryPack& geom, GeometryCompositions& comps);
void amplitude_from_b(CoefficientTable& table, const GeometryPack& geom);

struct NormEntry {
  unsigned m;
  MultiIndex xi;
  double norm;        // grid max of |D_z^xi b_m|
  double normalized;  // norm / ((2m+1)! xi!)
};

struct NormTable {
  double radius = 0;
  unsigned grid = 0;
  std::vector<NormEntry> entries;

  /// Entry for (m, xi), or nullptr.
  const NormEntry* find(unsigned m, const MultiIndex& xi) const;
  /// Grid norms of b_m (xi = 0) in order m = 0..M.
  std::vector<double> order_norms() const;
  std::string to_csv() const;
};

/// Samples the distinguished boundary |x_i| = |z_i| = radius with `grid` equally spaced angles
/// per coordinate. Holomorphic functions attain their polydisc maximum there.
NormTable derivative_norm_table(const CoefficientTable& table, double radius, unsigned grid, unsigned max_xi);

/// Series records plus a manifest { M, per-order exact degrees, spec hash }.
nlohmann::json coefficients_to_json(const CoefficientTable& table, const std::string& spec_hash);
CoefficientTable coefficients_from_json(const nlohmann::json& j);

}  // namespace bergman
