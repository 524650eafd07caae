#pragma once

#include <complex>
#include <span>
#include <vector>

#include "bergman/potential.hpp"
#include "bergman/truncated_series.hpp"

namespace bergman {

/// Variable layout helpers. Two-block series use [x_0..x_{n-1}, w_0..w_{n-1}] and three-block
/// series use [x, y, w]; w stands for z or theta depending on context.
struct Blocks {
  std::size_t n;

  std::size_t x(std::size_t i) const { return i; }
  std::size_t y(std::size_t i) const { return n + i; }
  std::size_t w3(std::size_t i) const { return 2 * n + i; }
  std::size_t w2(std::size_t i) const { return n + i; }
  std::size_t nvars2() const { return 2 * n; }
  std::size_t nvars3() const { return 3 * n; }

  /// (x, w) -> (x, y, w) with the x-block kept.
  RationalSeries embed_xw(const RationalSeries& f) const;
  /// (x, w) -> (x, y, w) with the x-block renamed to y.
  RationalSeries embed_yw(const RationalSeries& f) const;
  /// (x, y, w) -> (x, w) by setting y = x.
  RationalSeries merge_y_into_x(const RationalSeries& f) const;
  /// (x, y, w) -> (x, w) by setting y = 0.
  RationalSeries drop_y(const RationalSeries& f) const;
  /// True when some stored term carries a positive y-exponent.
  bool depends_on_y(const RationalSeries& f) const;
};

/// Everything derived from the potential in exact arithmetic:
///   psi(x,z)           polarization, degree D
///   psi_x(x,z)         gradient in x, degree D-1 (equals theta(x,x,z))
///   theta(x,y,z)       averaged gradient along the segment from y to x, degree D-1
///   z_of_theta(x,y,th) inverse of theta in its last block, degree D-1
///   delta0_xyz         det psi_yz(y,z) / det theta_z(x,y,z), degree D-2
///   delta0_xytheta     the same composed with z_of_theta, degree D-2
struct GeometryPack {
  std::size_t n = 0;
  unsigned trunc_degree = 0;
  RationalSeries psi;
  std::vector<RationalSeries> psi_x;
  std::vector<RationalSeries> theta;
  std::vector<RationalSeries> z_of_theta;
  RationalSeries delta0_xyz;
  RationalSeries delta0_xytheta;

  Blocks blocks() const { return Blocks{n}; }
};

RationalSeries polarize(const PotentialSpec& spec);
std::vector<RationalSeries> build_theta(const RationalSeries& psi, std::size_t n);
/// Solves theta(x,y,z(x,y,theta)) = theta one degree at a time. Throws SeriesError if the
/// z-Jacobian of theta at the origin is singular.
std::vector<RationalSeries> invert_theta(const std::vector<RationalSeries>& theta, std::size_t n);
struct Delta0Pair {
  RationalSeries xyz;
  RationalSeries xytheta;
};
Delta0Pair build_delta0(const RationalSeries& psi, const std::vector<RationalSeries>& theta,
                        const std::vector<RationalSeries>& z_of_theta, std::size_t n);

/// Validates the spec and assembles the full package.
GeometryPack build_geometry(const PotentialSpec& spec);

/// Compositions shared by the coefficient and transport pipelines:
///   into_theta: (x,y,z) -> (x,y,theta) via z = z_of_theta
///   back_to_z:  (x,theta) -> (x,z) via theta = psi_x(x,z)
///   into_z:     (x,y,theta) -> (x,y,z) via theta = theta(x,y,z)
/// The substitutions cache powers, so one instance should serve a whole run.
class GeometryCompositions {
 public:
  explicit GeometryCompositions(const GeometryPack& geom);

  RationalSeries into_theta(const RationalSeries& f_xyz) { return into_theta_.apply(f_xyz); }
  RationalSeries back_to_z(const RationalSeries& f_xtheta) { return back_to_z_.apply(f_xtheta); }
  RationalSeries into_z(const RationalSeries& f_xytheta) { return into_z_.apply(f_xytheta); }
  /// b(x,z) -> b(x, z(x,y,theta)).
  RationalSeries lift(const RationalSeries& b_xz) { return into_theta_.apply(Blocks{n_}.embed_xw(b_xz)); }

 private:
  std::size_t n_;
  Substitution<Rational> into_theta_;
  Substitution<Rational> back_to_z_;
  Substitution<Rational> into_z_;
};

using Point = std::vector<std::complex<double>>;

/// phi(x) + phi(y) - 2 Re psi(x, conj y), evaluated from the truncated polarization.
double diastasis(const FloatSeries& psi, std::span<const std::complex<double>> x,
                 std::span<const std::complex<double>> y);

/// psi(x, conj y) for a two-block polarization.
std::complex<double> eval_polarized(const FloatSeries& f, std::span<const std::complex<double>> x,
                                    std::span<const std::complex<double>> y);

struct ContourReport {
  double delta = 0;
  std::size_t samples = 0;
  double radius = 0;
  double tolerance = 0;
  double max_value = 0;  // max of 2Re[psi(x,conj y) - psi(y,conj y)] + phi(y) - phi(x) + delta |x-y|^2
  Point worst_x, worst_y;
  bool pass = false;
};

/// Sweeps `samples` pairs drawn from a Sobol sequence in the polydisc of radius
/// spec.eval_radius. Passes iff the maximum is at most `tolerance` (floating-point slack
/// for identities that hold with equality).
ContourReport check_good_contour(const PotentialSpec& spec, const FloatSeries& psi, std::size_t samples,
                                 double delta, double tolerance = 1e-12);

/// Deterministic quasi-random points in the polydisc |x_i| <= radius, dims complex coordinates
/// per point.
std::vector<Point> polydisc_samples(std::size_t dims, std::size_t count, double radius);

}  // namespace bergman
