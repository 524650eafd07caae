#include "bergman/geometry.hpp"

#include <boost/random/sobol.hpp>

#include <cmath>
#include <limits>
#include <numbers>

#include "bergman/series_matrix.hpp"

namespace bergman {

// ---------------------------------------------------------------------------
// Block helpers

RationalSeries Blocks::embed_xw(const RationalSeries& f) const {
  std::vector<std::size_t> target(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    target[i] = x(i);
    target[n + i] = w3(i);
  }
  return remap(f, target, nvars3());
}

RationalSeries Blocks::embed_yw(const RationalSeries& f) const {
  std::vector<std::size_t> target(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    target[i] = y(i);
    target[n + i] = w3(i);
  }
  return remap(f, target, nvars3());
}

RationalSeries Blocks::merge_y_into_x(const RationalSeries& f) const {
  std::vector<std::size_t> target(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    target[x(i)] = i;
    target[y(i)] = i;
    target[w3(i)] = w2(i);
  }
  return remap(f, target, nvars2());
}

RationalSeries Blocks::drop_y(const RationalSeries& f) const {
  std::vector<std::pair<MultiIndex, Rational>> entries;
  for (const auto& t : f.terms()) {
    bool has_y = false;
    for (std::size_t i = 0; i < n && !has_y; ++i) has_y = detail::exponent_of(t.key, y(i)) != 0;
    if (has_y) continue;
    MultiIndex out(nvars2());
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = detail::exponent_of(t.key, x(i));
      out[w2(i)] = detail::exponent_of(t.key, w3(i));
    }
    entries.emplace_back(out, t.coeff);
  }
  return RationalSeries::from_terms(nvars2(), f.trunc_degree(), entries);
}

bool Blocks::depends_on_y(const RationalSeries& f) const {
  for (const auto& t : f.terms()) {
    for (std::size_t i = 0; i < n; ++i) {
      if (detail::exponent_of(t.key, y(i))) return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Construction

RationalSeries polarize(const PotentialSpec& spec) {
  std::vector<std::pair<MultiIndex, Rational>> entries;
  entries.reserve(spec.terms.size());
  for (const auto& t : spec.terms) {
    MultiIndex idx(2 * spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
      idx[i] = t.alpha[i];
      idx[spec.n + i] = t.beta[i];
    }
    entries.emplace_back(idx, t.coeff);
  }
  return RationalSeries::from_terms(2 * spec.n, spec.trunc_degree, entries);
}

std::vector<RationalSeries> build_theta(const RationalSeries& psi, std::size_t n) {
  if (psi.nvars() != 2 * n) throw SeriesError("build_theta: psi must have 2n variables");
  const Blocks b{n};
  std::vector<std::size_t> src(n), x_dst(n), y_dst(n);
  std::vector<long> keep(2 * n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    src[i] = i;
    x_dst[i] = b.x(i);
    y_dst[i] = b.y(i);
    keep[n + i] = static_cast<long>(b.w3(i));
  }
  std::vector<RationalSeries> theta;
  theta.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    theta.push_back(integrate_segment(diff_var(psi, i), src, x_dst, y_dst, keep, b.nvars3()));
  }
  return theta;
}

namespace {

/// Inverse of a dense rational matrix by Gauss-Jordan elimination with nonzero pivoting.
std::vector<Rational> invert_matrix(std::vector<Rational> a, std::size_t n) {
  std::vector<Rational> inv(n * n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && sgn(a[pivot * n + col]) == 0) ++pivot;
    if (pivot == n) throw SeriesError("invert_theta: the z-Jacobian of theta at the origin is singular");
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a[pivot * n + j], a[col * n + j]);
        std::swap(inv[pivot * n + j], inv[col * n + j]);
      }
    }
    const Rational p = a[col * n + col];
    for (std::size_t j = 0; j < n; ++j) {
      a[col * n + j] /= p;
      inv[col * n + j] /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || sgn(a[r * n + col]) == 0) continue;
      const Rational f = a[r * n + col];
      for (std::size_t j = 0; j < n; ++j) {
        a[r * n + j] -= f * a[col * n + j];
        inv[r * n + j] -= f * inv[col * n + j];
      }
    }
  }
  return inv;
}

RationalSeries linear_combination(const std::vector<Rational>& row, const std::vector<RationalSeries>& v) {
  SeriesAccumulator<Rational> acc(v.front().nvars(), v.front().trunc_degree());
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (sgn(row[j]) == 0) continue;
    for (const auto& t : v[j].terms()) acc.add(t.key, t.degree, row[j] * t.coeff);
  }
  return acc.finish();
}

}  // namespace

std::vector<RationalSeries> invert_theta(const std::vector<RationalSeries>& theta, std::size_t n) {
  if (theta.size() != n) throw SeriesError("invert_theta: expected n components");
  const Blocks b{n};
  const unsigned d = theta.front().trunc_degree();
  const std::size_t nv = b.nvars3();

  // theta = L w + N(x, y, w), where N has no pure-w linear part.
  std::vector<Rational> lin(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) lin[i * n + j] = theta[i].coeff(MultiIndex::unit(nv, b.w3(j)));
  }
  const auto lin_inv = invert_matrix(lin, n);
  std::vector<RationalSeries> nonlinear;
  for (std::size_t i = 0; i < n; ++i) {
    RationalSeries lw(nv, d);
    for (std::size_t j = 0; j < n; ++j) lw = lw + RationalSeries::variable(nv, d, b.w3(j), lin[i * n + j]);
    nonlinear.push_back(theta[i] - lw);
  }

  // Fixed point Z <- L^{-1}(W - N(x, y, Z)). If Z is exact through degree k-1, N(x,y,Z) is
  // exact through degree k because dN/dz has no constant term, so each pass gains a degree.
  std::vector<RationalSeries> z(n, RationalSeries(nv, 0));
  for (unsigned k = 1; k <= d; ++k) {
    std::vector<RationalSeries> args;
    args.reserve(nv);
    for (std::size_t i = 0; i < n; ++i) args.push_back(RationalSeries::variable(nv, k, b.x(i)));
    for (std::size_t i = 0; i < n; ++i) args.push_back(RationalSeries::variable(nv, k, b.y(i)));
    for (std::size_t i = 0; i < n; ++i) args.push_back(z[i].with_trunc_degree_unchecked(k));
    Substitution<Rational> sub(std::move(args), static_cast<int>(k));
    std::vector<RationalSeries> rhs;
    rhs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      rhs.push_back(RationalSeries::variable(nv, k, b.w3(i)) - sub.apply(nonlinear[i].truncated(k)));
    }
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = linear_combination(std::vector<Rational>(lin_inv.begin() + i * n, lin_inv.begin() + (i + 1) * n), rhs);
    }
  }
  return z;
}

Delta0Pair build_delta0(const RationalSeries& psi, const std::vector<RationalSeries>& theta,
                        const std::vector<RationalSeries>& z_of_theta, std::size_t n) {
  const Blocks b{n};
  std::vector<RationalSeries> psi_yz, theta_z;
  for (std::size_t i = 0; i < n; ++i) {
    const auto dpsi = diff_var(psi, i);
    for (std::size_t j = 0; j < n; ++j) {
      psi_yz.push_back(b.embed_yw(diff_var(dpsi, b.w2(j))));
      theta_z.push_back(diff_var(theta[i], b.w3(j)));
    }
  }
  const auto num = det(SeriesMatrix<Rational>(n, n, std::move(psi_yz)));
  const auto den = det(SeriesMatrix<Rational>(n, n, std::move(theta_z)));
  Delta0Pair out;
  out.xyz = num * invert(den);

  std::vector<RationalSeries> args;
  const unsigned d = z_of_theta.front().trunc_degree();
  for (std::size_t i = 0; i < n; ++i) args.push_back(RationalSeries::variable(b.nvars3(), d, b.x(i)));
  for (std::size_t i = 0; i < n; ++i) args.push_back(RationalSeries::variable(b.nvars3(), d, b.y(i)));
  for (const auto& zi : z_of_theta) args.push_back(zi);
  out.xytheta = compose(out.xyz, args);
  return out;
}

GeometryPack build_geometry(const PotentialSpec& spec) {
  validate(spec);
  GeometryPack g;
  g.n = spec.n;
  g.trunc_degree = spec.trunc_degree;
  g.psi = polarize(spec);
  for (std::size_t i = 0; i < spec.n; ++i) g.psi_x.push_back(diff_var(g.psi, i));
  g.theta = build_theta(g.psi, spec.n);
  g.z_of_theta = invert_theta(g.theta, spec.n);
  auto d0 = build_delta0(g.psi, g.theta, g.z_of_theta, spec.n);
  g.delta0_xyz = std::move(d0.xyz);
  g.delta0_xytheta = std::move(d0.xytheta);
  return g;
}

// ---------------------------------------------------------------------------
// Shared compositions

namespace {

std::vector<RationalSeries> block_args(const Blocks& b, unsigned d, bool with_y, const std::vector<RationalSeries>& last) {
  const std::size_t nv = with_y ? b.nvars3() : b.nvars2();
  std::vector<RationalSeries> args;
  for (std::size_t i = 0; i < b.n; ++i) args.push_back(RationalSeries::variable(nv, d, b.x(i)));
  if (with_y) {
    for (std::size_t i = 0; i < b.n; ++i) args.push_back(RationalSeries::variable(nv, d, b.y(i)));
  }
  for (const auto& s : last) args.push_back(s);
  return args;
}

}  // namespace

GeometryCompositions::GeometryCompositions(const GeometryPack& geom)
    : n_(geom.n),
      into_theta_(block_args(geom.blocks(), geom.trunc_degree - 1, true, geom.z_of_theta)),
      back_to_z_(block_args(geom.blocks(), geom.trunc_degree - 1, false, geom.psi_x)),
      into_z_(block_args(geom.blocks(), geom.trunc_degree - 1, true, geom.theta)) {}

// ---------------------------------------------------------------------------
// Numerics

std::complex<double> eval_polarized(const FloatSeries& f, std::span<const std::complex<double>> x,
                                    std::span<const std::complex<double>> y) {
  if (x.size() != y.size() || f.nvars() != 2 * x.size()) throw SeriesError("eval_polarized: dimension mismatch");
  std::vector<std::complex<double>> pt(x.begin(), x.end());
  for (const auto& yi : y) pt.push_back(std::conj(yi));
  return eval(f, std::span<const std::complex<double>>(pt));
}

double diastasis(const FloatSeries& psi, std::span<const std::complex<double>> x,
                 std::span<const std::complex<double>> y) {
  const double phi_x = eval_polarized(psi, x, x).real();
  const double phi_y = eval_polarized(psi, y, y).real();
  return phi_x + phi_y - 2.0 * eval_polarized(psi, x, y).real();
}

std::vector<Point> polydisc_samples(std::size_t dims, std::size_t count, double radius) {
  boost::random::sobol engine(2 * dims);
  engine.discard(2 * dims);  // the first Sobol point is the origin
  const double scale = std::ldexp(1.0, -64);
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    Point p(dims);
    for (std::size_t i = 0; i < dims; ++i) {
      const double u = static_cast<double>(engine()) * scale;
      const double v = static_cast<double>(engine()) * scale;
      p[i] = std::polar(radius * std::sqrt(u), 2.0 * std::numbers::pi * v);
    }
    out.push_back(std::move(p));
  }
  return out;
}

ContourReport check_good_contour(const PotentialSpec& spec, const FloatSeries& psi, std::size_t samples,
                                 double delta, double tolerance) {
  if (samples == 0) throw std::invalid_argument("check_good_contour: samples must be positive");
  const std::size_t n = spec.n;
  ContourReport rep;
  rep.delta = delta;
  rep.samples = samples;
  rep.radius = spec.eval_radius;
  rep.tolerance = tolerance;
  rep.max_value = -std::numeric_limits<double>::infinity();
  for (const auto& pt : polydisc_samples(2 * n, samples, spec.eval_radius)) {
    std::span<const std::complex<double>> x(pt.data(), n), y(pt.data() + n, n);
    const double phi_x = eval_polarized(psi, x, x).real();
    const double phi_y = eval_polarized(psi, y, y).real();
    double dist2 = 0;
    for (std::size_t i = 0; i < n; ++i) dist2 += std::norm(x[i] - y[i]);
    const double value =
        2.0 * (eval_polarized(psi, x, y) - eval_polarized(psi, y, y)).real() + phi_y - phi_x + delta * dist2;
    if (value > rep.max_value) {
      rep.max_value = value;
      rep.worst_x.assign(x.begin(), x.end());
      rep.worst_y.assign(y.begin(), y.end());
    }
  }
  rep.pass = rep.max_value <= tolerance;
  return rep;
}

}  // namespace bergman
