#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "bergman/series_io.hpp"
#include "bergman/series_matrix.hpp"
#include "bergman/truncated_series.hpp"
#include "generators.hpp"

using namespace bergman;

namespace {

RationalSeries var(std::size_t nvars, unsigned d, std::size_t i) { return RationalSeries::variable(nvars, d, i); }
RationalSeries cst(std::size_t nvars, unsigned d, long v) { return RationalSeries::constant(nvars, d, Rational(v)); }

RationalSeries univariate(unsigned d, const std::vector<Rational>& c) {
  std::vector<std::pair<MultiIndex, Rational>> e;
  for (unsigned k = 0; k < c.size(); ++k) e.emplace_back(MultiIndex{k}, c[k]);
  return RationalSeries::from_terms(1, d, e);
}

std::vector<Rational> exp_coeffs(unsigned d, long sign = 1) {
  std::vector<Rational> c;
  for (unsigned k = 0; k <= d; ++k) c.emplace_back(Rational((k % 2 && sign < 0) ? -1 : 1, 1) / Rational(factorial(k)));
  return c;
}

}  // namespace

TEST_SUITE("series_core") {
  TEST_CASE("add: cancellation, identity and truncation") {
    const auto x = var(1, 3, 0);
    CHECK((cst(1, 3, 1) + x) + (cst(1, 3, 1) - x) == cst(1, 3, 2));
    const auto f = cst(1, 3, 4) + x * x;
    CHECK(f + RationalSeries(1, 3) == f);
    const auto x2 = var(1, 1, 0) * var(1, 1, 0);
    CHECK((x2 + x2).is_zero());
    CHECK_THROWS_AS(add(var(1, 2, 0), var(1, 3, 0)), SeriesError);
    CHECK_THROWS_AS(add(var(2, 2, 0), var(1, 2, 0)), SeriesError);
  }

  TEST_CASE("mul: small products and truncation") {
    const auto x = var(1, 2, 0);
    CHECK((cst(1, 2, 1) + x) * (cst(1, 2, 1) - x) == cst(1, 2, 1) - x * x);
    const auto x1 = var(1, 1, 0);
    CHECK((cst(1, 1, 1) + x1) * (cst(1, 1, 1) + x1) == cst(1, 1, 1) + x1.scaled(Rational(2)));
    CHECK_THROWS_AS(mul(var(1, 2, 0), var(2, 2, 0)), SeriesError);
  }

  TEST_CASE("mul: exp(x) exp(-x) against a direct convolution oracle") {
    const unsigned d = 12;
    const auto a = exp_coeffs(d, 1), b = exp_coeffs(d, -1);
    const auto prod = univariate(d, a) * univariate(d, b);
    for (unsigned k = 0; k <= d; ++k) {
      Rational conv = 0;
      for (unsigned j = 0; j <= k; ++j) conv += a[j] * b[k - j];
      CHECK(prod.coeff(MultiIndex{k}) == conv);
    }
    CHECK(prod == cst(1, d, 1));
  }

  TEST_CASE("invert: worked examples") {
    CHECK(invert(cst(1, 3, 1)) == cst(1, 3, 1));
    const auto x = var(1, 3, 0);
    CHECK(invert(cst(1, 3, 1) + x) == univariate(3, {Rational(1), Rational(-1), Rational(1), Rational(-1)}));
    // Oracle: solve (2 + x + x^2)(c0 + c1 x + c2 x^2) = 1 degree by degree.
    const Rational c0 = Rational(1, 2), c1 = -c0 / 2, c2 = -(c1 + c0) / 2;
    CHECK(c2 == Rational(-1, 8));
    const auto a = univariate(2, {Rational(2), Rational(1), Rational(1)});
    CHECK(invert(a) == univariate(2, {c0, c1, c2}));
    CHECK(a * invert(a) == cst(1, 2, 1));
    CHECK_THROWS_AS(invert(var(1, 3, 0)), SeriesError);
  }

  TEST_CASE("compose: worked examples") {
    const auto z2 = var(1, 2, 0) * var(1, 2, 0);
    const auto xy = var(2, 2, 0) + var(2, 2, 1);
    const auto expect = var(2, 2, 0) * var(2, 2, 0) + (var(2, 2, 0) * var(2, 2, 1)).scaled(Rational(2)) +
                        var(2, 2, 1) * var(2, 2, 1);
    CHECK(compose(z2, {xy}) == expect);

    std::mt19937_64 rng(7);
    const auto f = gen::sparse_series(rng, 2, 5, 12);
    CHECK(compose(f, {var(2, 5, 0), var(2, 5, 1)}) == f);

    // log(1 + u) composed with u = e^x - 1 returns x.
    const unsigned d = 4;
    std::vector<Rational> log1p{Rational(0)}, expm1{Rational(0)};
    for (unsigned k = 1; k <= d; ++k) {
      log1p.emplace_back(Rational(k % 2 ? 1 : -1, static_cast<long>(k)));
      expm1.emplace_back(Rational(1) / Rational(factorial(k)));
    }
    CHECK(compose(univariate(d, log1p), {univariate(d, expm1)}) == var(1, d, 0));

    CHECK_THROWS_AS(compose(z2, {cst(1, 2, 1) + var(1, 2, 0)}), SeriesError);
  }

  TEST_CASE("diff: examples and commutation") {
    const auto x = var(2, 4, 0), y = var(2, 4, 1);
    const auto d = diff(x * x * y, MultiIndex{1, 1});
    CHECK(d == RationalSeries::variable(2, 2, 0, Rational(2)));
    CHECK(diff(cst(2, 4, 3), MultiIndex{0, 1}).is_zero());
    CHECK(diff(cst(2, 1, 3), MultiIndex{2, 0}).trunc_degree() == 0);

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
      const auto f = gen::sparse_series(rng, 3, 7, 25);
      const auto a = gen::index_up_to(rng, 3, 3), b = gen::index_up_to(rng, 3, 3);
      CHECK(diff(diff(f, a), b) == diff(f, a + b));
      CHECK(diff(diff(f, a), b) == diff(diff(f, b), a));
    }
  }

  TEST_CASE("det: examples") {
    const unsigned d = 2;
    const auto one = cst(2, d, 1), zero = RationalSeries(2, d);
    CHECK(det(SeriesMatrix<Rational>(2, 2, {one, zero, zero, one})) == one);
    const auto x = var(2, d, 0), y = var(2, d, 1);
    const auto m = SeriesMatrix<Rational>(2, 2, {one + x, y, y, one - x});
    CHECK(det(m) == one - x * x - y * y);
    CHECK_THROWS_AS(det(SeriesMatrix<Rational>(1, 2, {one, one})), SeriesError);
  }

  TEST_CASE("det: Leibniz oracle and multiplicativity") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<RationalSeries> e;
      for (int k = 0; k < 9; ++k) e.push_back(gen::sparse_series(rng, 2, 5, 6));
      const SeriesMatrix<Rational> m(3, 3, e);
      std::array<int, 3> perm{0, 1, 2};
      RationalSeries leibniz(2, 5);
      do {
        int inversions = 0;
        for (int i = 0; i < 3; ++i)
          for (int j = i + 1; j < 3; ++j) inversions += perm[i] > perm[j];
        const auto p = e[0 * 3 + perm[0]] * e[1 * 3 + perm[1]] * e[2 * 3 + perm[2]];
        leibniz = inversions % 2 ? leibniz - p : leibniz + p;
      } while (std::next_permutation(perm.begin(), perm.end()));
      CHECK(det(m) == leibniz);
    }
    for (std::size_t dim : {2u, 3u}) {
      std::vector<RationalSeries> a, b;
      for (std::size_t k = 0; k < dim * dim; ++k) {
        a.push_back(gen::sparse_series(rng, 2, 4, 5));
        b.push_back(gen::sparse_series(rng, 2, 4, 5));
      }
      std::vector<RationalSeries> ab;
      for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
          RationalSeries s(2, 4);
          for (std::size_t k = 0; k < dim; ++k) s = s + a[i * dim + k] * b[k * dim + j];
          ab.push_back(s);
        }
      }
      const SeriesMatrix<Rational> ma(dim, dim, a), mb(dim, dim, b), mab(dim, dim, ab);
      CHECK(det(mab) == det(ma) * det(mb));
    }
  }

  TEST_CASE("eval: examples and truncated exponential") {
    const std::vector<std::complex<double>> half{0.5};
    CHECK(eval(cst(1, 2, 1) + var(1, 2, 0), std::span<const std::complex<double>>(half)).real() == doctest::Approx(1.5));
    CHECK(eval(RationalSeries(1, 2), std::span<const std::complex<double>>(half)) == std::complex<double>(0.0));
    const std::vector<std::complex<double>> tenth{0.1};
    const auto e = eval(univariate(20, exp_coeffs(20)), std::span<const std::complex<double>>(tenth));
    CHECK(std::abs(e.real() - std::exp(0.1)) <= 1e-15);
    CHECK(e.imag() == 0.0);
  }

  TEST_CASE("property: ring axioms hold exactly") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
      const auto a = gen::sparse_series(rng, 3, 6, 15), b = gen::sparse_series(rng, 3, 6, 15),
                 c = gen::sparse_series(rng, 3, 6, 15);
      CHECK((a + b) + c == a + (b + c));
      CHECK(a + b == b + a);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * b == b * a);
      CHECK(a * (b + c) == a * b + a * c);
      CHECK((a - a).is_zero());
    }
  }

  TEST_CASE("property: invert is an involution and a true inverse") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 15; ++trial) {
      const auto a = gen::unit_series(rng, 2, 7, 12, gen::small_rational(rng) + Rational(6));
      CHECK(invert(invert(a)) == a);
      CHECK(a * invert(a) == cst(2, 7, 1));
    }
  }

  TEST_CASE("property: composition is associative") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 8; ++trial) {
      const auto f = gen::sparse_series(rng, 2, 6, 10);
      const std::vector<RationalSeries> g{gen::sparse_series(rng, 2, 6, 6, true), gen::sparse_series(rng, 2, 6, 6, true)};
      const std::vector<RationalSeries> h{gen::sparse_series(rng, 2, 6, 6, true), gen::sparse_series(rng, 2, 6, 6, true)};
      std::vector<RationalSeries> gh{compose(g[0], h), compose(g[1], h)};
      CHECK(compose(f, gh) == compose(compose(f, g), h));
    }
  }

  TEST_CASE("property: float backend tracks the rational backend") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 10; ++trial) {
      const auto a = gen::unit_series(rng, 2, 12, 20, Rational(3));
      const auto b = gen::sparse_series(rng, 2, 12, 20);
      const auto ia = invert(a);
      const auto p = ia * b;
      const auto pf = invert(to_float(a)) * to_float(b);
      for (const auto& t : p.terms()) {
        const double ref = to_double(t.coeff);
        if (std::abs(ref) < 1e-6) continue;
        const double got = pf.coeff(detail::unpack(t.key, 2));
        CHECK(std::abs(got - ref) <= 1e-12 * std::abs(ref));
      }
    }
  }

  TEST_CASE("segment integral matches Gauss-Legendre quadrature") {
    // f(u, w) with u in the segment block; integrate t over [0,1] numerically at a point.
    std::mt19937_64 rng(31);
    const auto f = gen::sparse_series(rng, 2, 6, 15);  // variables (u0, w0)
    const auto g = integrate_segment(f, {0}, {0}, {1}, {-1, 2}, 3);  // -> (x, y, w)
    const double xs = 0.3, ys = -0.2, ws = 0.7;
    // 8-point Gauss-Legendre on [0,1] is exact for polynomials of degree <= 15.
    const double nodes[] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                            0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
    const double weights[] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                              0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
    double quad = 0;
    for (int k = 0; k < 8; ++k) {
      const double t = 0.5 * (nodes[k] + 1.0);
      const std::vector<std::complex<double>> pt{t * xs + (1 - t) * ys, ws};
      quad += 0.5 * weights[k] * eval(f, std::span<const std::complex<double>>(pt)).real();
    }
    const std::vector<std::complex<double>> pt3{xs, ys, ws};
    CHECK(eval(g, std::span<const std::complex<double>>(pt3)).real() == doctest::Approx(quad).epsilon(1e-13));
  }

  TEST_CASE("serialization round-trips losslessly") {
    std::mt19937_64 rng(37);
    const auto s = gen::sparse_series(rng, 3, 8, 30);
    CHECK(rational_series_from_json(series_to_json(s)) == s);
    const auto j = nlohmann::json::parse(series_to_json(s).dump());
    CHECK(rational_series_from_json(j) == s);
    const auto f = to_float(s);
    CHECK(float_series_from_json(series_to_json(f)) == f);
  }

  TEST_CASE("remap merges blocks") {
    const auto x = var(2, 3, 0), y = var(2, 3, 1);
    const auto merged = remap(x * y + x, {0, 0}, 1);
    CHECK(merged == var(1, 3, 0) * var(1, 3, 0) + var(1, 3, 0));
  }
}
