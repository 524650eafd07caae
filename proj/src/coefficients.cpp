#include "bergman/coefficients.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "bergman/series_io.hpp"

namespace bergman {

int coefficient_exact_degree(unsigned D, unsigned m) { return static_cast<int>(D) - 2 - 2 * static_cast<int>(m); }

unsigned required_trunc_degree(unsigned M) { return 2 * M + 2; }

RationalSeries contract_diagonal(const RationalSeries& f, std::size_t n, unsigned l) {
  const Blocks blk{n};
  if (f.nvars() != blk.nvars3()) throw SeriesError("contract_diagonal: expected a three-block series");
  if (f.trunc_degree() < 2 * l) throw SeriesError("contract_diagonal: truncation degree below 2l");
  const unsigned d = f.trunc_degree() - 2 * l;
  const auto deltas = indices_of_degree(n, l);

  // Falling factorials e!/(e-k)! and 1/k! are reused across terms.
  std::vector<Integer> fact(f.trunc_degree() + 1);
  fact[0] = 1;
  for (unsigned k = 1; k < fact.size(); ++k) fact[k] = fact[k - 1] * k;

  SeriesAccumulator<Rational> acc(blk.nvars2(), d);
  for (const auto& t : f.terms()) {
    if (t.degree < 2 * l) continue;
    for (const auto& delta : deltas) {
      Integer num = 1, den = 1;
      detail::MonoKey key = 0;
      bool ok = true;
      for (std::size_t i = 0; i < n; ++i) {
        const unsigned a = detail::exponent_of(t.key, blk.x(i));
        const unsigned b = detail::exponent_of(t.key, blk.y(i));
        const unsigned c = detail::exponent_of(t.key, blk.w3(i));
        const unsigned k = delta[i];
        if (k > b || k > c) {
          ok = false;
          break;
        }
        if (k) {
          num *= fact[b] * fact[c];
          den *= fact[b - k] * fact[c - k] * fact[k];
        }
        if (a + b - k) key += detail::unit_key(i, a + b - k);
        if (c - k) key += detail::unit_key(blk.w2(i), c - k);
      }
      if (!ok) continue;
      Rational w(num, den);
      w.canonicalize();
      acc.add(key, t.degree - 2 * l, t.coeff * w);
    }
  }
  return acc.finish();
}

CoefficientTable bbs_recursion(const GeometryPack& geom, unsigned M, GeometryCompositions& comps) {
  const unsigned D = geom.trunc_degree;
  if (D < required_trunc_degree(M)) {
    throw DegreeBudgetError(required_trunc_degree(M), "computing b_m up to order " + std::to_string(M));
  }
  const Blocks blk = geom.blocks();
  CoefficientTable table;
  table.n = geom.n;
  table.trunc_degree = D;
  table.max_order = M;
  table.b.push_back(RationalSeries::constant(blk.nvars2(), D - 2, Rational(1)));
  table.exact_degree.push_back(D - 2);

  // integrand[j] = b_j(x, z(x,y,theta)) Delta0(x,y,theta), exact through degree D-2-2j.
  std::vector<RationalSeries> integrand{geom.delta0_xytheta};
  table.a.push_back(geom.delta0_xytheta - RationalSeries::constant(blk.nvars3(), D - 2, Rational(1)));

  for (unsigned m = 1; m <= M; ++m) {
    const unsigned dm = static_cast<unsigned>(coefficient_exact_degree(D, m));
    SeriesAccumulator<Rational> acc(blk.nvars2(), dm);
    for (unsigned l = 1; l <= m; ++l) acc.add_series(contract_diagonal(integrand[m - l], geom.n, l));
    const RationalSeries g = -acc.finish();
    table.b.push_back(comps.back_to_z(g));
    table.exact_degree.push_back(dm);
    integrand.push_back(comps.lift(table.b.back()) * geom.delta0_xytheta.truncated(dm));
    table.a.push_back(integrand.back());
  }
  return table;
}

CoefficientTable bbs_recursion(const GeometryPack& geom, unsigned M) {
  GeometryCompositions comps(geom);
  return bbs_recursion(geom, M, comps);
}

void amplitude_from_b(CoefficientTable& table, const GeometryPack& geom, GeometryCompositions& comps) {
  const Blocks blk = geom.blocks();
  table.a.clear();
  table.a.push_back(geom.delta0_xytheta - RationalSeries::constant(blk.nvars3(), geom.delta0_xytheta.trunc_degree(),
                                                                   Rational(1)));
  for (unsigned m = 1; m < table.b.size(); ++m) {
    const auto lifted = comps.lift(table.b[m]);
    table.a.push_back(lifted * geom.delta0_xytheta.truncated(lifted.trunc_degree()));
  }
}

void amplitude_from_b(CoefficientTable& table, const GeometryPack& geom) {
  GeometryCompositions comps(geom);
  amplitude_from_b(table, geom, comps);
}

// ---------------------------------------------------------------------------
// Norm tables

const NormEntry* NormTable::find(unsigned m, const MultiIndex& xi) const {
  for (const auto& e : entries) {
    if (e.m == m && e.xi == xi) return &e;
  }
  return nullptr;
}

std::vector<double> NormTable::order_norms() const {
  std::vector<double> out;
  for (const auto& e : entries) {
    if (e.xi.total() != 0) continue;
    if (out.size() <= e.m) out.resize(e.m + 1, 0.0);
    out[e.m] = e.norm;
  }
  return out;
}

std::string NormTable::to_csv() const {
  std::string out = "m,xi,norm,normalized,radius,grid\n";
  char buf[256];
  for (const auto& e : entries) {
    std::string xi;
    for (std::size_t i = 0; i < e.xi.size(); ++i) xi += (i ? ";" : "") + std::to_string(e.xi[i]);
    std::snprintf(buf, sizeof buf, "%u,%s,%.17g,%.17g,%.17g,%u\n", e.m, xi.c_str(), e.norm, e.normalized, radius, grid);
    out += buf;
  }
  return out;
}

NormTable derivative_norm_table(const CoefficientTable& table, double radius, unsigned grid, unsigned max_xi) {
  if (grid < 2) throw std::invalid_argument("derivative_norm_table: grid must be at least 2");
  if (!(radius > 0)) throw std::invalid_argument("derivative_norm_table: radius must be positive");
  const std::size_t n = table.n;
  const std::size_t dims = 2 * n;

  // Torus points (r e^{i a_1}, ..., r e^{i a_2n}).
  std::vector<std::complex<double>> ring(grid);
  for (unsigned k = 0; k < grid; ++k) ring[k] = std::polar(radius, 2.0 * std::numbers::pi * k / grid);
  std::size_t count = 1;
  for (std::size_t i = 0; i < dims; ++i) count *= grid;
  std::vector<std::vector<std::complex<double>>> points;
  points.reserve(count);
  for (std::size_t idx = 0; idx < count; ++idx) {
    std::vector<std::complex<double>> p(dims);
    std::size_t rest = idx;
    for (std::size_t i = 0; i < dims; ++i) {
      p[i] = ring[rest % grid];
      rest /= grid;
    }
    points.push_back(std::move(p));
  }

  NormTable out;
  out.radius = radius;
  out.grid = grid;
  for (unsigned m = 0; m < table.b.size(); ++m) {
    for (unsigned s = 0; s <= max_xi; ++s) {
      for (const auto& xi : indices_of_degree(n, s)) {
        MultiIndex full(dims);
        for (std::size_t i = 0; i < n; ++i) full[n + i] = xi[i];
        const FloatSeries f = to_float(diff(table.b[m], full));
        double best = 0;
        for (const auto& p : points) best = std::max(best, std::abs(eval(f, std::span<const std::complex<double>>(p))));
        Integer scale = factorial(2 * m + 1);
        for (std::size_t i = 0; i < n; ++i) scale *= factorial(xi[i]);
        out.entries.push_back({m, xi, best, best / to_double(Rational(scale))});
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

nlohmann::json coefficients_to_json(const CoefficientTable& table, const std::string& spec_hash) {
  nlohmann::json b = nlohmann::json::array(), a = nlohmann::json::array();
  for (const auto& s : table.b) b.push_back(series_to_json(s));
  for (const auto& s : table.a) a.push_back(series_to_json(s));
  return {{"manifest",
           {{"M", table.max_order},
            {"n", table.n},
            {"trunc_degree", table.trunc_degree},
            {"exact_degree", table.exact_degree},
            {"spec_hash", spec_hash}}},
          {"b", b},
          {"a", a}};
}

CoefficientTable coefficients_from_json(const nlohmann::json& j) {
  CoefficientTable t;
  const auto& man = j.at("manifest");
  t.max_order = man.at("M").get<unsigned>();
  t.n = man.at("n").get<std::size_t>();
  t.trunc_degree = man.at("trunc_degree").get<unsigned>();
  t.exact_degree = man.at("exact_degree").get<std::vector<unsigned>>();
  for (const auto& s : j.at("b")) t.b.push_back(rational_series_from_json(s));
  if (j.contains("a")) {
    for (const auto& s : j.at("a")) t.a.push_back(rational_series_from_json(s));
  }
  if (t.b.size() != t.max_order + 1) throw SeriesError("coefficient record: b has the wrong number of orders");
  return t;
}

}  // namespace bergman
