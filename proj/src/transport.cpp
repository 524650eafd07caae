#include "bergman/transport.hpp"

#include "bergman/series_io.hpp"

namespace bergman {

int transport_exact_degree(unsigned D, unsigned m) { return static_cast<int>(D) - 1 - 2 * static_cast<int>(m); }

RationalSeries theta_divergence(const std::vector<RationalSeries>& A, std::size_t n) {
  const Blocks blk{n};
  RationalSeries out = diff_var(A.at(0), blk.w3(0));
  for (std::size_t i = 1; i < n; ++i) out = out + diff_var(A.at(i), blk.w3(i));
  return out;
}

RationalSeries contract_difference(const std::vector<RationalSeries>& A, std::size_t n) {
  // Multiplying by (x_i - y_i) raises the order by one, so the product is exact one degree
  // beyond the operands.
  const Blocks blk{n};
  const unsigned d = A.at(0).trunc_degree() + 1;
  RationalSeries out(blk.nvars3(), d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto diff_xy = RationalSeries::variable(blk.nvars3(), d, blk.x(i)) -
                         RationalSeries::variable(blk.nvars3(), d, blk.y(i));
    out = out + diff_xy * A[i].with_trunc_degree_unchecked(d);
  }
  return out;
}

namespace {

/// -int_0^1 (D_y h)(x, tx + (1-t)y, theta) dt, one component per y-variable.
std::vector<RationalSeries> minus_segment_gradient(const RationalSeries& h, std::size_t n) {
  const Blocks blk{n};
  std::vector<std::size_t> src(n), x_dst(n), y_dst(n);
  std::vector<long> keep(blk.nvars3(), -1);
  for (std::size_t i = 0; i < n; ++i) {
    src[i] = blk.y(i);
    x_dst[i] = blk.x(i);
    y_dst[i] = blk.y(i);
    keep[blk.x(i)] = static_cast<long>(blk.x(i));
    keep[blk.w3(i)] = static_cast<long>(blk.w3(i));
  }
  std::vector<RationalSeries> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(-integrate_segment(diff_var(h, blk.y(i)), src, x_dst, y_dst, keep, blk.nvars3()));
  }
  return out;
}

void require_budget(unsigned D, unsigned m) {
  if (transport_exact_degree(D, m) < 0) {
    throw DegreeBudgetError(2 * m + 1, "transport amplitude A_" + std::to_string(m));
  }
}

}  // namespace

std::vector<RationalSeries> transport_A1(const GeometryPack& geom) {
  require_budget(geom.trunc_degree, 1);
  return minus_segment_gradient(geom.delta0_xytheta, geom.n);
}

RationalSeries transport_rhs(const GeometryPack& geom, GeometryCompositions& comps,
                             const std::vector<RationalSeries>& A_prev, unsigned m) {
  const Blocks blk = geom.blocks();
  if (m == 1) {
    return geom.delta0_xytheta - RationalSeries::constant(blk.nvars3(), geom.delta0_xytheta.trunc_degree(), Rational(1));
  }
  const RationalSeries p = theta_divergence(A_prev, geom.n);
  const RationalSeries q = comps.lift(comps.back_to_z(blk.merge_y_into_x(p)));
  return geom.delta0_xytheta.truncated(q.trunc_degree()) * q - p;
}

std::vector<RationalSeries> transport_step(const GeometryPack& geom, GeometryCompositions& comps,
                                           const std::vector<RationalSeries>& A_prev, unsigned m) {
  if (m < 2) throw std::invalid_argument("transport_step: m must be at least 2");
  require_budget(geom.trunc_degree, m);
  return minus_segment_gradient(transport_rhs(geom, comps, A_prev, m), geom.n);
}

std::vector<RationalSeries> reconstruct_B(const GeometryPack& geom, GeometryCompositions& comps,
                                          const TransportChain& chain, unsigned M) {
  if (static_cast<int>(geom.trunc_degree) < 2 + 2 * static_cast<int>(M)) {
    throw DegreeBudgetError(required_trunc_degree(M), "reconstructing b_m up to order " + std::to_string(M));
  }
  if (M > chain.max_order) throw std::invalid_argument("reconstruct_B: chain is shorter than the requested order");
  const Blocks blk = geom.blocks();
  std::vector<RationalSeries> b{RationalSeries::constant(blk.nvars2(), geom.trunc_degree - 2, Rational(1))};
  for (unsigned m = 1; m <= M; ++m) {
    b.push_back(comps.back_to_z(blk.merge_y_into_x(theta_divergence(chain.A[m], geom.n))));
  }
  return b;
}

TransportChain build_transport_chain(const GeometryPack& geom, unsigned M, GeometryCompositions& comps) {
  require_budget(geom.trunc_degree, M);
  TransportChain chain;
  chain.n = geom.n;
  chain.trunc_degree = geom.trunc_degree;
  chain.max_order = M;
  chain.A.push_back({});
  if (M >= 1) chain.A.push_back(transport_A1(geom));
  for (unsigned m = 2; m <= M; ++m) chain.A.push_back(transport_step(geom, comps, chain.A[m - 1], m));
  // b_m needs one more degree than A_m.
  unsigned reachable = M;
  while (reachable > 0 && coefficient_exact_degree(geom.trunc_degree, reachable) < 0) --reachable;
  chain.b = reconstruct_B(geom, comps, chain, reachable);
  return chain;
}

TransportChain build_transport_chain(const GeometryPack& geom, unsigned M) {
  GeometryCompositions comps(geom);
  return build_transport_chain(geom, M, comps);
}

RationalSeries transport_order_part(const GeometryPack& geom, GeometryCompositions& comps,
                                    const TransportChain& chain, unsigned m) {
  if (m + 1 > chain.max_order || m >= chain.b.size()) {
    throw std::invalid_argument("transport_order_part: order " + std::to_string(m) + " needs A_" +
                                std::to_string(m + 1) + " and b_" + std::to_string(m));
  }
  const Blocks blk = geom.blocks();
  const RationalSeries next = contract_difference(chain.A[m + 1], geom.n);
  const unsigned d = next.trunc_degree();
  const RationalSeries div = m == 0 ? RationalSeries::constant(blk.nvars3(), d, Rational(1))
                                    : theta_divergence(chain.A[m], geom.n).truncated(d);
  const RationalSeries numerator = comps.into_z(next + div);
  return numerator * invert(geom.delta0_xyz.truncated(d));
}

std::vector<YIndependenceReport> y_independence_check(const GeometryPack& geom, GeometryCompositions& comps,
                                                      const TransportChain& chain) {
  const Blocks blk = geom.blocks();
  std::vector<YIndependenceReport> out;
  for (unsigned m = 0; m + 1 <= chain.max_order && m < chain.b.size(); ++m) {
    const RationalSeries e = transport_order_part(geom, comps, chain, m);
    YIndependenceReport r;
    r.order = m;
    r.checked_degree = e.trunc_degree();
    r.y_free = !blk.depends_on_y(e);
    r.matches_b = blk.drop_y(e) == chain.b[m].truncated(e.trunc_degree());
    out.push_back(r);
  }
  return out;
}

nlohmann::json transport_to_json(const TransportChain& chain, const std::string& spec_hash) {
  nlohmann::json A = nlohmann::json::array(), b = nlohmann::json::array(), exact = nlohmann::json::array();
  for (unsigned m = 1; m < chain.A.size(); ++m) {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& s : chain.A[m]) comps.push_back(series_to_json(s));
    A.push_back(comps);
    exact.push_back(transport_exact_degree(chain.trunc_degree, m));
  }
  for (const auto& s : chain.b) b.push_back(series_to_json(s));
  return {{"manifest",
           {{"M", chain.max_order},
            {"n", chain.n},
            {"trunc_degree", chain.trunc_degree},
            {"A_exact_degree", exact},
            {"spec_hash", spec_hash}}},
          {"A", A},
          {"b", b}};
}

}  // namespace bergman
