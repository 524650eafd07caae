#pragma once

#include <vector>

#include <json.hpp>

#include "bergman/coefficients.hpp"

namespace bergman {

/// Vector amplitudes A_m(x,y,theta) of the transport chain and the coefficients they
/// reconstruct. A[0] is the zero vector; A[m] holds n components for m >= 1.
///
/// Exactness with the potential truncated at D: A_m is exact through degree D-1-2m, its
/// divergence D_theta . A_m through D-2-2m, and so is the reconstructed b_m.
struct TransportChain {
  std::size_t n = 0;
  unsigned trunc_degree = 0;
  unsigned max_order = 0;  // highest m with A_m computed
  std::vector<std::vector<RationalSeries>> A;
  std::vector<RationalSeries> b;  // (x,z), reconstructed b_0..b_{max_order}
};

int transport_exact_degree(unsigned D, unsigned m);

/// D_theta . A = sum_i d A_i / d theta_i.
RationalSeries theta_divergence(const std::vector<RationalSeries>& A, std::size_t n);
/// (x - y) . A = sum_i (x_i - y_i) A_i.
RationalSeries contract_difference(const std::vector<RationalSeries>& A, std::size_t n);

/// A_1 = -int_0^1 (D_y Delta0)(x, tx + (1-t)y, theta) dt.
std::vector<RationalSeries> transport_A1(const GeometryPack& geom);

/// A_m = -int_0^1 D_y[Delta0 Q - P](x, tx + (1-t)y, theta) dt with P = D_theta . A_{m-1} and
/// Q(x,y,theta) = P(x, x, psi_x(x, z(x,y,theta))).
std::vector<RationalSeries> transport_step(const GeometryPack& geom, GeometryCompositions& comps,
                                           const std::vector<RationalSeries>& A_prev, unsigned m);

/// Right side of the order-m transport identity: Delta0 Q - P (or Delta0 - 1 when m = 1).
/// The chain satisfies (x - y) . A_m = this series.
RationalSeries transport_rhs(const GeometryPack& geom, GeometryCompositions& comps,
                             const std::vector<RationalSeries>& A_prev, unsigned m);

/// b_m(x,z) = (D_theta . A_m)(x, x, psi_x(x,z)), with b_0 = 1.
std::vector<RationalSeries> reconstruct_B(const GeometryPack& geom, GeometryCompositions& comps,
                                          const TransportChain& chain, unsigned M);

TransportChain build_transport_chain(const GeometryPack& geom, unsigned M, GeometryCompositions& comps);
TransportChain build_transport_chain(const GeometryPack& geom, unsigned M);

/// The order-m part of (1 + k (x-y).A + D_theta.A) / Delta0 in (x,y,z) coordinates:
///   E_m = [(x-y).A_{m+1} + D_theta.A_m](x,y,theta(x,y,z)) / Delta0(x,y,z),
/// with D_theta.A_0 read as 1. Needs A_{m+1}.
RationalSeries transport_order_part(const GeometryPack& geom, GeometryCompositions& comps,
                                    const TransportChain& chain, unsigned m);

struct YIndependenceReport {
  unsigned order = 0;
  unsigned checked_degree = 0;
  bool y_free = false;         // no y-dependent coefficient survives
  bool matches_b = false;      // the y-free remainder equals b_m
};

/// Checks orders 0..chain.max_order-1 (each needs the next amplitude).
std::vector<YIndependenceReport> y_independence_check(const GeometryPack& geom, GeometryCompositions& comps,
                                                      const TransportChain& chain);

nlohmann::json transport_to_json(const TransportChain& chain, const std::string& spec_hash);

}  // namespace bergman
