#include <doctest.h>

#include <cmath>
#include <random>

#include "bergman/chsc.hpp"
#include "bergman/coefficients.hpp"
#include "bergman/series_io.hpp"
#include "bergman/transport.hpp"
#include "generators.hpp"

using namespace bergman;

namespace {

RationalSeries var(std::size_t nvars, unsigned d, std::size_t i) { return RationalSeries::variable(nvars, d, i); }

bool is_constant(const RationalSeries& s) { return s.size() == 0 || (s.size() == 1 && s.max_degree() == 0); }

}  // namespace

TEST_SUITE("coefficients") {
  TEST_CASE("exact degree bookkeeping and budget errors") {
    CHECK(coefficient_exact_degree(10, 4) == 0);
    CHECK(coefficient_exact_degree(12, 3) == 4);
    CHECK(required_trunc_degree(4) == 10);
    const auto g = build_geometry(quartic_potential(1, Rational(1, 10), 7));
    try {
      bbs_recursion(g, 3);
      FAIL("expected a degree budget error");
    } catch (const DegreeBudgetError& e) {
      CHECK(e.required() == 8);
      CHECK(std::string(e.what()).find("trunc_degree >= 8") != std::string::npos);
    }
  }

  TEST_CASE("contract_diagonal on single monomials") {
    // n = 1, variables (x, y, theta). y^2 theta^3 -> 6 x theta^2 (l=1) and 6 theta (l=2).
    const auto f = RationalSeries::from_terms(3, 8, {{MultiIndex{0, 2, 3}, Rational(1)}});
    const auto c1 = contract_diagonal(f, 1, 1);
    CHECK(c1.trunc_degree() == 6);
    CHECK(c1 == RationalSeries::from_terms(2, 6, {{MultiIndex{1, 2}, Rational(6)}}));
    CHECK(contract_diagonal(f, 1, 2) == RationalSeries::from_terms(2, 4, {{MultiIndex{0, 1}, Rational(6)}}));
    CHECK(contract_diagonal(f, 1, 3).is_zero());

    // n = 2: y1 y2 th1 th2 with l = 2 keeps only delta = (1,1): 1*1/1! /1! = 1.
    const auto g = RationalSeries::from_terms(6, 8, {{MultiIndex{0, 0, 1, 1, 1, 1}, Rational(1)}});
    CHECK(contract_diagonal(g, 2, 2) == RationalSeries::constant(4, 4, Rational(1)));
    // l = 1 sums the two single contractions.
    const auto expect = RationalSeries::from_terms(4, 6, {{MultiIndex{0, 1, 0, 1}, Rational(1)},
                                                          {MultiIndex{1, 0, 1, 0}, Rational(1)}});
    CHECK(contract_diagonal(g, 2, 1) == expect);
  }

  TEST_CASE("flat potential: all corrections vanish") {
    for (std::size_t n : {1u, 2u}) {
      const auto g = build_geometry(flat_potential(n, 10));
      auto t = bbs_recursion(g, 4);
      CHECK(t.b[0] == RationalSeries::constant(2 * n, 8, Rational(1)));
      for (unsigned m = 1; m <= 4; ++m) CHECK(t.b[m].is_zero());
      for (const auto& a : t.a) CHECK(a.is_zero());
      const auto norms = derivative_norm_table(t, 0.2, 3, 1);
      CHECK(norms.find(0, MultiIndex(n))->norm == 1.0);
      for (const auto& e : norms.entries) {
        if (e.m >= 1) CHECK(e.norm == 0.0);
      }
    }
  }

  TEST_CASE("chsc presets give constant coefficients matching the closed form") {
    for (std::size_t n : {1u, 2u}) {
      for (long c : {-1L, 0L, 1L}) {
        const auto g = build_geometry(chsc_potential(n, Rational(c), 10));
        const auto t = bbs_recursion(g, 4);
        const auto closed = chsc_b(n, Rational(c), 4);
        for (unsigned m = 0; m <= 4; ++m) {
          CAPTURE(n);
          CAPTURE(c);
          CAPTURE(m);
          CHECK(is_constant(t.b[m]));
          CHECK(t.b[m].constant_term() == closed[m]);
        }
      }
    }
    const auto t21 = bbs_recursion(build_geometry(chsc_potential(2, Rational(1), 10)), 3);
    CHECK(t21.b[1].constant_term() == 3);
    CHECK(t21.b[2].constant_term() == 2);
    CHECK(t21.b[3].is_zero());
  }

  TEST_CASE("amplitude relations") {
    const auto g = build_geometry(chsc_potential(1, Rational(1), 10));
    auto t = bbs_recursion(g, 2);
    GeometryCompositions comps(g);
    amplitude_from_b(t, g, comps);
    const auto one = RationalSeries::constant(3, g.delta0_xytheta.trunc_degree(), Rational(1));
    CHECK(t.a[0] == g.delta0_xytheta - one);
    // b_1 = 1, so a_1 is Delta0 itself up to the exact degree of b_1.
    CHECK(t.a[1] == g.delta0_xytheta.truncated(t.a[1].trunc_degree()));

    // On the diagonal a_m(x,x,theta) = b_m(x, z(x,x,theta)) for a generic potential.
    std::mt19937_64 rng(11);
    const auto spec = gen::hermitian_potential(rng, 1, 12, 6);
    const auto gq = build_geometry(spec);
    GeometryCompositions cq(gq);
    auto tq = bbs_recursion(gq, 3, cq);
    const Blocks blk = gq.blocks();
    for (unsigned m = 1; m <= 3; ++m) {
      CAPTURE(m);
      CHECK(blk.merge_y_into_x(tq.a[m]) == blk.merge_y_into_x(cq.lift(tq.b[m])));
    }
  }

  TEST_CASE("property: truncation stability across two degrees") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 3; ++trial) {
      const std::size_t n = trial == 2 ? 2 : 1;
      auto lo = gen::hermitian_potential(rng, n, n == 1 ? 10 : 8, 5);
      auto hi = lo;
      hi.trunc_degree = lo.trunc_degree + 4;
      const unsigned M = (lo.trunc_degree - 2) / 2;
      const auto tl = bbs_recursion(build_geometry(lo), M);
      const auto th = bbs_recursion(build_geometry(hi), M);
      for (unsigned m = 0; m <= M; ++m) {
        CAPTURE(trial);
        CAPTURE(m);
        const unsigned d = static_cast<unsigned>(coefficient_exact_degree(lo.trunc_degree, m));
        CHECK(tl.b[m].trunc_degree() == d);
        CHECK(tl.b[m] == th.b[m].truncated(d));
      }
    }
  }

  TEST_CASE("property: b_m(x, conj x) is real") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 3; ++trial) {
      const std::size_t n = trial == 0 ? 2 : 1;
      const auto spec = gen::hermitian_potential(rng, n, n == 1 ? 12 : 8, 6);
      const auto t = bbs_recursion(build_geometry(spec), n == 1 ? 4 : 2);
      for (const auto& pt : polydisc_samples(n, 40, 0.2)) {
        for (unsigned m = 1; m <= t.max_order; ++m) {
          const auto v = eval_polarized(to_float(t.b[m]), pt, pt);
          CHECK(std::abs(v.imag()) <= 1e-10);
        }
      }
    }
  }

  TEST_CASE("norm table basics and the quartic regression value") {
    const auto g = build_geometry(quartic_potential(1, Rational(1, 10), 24));
    const auto t = bbs_recursion(g, 8);
    const auto table = derivative_norm_table(t, 0.1, 5, 2);
    CHECK(table.find(0, MultiIndex{0})->norm == 1.0);
    for (const auto& e : table.entries) CHECK(e.norm >= 0.0);
    // b_1 = -1/5 + ..., so the grid max sits near 0.2.
    CHECK(table.find(1, MultiIndex{0})->norm == doctest::Approx(0.2019530).epsilon(1e-6));
    const auto* e = table.find(2, MultiIndex{1});
    REQUIRE(e != nullptr);
    CHECK(e->normalized == doctest::Approx(e->norm / (120.0 * 1.0)));
    const auto csv = table.to_csv();
    CHECK(csv.rfind("m,xi,norm,normalized,radius,grid\n", 0) == 0);
    CHECK(csv.find("\n1,0,") != std::string::npos);
  }

  TEST_CASE("quartic constant terms") {
    const auto t = bbs_recursion(build_geometry(quartic_potential(1, Rational(1, 10), 20)), 4);
    const std::vector<Rational> expect{Rational(1), Rational(-1, 5), Rational(4, 25), Rational(-22, 125),
                                       Rational(154, 625)};
    for (unsigned m = 0; m <= 4; ++m) CHECK(t.b[m].constant_term() == expect[m]);
  }

  TEST_CASE("coefficient JSON round trip") {
    const auto t = bbs_recursion(build_geometry(quartic_potential(1, Rational(1, 10), 10)), 3);
    const auto j = coefficients_to_json(t, "abc");
    CHECK(j["manifest"]["spec_hash"] == "abc");
    CHECK(j["manifest"]["exact_degree"][3] == 2);
    const auto back = coefficients_from_json(j);
    REQUIRE(back.b.size() == t.b.size());
    for (std::size_t m = 0; m < t.b.size(); ++m) CHECK(back.b[m] == t.b[m]);
  }
}

TEST_SUITE("transport") {
  TEST_CASE("flat: every amplitude vanishes and B = 1") {
    const auto g = build_geometry(flat_potential(2, 9));
    const auto chain = build_transport_chain(g, 3);
    for (unsigned m = 1; m <= 3; ++m) {
      for (const auto& comp : chain.A[m]) CHECK(comp.is_zero());
    }
    CHECK(chain.b[0].constant_term() == 1);
    for (unsigned m = 1; m < chain.b.size(); ++m) CHECK(chain.b[m].is_zero());
  }

  TEST_CASE("first amplitude solves (x - y) . A_1 = Delta0 - 1") {
    const auto g = build_geometry(chsc_potential(1, Rational(1), 10));
    const auto A1 = transport_A1(g);
    const auto lhs = contract_difference(A1, 1);
    const auto rhs = g.delta0_xytheta - RationalSeries::constant(3, g.delta0_xytheta.trunc_degree(), Rational(1));
    CHECK(lhs.truncated(rhs.trunc_degree()) == rhs);

    // Closed form for curvature 1: (x - y) . A_1 = e^{theta (x - y)} - 1.
    const unsigned d = rhs.trunc_degree();
    const auto u = var(3, d, 2) * (var(3, d, 0) - var(3, d, 1));
    RationalSeries e(3, d), p = RationalSeries::constant(3, d, Rational(1));
    for (unsigned k = 1; 2 * k <= d; ++k) {
      p = p * u;
      e = e + p.scaled(Rational(1) / Rational(factorial(k)));
    }
    CHECK(lhs.truncated(d) == e);
  }

  TEST_CASE("every step satisfies its transport identity") {
    std::mt19937_64 rng(99);
    for (const auto& spec : {quartic_potential(1, Rational(1, 10), 12), gen::hermitian_potential(rng, 1, 12, 6),
                             gen::hermitian_potential(rng, 2, 9, 6)}) {
      const auto g = build_geometry(spec);
      GeometryCompositions comps(g);
      const auto chain = build_transport_chain(g, (spec.trunc_degree - 1) / 2, comps);
      for (unsigned m = 1; m <= chain.max_order; ++m) {
        CAPTURE(m);
        const auto rhs = transport_rhs(g, comps, chain.A[m - 1], m);
        const auto lhs = contract_difference(chain.A[m], g.n);
        const unsigned d = static_cast<unsigned>(transport_exact_degree(spec.trunc_degree, m)) + 1;
        CHECK(lhs.truncated(d) == rhs.truncated(d));
      }
    }
  }

  TEST_CASE("cross-method equality with the recursion") {
    for (const auto& spec : {flat_potential(1, 12), chsc_potential(1, Rational(1), 12),
                             chsc_potential(1, Rational(-1), 12), chsc_potential(2, Rational(1), 12),
                             quartic_potential(1, Rational(1, 10), 12)}) {
      const auto g = build_geometry(spec);
      GeometryCompositions comps(g);
      const auto table = bbs_recursion(g, 3, comps);
      const auto chain = build_transport_chain(g, 3, comps);
      for (unsigned m = 0; m <= 3; ++m) {
        CAPTURE(spec.name);
        CAPTURE(m);
        CHECK(chain.b[m] == table.b[m]);
      }
    }
  }

  TEST_CASE("y-independence of the assembled amplitude") {
    std::mt19937_64 rng(5);
    for (const auto& spec : {quartic_potential(1, Rational(1, 10), 12), gen::hermitian_potential(rng, 2, 9, 5)}) {
      const auto g = build_geometry(spec);
      GeometryCompositions comps(g);
      const auto chain = build_transport_chain(g, (spec.trunc_degree - 1) / 2, comps);
      const auto reports = y_independence_check(g, comps, chain);
      REQUIRE(!reports.empty());
      for (const auto& r : reports) {
        CAPTURE(r.order);
        CHECK(r.y_free);
        CHECK(r.matches_b);
      }
    }
  }

  TEST_CASE("budget guard and serialization") {
    const auto g = build_geometry(quartic_potential(1, Rational(1, 10), 6));
    try {
      build_transport_chain(g, 3);
      FAIL("expected a degree budget error");
    } catch (const DegreeBudgetError& e) {
      CHECK(e.required() == 7);
    }
    const auto chain = build_transport_chain(g, 2);
    const auto j = transport_to_json(chain, "h");
    CHECK(j["manifest"]["A_exact_degree"] == nlohmann::json::array({3, 1}));
    CHECK(j["A"].size() == 2);
    CHECK(j["b"].size() == chain.b.size());
  }
}
