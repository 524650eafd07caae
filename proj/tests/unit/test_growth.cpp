#include <doctest.h>

#include <cmath>

#include "bergman/growth.hpp"

using namespace bergman;

namespace {

NormTable table_from(const std::vector<double>& norms) {
  NormTable t;
  t.radius = 0.1;
  t.grid = 5;
  for (unsigned m = 0; m < norms.size(); ++m) t.entries.push_back({m, MultiIndex{0}, norms[m], 0.0});
  return t;
}

// Direct transcription of the extremal recursion for n = 1, used as an independent oracle.
Rational brute_worst_case(unsigned m, unsigned xi) {
  if (m == 0) return xi == 0 ? 1 : 0;
  Rational s = 0;
  for (unsigned l = 1; l <= m; ++l) {
    for (unsigned a = 0; a <= l; ++a) {
      for (unsigned b = 0; b <= l; ++b) {
        for (unsigned g = 0; g <= a + b; ++g) {
          for (unsigned x0 = 0; x0 <= xi; ++x0) {
            Rational term = Rational(factorial(l)) * brute_worst_case(m - l, g + x0);
            term /= Rational(factorial(g));
            term *= Rational(factorial(xi)) / Rational(factorial(x0));
            term *= Rational(binomial(a + g, g) * binomial(b + g, g));
            s += term;
          }
        }
      }
    }
  }
  return s;
}

}  // namespace

TEST_SUITE("growth") {
  TEST_CASE("fit_growth degenerate verdicts") {
    CHECK(fit_growth(table_from({1, 0, 0, 0, 0}), GrowthModel::FactorialSquared).verdict == "vanishing");
    const auto beyond = fit_growth(table_from({1, 3, 2, 0, 0}), GrowthModel::FactorialSquared);
    CHECK(beyond.verdict == "vanishing beyond n");
    CHECK(beyond.last_nonzero_order == 2);
    CHECK_THROWS_AS(fit_growth(table_from({1, 0.5}), GrowthModel::FactorialSquared), std::invalid_argument);
  }

  TEST_CASE("fit_growth recovers an exact model and flags excess") {
    std::vector<double> norms;
    for (unsigned m = 0; m <= 6; ++m) norms.push_back(std::pow(0.3, m) * std::pow(std::tgamma(m + 1.0), 2));
    const auto fit = fit_growth(table_from(norms), GrowthModel::FactorialSquared);
    CHECK(fit.fitted_C == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(fit.envelope_C == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(fit.verdict == "PASS");
    for (double r : fit.residuals) CHECK(std::abs(r) <= 1e-12);

    // Under the single-factorial model these norms outgrow any fitted C.
    CHECK(fit_growth(table_from(norms), GrowthModel::Factorial).verdict == "FAIL");

    // One order 4% above the model still passes, 10% does not.
    auto bumped = norms;
    bumped[3] *= 1.04;
    const auto ok = fit_growth(table_from(bumped), GrowthModel::FactorialSquared);
    CHECK(ok.verdict == "PASS");
    bumped[3] = norms[3] * 1.3;
    CHECK(fit_growth(table_from(bumped), GrowthModel::FactorialSquared).verdict == "FAIL");
  }

  TEST_CASE("worst-case recursion matches a brute-force transcription") {
    const auto t = worst_case_recursion(1, 4, 3);
    for (unsigned m = 0; m <= 3; ++m) {
      for (unsigned k = 0; k <= 3; ++k) {
        CAPTURE(m);
        CAPTURE(k);
        CHECK(t.value(m, MultiIndex{k}) == brute_worst_case(m, k));
      }
    }
    // First level: b_{1,xi} = 4 xi! for n = 1 and 8 at xi = 0 for n = 2.
    for (unsigned k = 0; k <= 3; ++k) CHECK(t.value(1, MultiIndex{k}) == 4 * Rational(factorial(k)));
    CHECK(worst_case_recursion(2, 2, 1).value(1, MultiIndex{0, 0}) == 8);
  }

  TEST_CASE("worst-case lower bounds and monotonicity") {
    const auto t = worst_case_recursion(1, 5, 4);
    const auto rows = worst_case_lower_bounds(t, 4, 4, 5);
    CHECK(rows.size() == 4 * 5 + 6);
    for (const auto& r : rows) {
      CAPTURE(r.kind);
      CAPTURE(r.m);
      CAPTURE(r.k);
      CHECK(r.pass);
      CHECK(sgn(r.value) >= 0);
    }
    for (unsigned k = 0; k <= 4; ++k) CHECK(t.value(1, MultiIndex{k}) >= Rational(factorial(k)));
    CHECK(worst_case_monotone(t));
    CHECK(t.value(5, MultiIndex{0}) == Rational(Integer("3342294504")));

    const auto csv = lower_bounds_csv(rows);
    CHECK(csv.rfind("m,k,value,lower_bound,ratio,kind\n", 0) == 0);
    CHECK(csv.find("2,0,102,2,51,factorial\n") != std::string::npos);
  }

  TEST_CASE("worst-case resource guard") {
    CHECK(worst_case_cost(1, 5, 4) < kWorstCaseBudget);
    CHECK_THROWS_AS(worst_case_recursion(3, 12, 12), std::length_error);
  }

  TEST_CASE("truncation minimizer") {
    const auto a = truncation_minimizer(1.0, 100);
    CHECK(a.argmin >= 9);
    CHECK(a.argmin <= 11);
    CHECK(a.pass());
    const auto b = truncation_minimizer(4.0, 64);
    CHECK(b.argmin >= 3);
    CHECK(b.argmin <= 5);
    CHECK(b.pass());
    for (double C : {0.5, 1.0, 2.0, 4.0, 9.0}) {
      for (unsigned k : {1u, 3u, 10u, 64u, 100u, 500u, 1024u}) {
        const auto r = truncation_minimizer(C, k);
        CAPTURE(C);
        CAPTURE(k);
        CHECK(r.unimodal);
        if (r.x0 >= 1) CHECK(r.near_x0);
        if (r.bound_applicable) CHECK(r.bound_ok);
      }
    }
  }

  TEST_CASE("exponential-factorial lemma") {
    const auto [l1, r1] = exp_factorial_lemma_sides(1.0, 3, 10);
    CHECK(std::exp(l1) == doctest::Approx(10 * std::exp(-10.0)));
    CHECK(std::exp(r1) == doctest::Approx(32.0 * 24 / 1e4));
    const auto [l2, r2] = exp_factorial_lemma_sides(0.5, 0, 1);
    CHECK(std::exp(l2) == doctest::Approx(std::exp(-0.5)));
    CHECK(std::exp(r2) == doctest::Approx(16.0));
    const auto sweep = exp_factorial_lemma_check({0.1, 0.5, 1.0, 2.0}, 20, 10000);
    CHECK(sweep.pass());
    CHECK(sweep.checked == 4u * 21u * 10000u);
    CHECK(sweep.worst_margin > 0);
  }

  TEST_CASE("JSON summaries") {
    const auto fit = fit_growth(table_from({1, 0, 0}), GrowthModel::Factorial);
    const auto j = growth_fit_to_json(fit);
    CHECK(j["verdict"] == "vanishing");
    CHECK(j["fitted_C"].is_null());
    CHECK(j["model"] == "m_factorial");
    CHECK(minimizer_to_json(truncation_minimizer(1.0, 64))["verdict"] == "PASS");
    CHECK(lemma_to_json(exp_factorial_lemma_check({1.0}, 2, 10))["violations"] == 0);
  }
}
