#include "bergman/growth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace bergman {

std::string growth_model_name(GrowthModel model) {
  return model == GrowthModel::FactorialSquared ? "m_factorial_sq" : "m_factorial";
}

GrowthFit fit_growth(const NormTable& table, GrowthModel model, double slack) {
  GrowthFit fit;
  fit.model = model;
  fit.radius = table.radius;
  fit.grid = table.grid;
  fit.slack = slack;
  fit.norms = table.order_norms();
  for (unsigned m = 0; m < fit.norms.size(); ++m) fit.orders.push_back(m);
  fit.residuals.assign(fit.norms.size(), 0.0);
  const double w = model == GrowthModel::FactorialSquared ? 2.0 : 1.0;

  for (unsigned m = 0; m < fit.norms.size(); ++m) {
    if (fit.norms[m] != 0.0) fit.last_nonzero_order = m;
  }
  const bool tail_zero = fit.last_nonzero_order + 1 < fit.norms.size();
  if (fit.last_nonzero_order == 0) {
    fit.verdict = "vanishing";
    return fit;
  }
  if (tail_zero) {
    fit.verdict = "vanishing beyond n";
    return fit;
  }

  std::size_t positive = 0;
  double num = 0, den = 0;
  for (unsigned m = 0; m < fit.norms.size(); ++m) {
    if (!(fit.norms[m] > 0)) continue;
    ++positive;
    if (m == 0) continue;
    num += m * (std::log(fit.norms[m]) - w * std::lgamma(m + 1.0));
    den += static_cast<double>(m) * m;
  }
  if (positive < 3) throw std::invalid_argument("fit_growth: need at least three orders with positive norm");
  const double logC = num / den;
  fit.fitted_C = std::exp(logC);

  double env = -std::numeric_limits<double>::infinity();
  bool ok = true;
  for (unsigned m = 0; m < fit.norms.size(); ++m) {
    if (!(fit.norms[m] > 0)) continue;
    const double log_model = m * logC + w * std::lgamma(m + 1.0);
    fit.residuals[m] = std::log(fit.norms[m]) - log_model;
    if (fit.residuals[m] > std::log1p(slack)) ok = false;
    if (m > 0) env = std::max(env, (std::log(fit.norms[m]) - w * std::lgamma(m + 1.0)) / m);
  }
  fit.envelope_C = std::exp(env);
  fit.verdict = ok ? "PASS" : "FAIL";
  return fit;
}

const Rational& WorstCaseTable::value(unsigned m, const MultiIndex& xi) const {
  for (const auto& [idx, v] : levels.at(m)) {
    if (idx == xi) return v;
  }
  throw std::out_of_range("WorstCaseTable: no entry for m = " + std::to_string(m) + ", xi = " + xi.to_string());
}

namespace {

std::vector<MultiIndex> indices_up_to(std::size_t n, unsigned degree) {
  std::vector<MultiIndex> out;
  for (unsigned d = 0; d <= degree; ++d) {
    for (auto& idx : indices_of_degree(n, d)) out.push_back(std::move(idx));
  }
  return out;
}

Integer multi_factorial(const MultiIndex& a) {
  Integer f = 1;
  for (unsigned e : a.entries()) f *= factorial(e);
  return f;
}

// prod_i binom(alpha_i + g, g)
Integer shifted_binomial(const MultiIndex& alpha, unsigned g) {
  Integer p = 1;
  for (unsigned e : alpha.entries()) p *= binomial(e + g, g);
  return p;
}

unsigned level_reach(unsigned M, unsigned Kmax, unsigned m) { return Kmax + 2 * (M - m); }

}  // namespace

double worst_case_cost(std::size_t n, unsigned M, unsigned Kmax) {
  auto count_up_to = [n](unsigned d) { return std::exp(std::lgamma(d + n + 1.0) - std::lgamma(d + 1.0) - std::lgamma(n + 1.0)); };
  double cost = 0;
  for (unsigned m = 1; m <= M; ++m) {
    const unsigned reach = level_reach(M, Kmax, m);
    const double targets = count_up_to(reach);
    for (unsigned l = 1; l <= m; ++l) {
      const double deltas = count_up_to(l);
      const double alphas = std::pow(l + 1.0, static_cast<double>(n));
      const double gammas = count_up_to(2 * l);
      const double xi0 = std::pow(reach + 1.0, static_cast<double>(n));
      cost += targets * deltas * (alphas * alphas * 2 * l + gammas * xi0);
    }
  }
  return cost;
}

WorstCaseTable worst_case_recursion(std::size_t n, unsigned M, unsigned Kmax) {
  if (n < 1) throw std::invalid_argument("worst_case_recursion: n must be positive");
  const double cost = worst_case_cost(n, M, Kmax);
  if (cost > kWorstCaseBudget) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "worst_case_recursion: n=%zu M=%u Kmax=%u needs about %.3g steps (budget %.3g)", n,
                  M, Kmax, cost, kWorstCaseBudget);
    throw std::length_error(buf);
  }
  WorstCaseTable table;
  table.n = n;
  table.max_order = M;
  table.max_k = Kmax;

  // Level lookup by packed key; every needed entry exists because reach shrinks by 2 per level.
  std::vector<std::map<detail::MonoKey, Rational>> lookup(M + 1);
  auto get = [&](unsigned m, const MultiIndex& xi) -> const Rational& { return lookup[m].at(detail::pack(xi)); };

  for (unsigned m = 0; m <= M; ++m) {
    const auto targets = indices_up_to(n, level_reach(M, Kmax, m));
    for (const auto& xi : targets) {
      Rational v = 0;
      if (m == 0) {
        v = xi.total() == 0 ? 1 : 0;
      } else {
        const Integer xi_fact = multi_factorial(xi);
        const auto xi0s = indices_below(xi);
        for (unsigned l = 1; l <= m; ++l) {
          // T[g] = sum_{|gamma| = g} sum_{xi0 <= xi} b_{m-l, gamma + xi0} xi! / (gamma! xi0!)
          std::vector<Rational> T(2 * l + 1, Rational(0));
          for (unsigned g = 0; g <= 2 * l; ++g) {
            for (const auto& gamma : indices_of_degree(n, g)) {
              const Integer gamma_fact = multi_factorial(gamma);
              for (const auto& xi0 : xi0s) {
                const Rational& prev = get(m - l, gamma + xi0);
                if (sgn(prev) == 0) continue;
                Rational weight(xi_fact, gamma_fact * multi_factorial(xi0));
                weight.canonicalize();
                T[g] += prev * weight;
              }
            }
          }
          for (const auto& delta : indices_of_degree(n, l)) {
            const Integer delta_fact = multi_factorial(delta);
            const auto below = indices_below(delta);
            Rational inner = 0;
            for (const auto& alpha : below) {
              for (const auto& beta : below) {
                const unsigned gmax = alpha.total() + beta.total();
                for (unsigned g = 0; g <= gmax; ++g) {
                  if (sgn(T[g]) == 0) continue;
                  const Rational binoms(shifted_binomial(alpha, g) * shifted_binomial(beta, g));
                  inner += binoms * T[g];
                }
              }
            }
            v += Rational(delta_fact) * inner;
          }
        }
      }
      lookup[m].emplace(detail::pack(xi), v);
    }
    table.levels.emplace_back();
    for (const auto& xi : targets) table.levels.back().emplace_back(xi, get(m, xi));
  }
  return table;
}

std::vector<LowerBoundRow> worst_case_lower_bounds(const WorstCaseTable& table, unsigned fact_m, unsigned fact_k,
                                                   unsigned sq_m) {
  if (fact_m > table.max_order || sq_m > table.max_order || fact_k > table.max_k) {
    throw std::invalid_argument("worst_case_lower_bounds: table does not reach the requested range");
  }
  std::vector<LowerBoundRow> rows;
  for (unsigned m = 1; m <= fact_m; ++m) {
    for (unsigned k = 0; k <= fact_k; ++k) {
      LowerBoundRow r;
      r.kind = "factorial";
      r.m = m;
      r.k = k;
      r.value = table.value(m, MultiIndex::unit(table.n, 0, k));
      r.bound = Rational(factorial(2 * m - 2 + k));
      r.pass = r.value >= r.bound;
      rows.push_back(std::move(r));
    }
  }
  for (unsigned m = 0; m <= sq_m; ++m) {
    LowerBoundRow r;
    r.kind = "factorial_sq";
    r.m = m;
    r.k = 0;
    r.value = table.value(m, MultiIndex(table.n));
    const Integer f = factorial(m);
    Integer four_pow;
    mpz_ui_pow_ui(four_pow.get_mpz_t(), 4, m);
    r.bound = Rational(f * f, four_pow);
    r.bound.canonicalize();
    r.pass = r.value >= r.bound;
    rows.push_back(std::move(r));
  }
  return rows;
}

bool worst_case_monotone(const WorstCaseTable& table) {
  const MultiIndex zero(table.n);
  for (unsigned m = 1; m <= table.max_order; ++m) {
    if (table.value(m, zero) < table.value(m - 1, zero)) return false;
  }
  return true;
}

std::string lower_bounds_csv(const std::vector<LowerBoundRow>& rows) {
  std::string out = "m,k,value,lower_bound,ratio,kind\n";
  char buf[64];
  for (const auto& r : rows) {
    const Rational ratio = r.value / r.bound;
    std::snprintf(buf, sizeof buf, "%.17g", to_double(ratio));
    out += std::to_string(r.m) + "," + std::to_string(r.k) + "," + r.value.get_str() + "," + r.bound.get_str() + "," +
           buf + "," + r.kind + "\n";
  }
  return out;
}

MinimizerReport truncation_minimizer(double C, unsigned k) {
  if (!(C > 0) || k < 1) throw std::invalid_argument("truncation_minimizer: need C > 0 and k >= 1");
  MinimizerReport r;
  r.C = C;
  r.k = k;
  r.x0 = std::sqrt(k / C);
  const double logC = std::log(C), logk = std::log(static_cast<double>(k));
  std::vector<double> f(k + 1);
  for (unsigned N = 1; N <= k; ++N) f[N] = N * (logC - logk) + 2 * std::lgamma(N + 1.0);
  r.argmin = 1;
  for (unsigned N = 2; N <= k; ++N) {
    if (f[N] < f[r.argmin]) r.argmin = N;
  }
  r.log_min = f[r.argmin];
  r.unimodal = true;
  for (unsigned N = 2; N <= r.argmin; ++N) {
    if (f[N] > f[N - 1]) r.unimodal = false;
  }
  for (unsigned N = r.argmin + 1; N <= k; ++N) {
    if (f[N] < f[N - 1]) r.unimodal = false;
  }
  r.near_x0 = std::abs(static_cast<double>(r.argmin) - r.x0) <= 1.0;
  const double m0 = std::floor(r.x0);
  r.bound_applicable = m0 >= 1;
  if (r.bound_applicable) {
    const double b1 = 2.0 + std::log(m0) - 2.0 * m0;
    const double b2 = 4.0 + std::log(r.x0) - 2.0 * r.x0;
    r.bound_ok = r.log_min <= b1 && r.log_min <= b2;
  }
  return r;
}

std::pair<double, double> exp_factorial_lemma_sides(double delta, unsigned N, unsigned k) {
  const double lk = std::log(static_cast<double>(k));
  const double lhs = lk - k * delta;
  const double rhs = (N + 2.0) * std::log(2.0 / delta) + std::lgamma(N + 2.0) - (N + 1.0) * lk;
  return {lhs, rhs};
}

LemmaReport exp_factorial_lemma_check(const std::vector<double>& deltas, unsigned max_N, unsigned max_k) {
  LemmaReport r;
  r.deltas = deltas;
  r.max_N = max_N;
  r.max_k = max_k;
  r.worst_margin = std::numeric_limits<double>::infinity();
  for (double d : deltas) {
    if (!(d > 0)) throw std::invalid_argument("exp_factorial_lemma_check: delta must be positive");
    for (unsigned N = 0; N <= max_N; ++N) {
      for (unsigned k = 1; k <= max_k; ++k) {
        const auto [lhs, rhs] = exp_factorial_lemma_sides(d, N, k);
        ++r.checked;
        if (lhs > rhs) ++r.violations;
        r.worst_margin = std::min(r.worst_margin, rhs - lhs);
      }
    }
  }
  return r;
}

nlohmann::json growth_fit_to_json(const GrowthFit& fit) {
  const bool fitted = fit.verdict == "PASS" || fit.verdict == "FAIL";
  return {{"model", growth_model_name(fit.model)},
          {"radius", fit.radius},
          {"grid", fit.grid},
          {"orders", fit.orders},
          {"norms", fit.norms},
          {"fitted_C", fitted ? nlohmann::json(fit.fitted_C) : nlohmann::json(nullptr)},
          {"envelope_C", fitted ? nlohmann::json(fit.envelope_C) : nlohmann::json(nullptr)},
          {"residuals", fit.residuals},
          {"slack", fit.slack},
          {"last_nonzero_order", fit.last_nonzero_order},
          {"verdict", fit.verdict}};
}

nlohmann::json lower_bounds_to_json(const std::vector<LowerBoundRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"kind", r.kind},
                   {"m", r.m},
                   {"k", r.k},
                   {"value", r.value.get_str()},
                   {"lower_bound", r.bound.get_str()},
                   {"verdict", r.pass ? "PASS" : "FAIL"}});
  }
  return out;
}

nlohmann::json minimizer_to_json(const MinimizerReport& r) {
  return {{"C", r.C},
          {"k", r.k},
          {"argmin", r.argmin},
          {"log_min", r.log_min},
          {"x0", r.x0},
          {"unimodal", r.unimodal},
          {"near_x0", r.near_x0},
          {"bound_applicable", r.bound_applicable},
          {"bound_ok", r.bound_ok},
          {"verdict", r.pass() ? "PASS" : "FAIL"}};
}

nlohmann::json lemma_to_json(const LemmaReport& r) {
  return {{"deltas", r.deltas},
          {"max_N", r.max_N},
          {"max_k", r.max_k},
          {"checked", r.checked},
          {"violations", r.violations},
          {"worst_margin", r.worst_margin},
          {"verdict", r.pass() ? "PASS" : "FAIL"}};
}

}  // namespace bergman
