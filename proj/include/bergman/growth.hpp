#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "bergman/coefficients.hpp"
#include "bergman/multi_index.hpp"
#include "bergman/rational.hpp"

namespace bergman {

enum class GrowthModel { FactorialSquared, Factorial };

std::string growth_model_name(GrowthModel model);

struct GrowthFit {
  GrowthModel model = GrowthModel::FactorialSquared;
  double radius = 0;
  unsigned grid = 0;
  std::vector<unsigned> orders;
  std::vector<double> norms;
  /// Least-squares C of log norm_m = m log C + w log m! over the positive orders m >= 1.
  double fitted_C = 0;
  /// Smallest C with norm_m <= C^m (m!)^w for every order; informational only.
  double envelope_C = 0;
  /// log norm_m - m log C - w log m!, zero for orders with vanishing norm.
  std::vector<double> residuals;
  double slack = 0.05;
  /// Largest order with a nonzero norm.
  unsigned last_nonzero_order = 0;
  /// "PASS", "FAIL", "vanishing" or "vanishing beyond n".
  std::string verdict;
  bool acceptable() const { return verdict != "FAIL"; }
};

/// Fits the order norms (xi = 0) of `table`. When all b_m with m >= 1 vanish the verdict is
/// "vanishing"; when the norms vanish from some order on it is "vanishing beyond n" and no fit
/// is attempted. Otherwise at least three positive orders are required, and the verdict is
/// PASS iff norm_m <= (1 + slack) C^m (m!)^w for every order.
GrowthFit fit_growth(const NormTable& table, GrowthModel model, double slack = 0.05);

/// Exact table of the extremal recursion with unit constants, seeded with b_{0,xi} = [xi = 0].
class WorstCaseTable {
 public:
  std::size_t n = 1;
  unsigned max_order = 0;
  unsigned max_k = 0;
  /// levels[m] holds (xi, b_{m,xi}) for every |xi| <= max_k + 2(max_order - m).
  std::vector<std::vector<std::pair<MultiIndex, Rational>>> levels;

  const Rational& value(unsigned m, const MultiIndex& xi) const;
};

/// Rough operation count for worst_case_recursion; the guard compares against this.
double worst_case_cost(std::size_t n, unsigned M, unsigned Kmax);
inline constexpr double kWorstCaseBudget = 5e7;

/// Throws std::length_error when worst_case_cost exceeds kWorstCaseBudget.
WorstCaseTable worst_case_recursion(std::size_t n, unsigned M, unsigned Kmax);

struct LowerBoundRow {
  std::string kind;  // "factorial" for (2m-2+k)!, "factorial_sq" for (m!)^2 / 4^m
  unsigned m = 0;
  unsigned k = 0;
  Rational value;
  Rational bound;
  bool pass = false;
};

/// b_{m, k e_1} >= (2m-2+k)! for 1 <= m <= fact_m, k <= fact_k and b_{m,0} >= (m!)^2/4^m for
/// m <= sq_m, all in exact arithmetic.
std::vector<LowerBoundRow> worst_case_lower_bounds(const WorstCaseTable& table, unsigned fact_m, unsigned fact_k,
                                                   unsigned sq_m);
/// b_{m,0} is non-decreasing in m.
bool worst_case_monotone(const WorstCaseTable& table);
/// Columns m,k,value,lower_bound,ratio,kind.
std::string lower_bounds_csv(const std::vector<LowerBoundRow>& rows);

struct MinimizerReport {
  double C = 0;
  unsigned k = 0;
  unsigned argmin = 0;
  double log_min = 0;  // log of C^N (N!)^2 / k^N at the argmin
  double x0 = 0;       // sqrt(k/C)
  bool unimodal = false;
  bool near_x0 = false;
  /// With m0 = floor(x0) >= 1: min <= e^2 m0 e^{-2 m0} and min <= e^4 x0 e^{-2 x0}.
  bool bound_applicable = false;
  bool bound_ok = false;
  bool pass() const { return unimodal && near_x0 && (!bound_applicable || bound_ok); }
};

/// Scans N = 1..k of C^N (N!)^2 / k^N in the log domain.
MinimizerReport truncation_minimizer(double C, unsigned k);

struct LemmaReport {
  std::vector<double> deltas;
  unsigned max_N = 0;
  unsigned max_k = 0;
  std::size_t checked = 0;
  std::size_t violations = 0;
  double worst_margin = 0;  // min over the grid of log RHS - log LHS
  bool pass() const { return violations == 0; }
};

/// Checks k e^{-k delta} <= (2/delta)^{N+2} (N+1)! / k^{N+1} for every delta, 0 <= N <= max_N
/// and 1 <= k <= max_k, comparing logarithms with no slack.
LemmaReport exp_factorial_lemma_check(const std::vector<double>& deltas, unsigned max_N, unsigned max_k);
/// Single-point version returning (log LHS, log RHS).
std::pair<double, double> exp_factorial_lemma_sides(double delta, unsigned N, unsigned k);

nlohmann::json growth_fit_to_json(const GrowthFit& fit);
nlohmann::json lower_bounds_to_json(const std::vector<LowerBoundRow>& rows);
nlohmann::json minimizer_to_json(const MinimizerReport& r);
nlohmann::json lemma_to_json(const LemmaReport& r);

}  // namespace bergman
