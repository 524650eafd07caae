#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bergman/coefficients.hpp"
#include "bergman/geometry.hpp"

namespace bergman {

/// Numeric ingredients of K_k^(N)(x,y) = (k/pi)^n e^{k psi(x, conj y)} (1 + sum_j b_j(x, conj y)/k^j).
/// Both callbacks receive x and y (the conjugation happens inside), so closed forms and
/// truncated series plug in the same way.
struct KernelModel {
  std::string kind;  // "series" or "closed_form"
  std::size_t n = 1;
  double radius = 0;
  unsigned max_order = 0;
  std::function<std::complex<double>(std::span<const std::complex<double>>, std::span<const std::complex<double>>)> psi;
  std::function<std::complex<double>(unsigned, std::span<const std::complex<double>>,
                                     std::span<const std::complex<double>>)>
      b;
  /// psi minus its flat part x.conj y; lets residuals be formed without cancelling large terms.
  std::function<std::complex<double>(std::span<const std::complex<double>>, std::span<const std::complex<double>>)>
      psi_excess;
};

KernelModel series_kernel_model(const GeometryPack& geom, const CoefficientTable& table, double radius);
/// psi = (1/c) log(1 + c x.conj y) (x.conj y when c = 0) with the constant amplitudes b_m.
KernelModel chsc_closed_form_model(std::size_t n, const Rational& c, unsigned M, double radius);

struct TruncationChoice {
  unsigned N = 0;
  unsigned unclamped = 0;
  bool clamped = false;
};
/// floor(sqrt(k/C)), clamped to max_order.
TruncationChoice choose_N0(unsigned k, double C, unsigned max_order);

struct KernelReport {
  unsigned k = 0;
  unsigned N = 0;
  Point x, y;
  std::complex<double> psi_val;
  std::complex<double> amplitude_val;
  std::complex<double> log_K;  // principal value of log K
  std::complex<double> K_val;
  double K_weighted = 0;  // |K| e^{-k(phi(x)+phi(y))/2}
  double diastasis = 0;
  /// (1/k) log K_weighted + D/2 - n log k / k + n log pi / k. The first term contains
  /// n log(k/pi)/k - D/2 exactly, so the value is assembled as log|amplitude| / k.
  double log_residual = 0;
};

/// Throws std::out_of_range when a coordinate lies outside the model radius.
KernelReport eval_KN(const KernelModel& model, unsigned k, unsigned N, std::span<const std::complex<double>> x,
                     std::span<const std::complex<double>> y);

struct SlopeFit {
  Point x, y;
  std::vector<unsigned> ks;
  std::vector<unsigned> Ns;
  std::vector<double> residuals;
  double slope = 0;
  bool vanishing = false;  // every residual is exactly zero
};

struct DecayReport {
  std::string check;  // "log_asymptotic" or "scaling"
  double threshold = 0;
  double worst_slope = 0;
  bool pass = false;
  std::vector<SlopeFit> fits;
  std::size_t skipped_pairs = 0;  // pairs outside the admissible window
};

/// Least-squares slope of log|r| against log k.
double fit_log_slope(const std::vector<unsigned>& ks, const std::vector<double>& r);

/// For each admissible pair (D(x,y) <= delta k^{-1/2} / 2 for every k on the grid), fits the
/// decay of the residual r(k). N follows choose_N0(k, C). Passes iff every slope is at most
/// `threshold` or the residuals vanish identically.
DecayReport log_asymptotic_check(const KernelModel& model, const std::vector<unsigned>& k_grid,
                                 const std::vector<std::pair<Point, Point>>& pairs, double C, double delta,
                                 double threshold);

/// Evaluates at x = u k^{-1/4}, y = v k^{-1/4} and fits the decay of
///   k^{-1/2} log |K|_{h^k} + |u - v|^2 / 2 - n log(k/pi) / k^{1/2}.
DecayReport scaling_check(const KernelModel& model, const std::vector<unsigned>& k_grid, const Point& u,
                          const Point& v, double C, double threshold);

nlohmann::json report_to_json(const KernelReport& r);
nlohmann::json decay_to_json(const DecayReport& r);

}  // namespace bergman
