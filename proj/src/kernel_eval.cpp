#include "bergman/kernel_eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "bergman/chsc.hpp"

namespace bergman {

namespace {

using CSpan = std::span<const std::complex<double>>;

std::complex<double> dot_conj(CSpan x, CSpan y) {
  std::complex<double> s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * std::conj(y[i]);
  return s;
}

nlohmann::json point_json(const Point& p) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : p) out.push_back({c.real(), c.imag()});
  return out;
}

}  // namespace

KernelModel series_kernel_model(const GeometryPack& geom, const CoefficientTable& table, double radius) {
  KernelModel m;
  m.kind = "series";
  m.n = geom.n;
  m.radius = radius;
  m.max_order = table.max_order;
  auto psi = std::make_shared<FloatSeries>(to_float(geom.psi));
  auto bs = std::make_shared<std::vector<FloatSeries>>();
  for (const auto& s : table.b) bs->push_back(to_float(s));
  RationalSeries flat_part(geom.psi.nvars(), geom.psi.trunc_degree());
  for (std::size_t i = 0; i < geom.n; ++i) {
    flat_part = flat_part + RationalSeries::variable(geom.psi.nvars(), geom.psi.trunc_degree(), i) *
                                RationalSeries::variable(geom.psi.nvars(), geom.psi.trunc_degree(), geom.n + i);
  }
  auto excess = std::make_shared<FloatSeries>(to_float(geom.psi - flat_part));
  m.psi = [psi](CSpan x, CSpan y) { return eval_polarized(*psi, x, y); };
  m.psi_excess = [excess](CSpan x, CSpan y) { return eval_polarized(*excess, x, y); };
  m.b = [bs](unsigned j, CSpan x, CSpan y) { return eval_polarized(bs->at(j), x, y); };
  return m;
}

KernelModel chsc_closed_form_model(std::size_t n, const Rational& c, unsigned M, double radius) {
  KernelModel m;
  m.kind = "closed_form";
  m.n = n;
  m.radius = radius;
  m.max_order = M;
  const double cd = to_double(c);
  m.psi = [cd](CSpan x, CSpan y) {
    const auto s = dot_conj(x, y);
    return cd == 0.0 ? s : std::log(1.0 + cd * s) / cd;
  };
  m.psi_excess = [cd](CSpan x, CSpan y) -> std::complex<double> {
    const auto s = dot_conj(x, y);
    if (cd == 0.0) return 0.0;
    // log(1 + w) - w summed as a series when |w| is small, so no leading digits cancel.
    const std::complex<double> w = cd * s;
    if (std::abs(w) < 0.5) {
      std::complex<double> term = w * w, sum = 0.0;
      for (int j = 2; j < 200 && std::abs(term) > 1e-300; ++j, term *= -w) {
        const std::complex<double> piece = term / static_cast<double>(j) * (j % 2 ? 1.0 : -1.0);
        sum += piece;
        if (std::abs(piece) <= 1e-18 * std::abs(sum)) break;
      }
      return sum / cd;
    }
    return (std::log(1.0 + w) - w) / cd;
  };
  auto b = std::make_shared<std::vector<double>>();
  for (const auto& q : chsc_b(n, c, M)) b->push_back(to_double(q));
  m.b = [b](unsigned j, CSpan, CSpan) { return std::complex<double>(b->at(j)); };
  return m;
}

TruncationChoice choose_N0(unsigned k, double C, unsigned max_order) {
  if (k < 1 || !(C > 0)) throw std::invalid_argument("choose_N0: need k >= 1 and C > 0");
  TruncationChoice t;
  t.unclamped = static_cast<unsigned>(std::floor(std::sqrt(static_cast<double>(k) / C)));
  t.N = std::min(t.unclamped, max_order);
  t.clamped = t.N != t.unclamped;
  return t;
}

KernelReport eval_KN(const KernelModel& model, unsigned k, unsigned N, CSpan x, CSpan y) {
  if (x.size() != model.n || y.size() != model.n) throw std::invalid_argument("eval_KN: point dimension mismatch");
  if (N > model.max_order) throw std::invalid_argument("eval_KN: N exceeds the available coefficient order");
  if (k < 1) throw std::invalid_argument("eval_KN: k must be positive");
  for (std::size_t i = 0; i < model.n; ++i) {
    if (std::abs(x[i]) > model.radius || std::abs(y[i]) > model.radius) {
      throw std::out_of_range("eval_KN: point outside the evaluation radius " + std::to_string(model.radius));
    }
  }
  const double kd = k;
  const double n = static_cast<double>(model.n);
  KernelReport r;
  r.k = k;
  r.N = N;
  r.x.assign(x.begin(), x.end());
  r.y.assign(y.begin(), y.end());
  r.psi_val = model.psi(x, y);
  std::complex<double> amp = 1.0;
  double kpow = 1.0;
  for (unsigned j = 1; j <= N; ++j) {
    kpow *= kd;
    amp += model.b(j, x, y) / kpow;
  }
  r.amplitude_val = amp;
  const double phi_x = model.psi(x, x).real();
  const double phi_y = model.psi(y, y).real();
  r.diastasis = phi_x + phi_y - 2.0 * r.psi_val.real();

  // Everything stays in the log domain until the end; e^{k psi} overflows quickly.
  const double log_k_over_pi = std::log(kd / std::numbers::pi);
  r.log_K = n * log_k_over_pi + kd * r.psi_val + std::log(amp);
  r.K_val = std::exp(r.log_K);
  const double log_weighted = r.log_K.real() - kd * (phi_x + phi_y) / 2.0;
  r.K_weighted = std::exp(log_weighted);
  r.log_residual = std::log(std::abs(amp)) / kd;
  return r;
}

double fit_log_slope(const std::vector<unsigned>& ks, const std::vector<double>& r) {
  if (ks.size() != r.size() || ks.size() < 2) throw std::invalid_argument("fit_log_slope: need at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double lx = std::log(static_cast<double>(ks[i]));
    const double ly = std::log(std::abs(r[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

namespace {

void finish_fit(SlopeFit& fit) {
  fit.vanishing = std::all_of(fit.residuals.begin(), fit.residuals.end(), [](double v) { return v == 0.0; });
  if (!fit.vanishing) {
    if (std::any_of(fit.residuals.begin(), fit.residuals.end(), [](double v) { return v == 0.0; })) {
      // A zero among nonzero residuals cannot be placed on a log scale.
      fit.slope = std::numeric_limits<double>::infinity();
    } else {
      fit.slope = fit_log_slope(fit.ks, fit.residuals);
    }
  }
}

void finish_report(DecayReport& rep) {
  rep.worst_slope = -std::numeric_limits<double>::infinity();
  rep.pass = !rep.fits.empty();
  for (const auto& f : rep.fits) {
    if (f.vanishing) continue;
    rep.worst_slope = std::max(rep.worst_slope, f.slope);
    if (!(f.slope <= rep.threshold)) rep.pass = false;
  }
}

}  // namespace

DecayReport log_asymptotic_check(const KernelModel& model, const std::vector<unsigned>& k_grid,
                                 const std::vector<std::pair<Point, Point>>& pairs, double C, double delta,
                                 double threshold) {
  if (k_grid.size() < 2) throw std::invalid_argument("log_asymptotic_check: need at least two k values");
  DecayReport rep;
  rep.check = "log_asymptotic";
  rep.threshold = threshold;
  for (const auto& [x, y] : pairs) {
    SlopeFit fit;
    fit.x = x;
    fit.y = y;
    bool admissible = true;
    for (unsigned k : k_grid) {
      const unsigned N = choose_N0(k, C, model.max_order).N;
      const auto r = eval_KN(model, k, N, x, y);
      if (r.diastasis > delta / (2.0 * std::sqrt(static_cast<double>(k)))) admissible = false;
      fit.ks.push_back(k);
      fit.Ns.push_back(N);
      fit.residuals.push_back(r.log_residual);
    }
    if (!admissible) {
      ++rep.skipped_pairs;
      continue;
    }
    finish_fit(fit);
    rep.fits.push_back(std::move(fit));
  }
  finish_report(rep);
  return rep;
}

DecayReport scaling_check(const KernelModel& model, const std::vector<unsigned>& k_grid, const Point& u,
                          const Point& v, double C, double threshold) {
  if (k_grid.size() < 2) throw std::invalid_argument("scaling_check: need at least two k values");
  if (u.size() != model.n || v.size() != model.n) throw std::invalid_argument("scaling_check: dimension mismatch");
  DecayReport rep;
  rep.check = "scaling";
  rep.threshold = threshold;
  SlopeFit fit;
  fit.x = u;
  fit.y = v;
  for (unsigned k : k_grid) {
    const double kd = k;
    const double shrink = std::pow(kd, -0.25);
    Point x(u), y(v);
    for (auto& c : x) c *= shrink;
    for (auto& c : y) c *= shrink;
    const unsigned N = choose_N0(k, C, model.max_order).N;
    const auto r = eval_KN(model, k, N, x, y);
    // With x = u k^{-1/4}: k^{-1/2} log|K|_{h^k} = n log(k/pi)/k^{1/2} - k^{1/2} D/2 + log|amp|/k^{1/2} and
    // k^{1/2} |x - y|^2 = |u - v|^2, so the residual is -k^{1/2} (D - |x-y|^2)/2 + log|amp|/k^{1/2}.
    const double excess = (model.psi_excess(x, x) + model.psi_excess(y, y) - 2.0 * model.psi_excess(x, y)).real();
    const double residual = -std::sqrt(kd) * excess / 2.0 + std::log(std::abs(r.amplitude_val)) / std::sqrt(kd);
    fit.ks.push_back(k);
    fit.Ns.push_back(N);
    fit.residuals.push_back(residual);
  }
  finish_fit(fit);
  rep.fits.push_back(std::move(fit));
  finish_report(rep);
  return rep;
}

nlohmann::json report_to_json(const KernelReport& r) {
  auto cj = [](std::complex<double> c) { return nlohmann::json::array({c.real(), c.imag()}); };
  return {{"k", r.k},
          {"N", r.N},
          {"x", point_json(r.x)},
          {"y", point_json(r.y)},
          {"psi", cj(r.psi_val)},
          {"amplitude", cj(r.amplitude_val)},
          {"log_K", cj(r.log_K)},
          {"K", cj(r.K_val)},
          {"K_weighted", r.K_weighted},
          {"diastasis", r.diastasis},
          {"log_residual", r.log_residual}};
}

nlohmann::json decay_to_json(const DecayReport& r) {
  nlohmann::json fits = nlohmann::json::array();
  for (const auto& f : r.fits) {
    fits.push_back({{"x", point_json(f.x)},
                    {"y", point_json(f.y)},
                    {"k", f.ks},
                    {"N", f.Ns},
                    {"residual", f.residuals},
                    {"slope", f.vanishing ? nlohmann::json(nullptr) : nlohmann::json(f.slope)},
                    {"vanishing", f.vanishing}});
  }
  return {{"check", r.check},
          {"threshold", r.threshold},
          {"worst_slope", std::isfinite(r.worst_slope) ? nlohmann::json(r.worst_slope) : nlohmann::json(nullptr)},
          {"skipped_pairs", r.skipped_pairs},
          {"verdict", r.pass ? "PASS" : "FAIL"},
          {"fits", fits}};
}

}  // namespace bergman
