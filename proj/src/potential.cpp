#include "bergman/potential.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <regex>

#include "bergman/hash.hpp"
#include "bergman/series_io.hpp"
#include "bergman/truncated_series.hpp"

namespace bergman {

using nlohmann::json;

Rational PotentialSpec::coeff(const MultiIndex& alpha, const MultiIndex& beta) const {
  for (const auto& t : terms) {
    if (t.alpha == alpha && t.beta == beta) return t.coeff;
  }
  return Rational(0);
}

std::vector<Rational> PotentialSpec::hessian() const {
  std::vector<Rational> h(n * n, Rational(0));
  for (const auto& t : terms) {
    if (t.alpha.total() != 1 || t.beta.total() != 1) continue;
    std::size_t i = 0, j = 0;
    while (t.alpha[i] == 0) ++i;
    while (t.beta[j] == 0) ++j;
    h[i * n + j] += t.coeff;
  }
  return h;
}

double PotentialSpec::phi(std::span<const std::complex<double>> x) const {
  if (x.size() != n) throw SpecError("point", "dimension does not match n");
  std::complex<double> sum = 0.0;
  for (const auto& t : terms) {
    std::complex<double> m = to_double(t.coeff);
    for (std::size_t i = 0; i < n; ++i) {
      if (t.alpha[i]) m *= std::pow(x[i], static_cast<int>(t.alpha[i]));
      if (t.beta[i]) m *= std::pow(std::conj(x[i]), static_cast<int>(t.beta[i]));
    }
    sum += m;
  }
  return sum.real();
}

namespace {

std::string index_label(const PotentialTerm& t) { return "terms[" + t.alpha.to_string() + "," + t.beta.to_string() + "]"; }

/// Leading principal minors via exact Gaussian elimination without pivoting.
std::vector<Rational> leading_minors(std::vector<Rational> a, std::size_t n) {
  std::vector<Rational> minors;
  Rational det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (sgn(a[k * n + k]) == 0) {
      // A zero pivot means this leading minor vanishes; positivity already fails here.
      minors.push_back(Rational(0));
      return minors;
    }
    det *= a[k * n + k];
    minors.push_back(det);
    for (std::size_t i = k + 1; i < n; ++i) {
      const Rational f = a[i * n + k] / a[k * n + k];
      for (std::size_t j = k; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
    }
  }
  return minors;
}

}  // namespace

void validate(const PotentialSpec& spec) {
  // Three blocks of n variables must fit the packed monomial keys.
  const std::size_t max_n = detail::kMaxVars / 3;
  if (spec.n < 1 || spec.n > max_n) {
    throw SpecError("n", "dimension must be between 1 and " + std::to_string(max_n));
  }
  if (spec.trunc_degree < 2 || spec.trunc_degree > detail::kMaxDegree) {
    throw SpecError("trunc_degree", "must be between 2 and " + std::to_string(detail::kMaxDegree));
  }
  if (!(spec.eval_radius > 0.0) || !std::isfinite(spec.eval_radius)) {
    throw SpecError("eval_radius", "must be a positive finite number");
  }

  std::map<std::pair<std::vector<unsigned>, std::vector<unsigned>>, Rational> table;
  for (const auto& t : spec.terms) {
    if (t.alpha.size() != spec.n || t.beta.size() != spec.n) {
      throw SpecError(index_label(t), "alpha and beta must have length n = " + std::to_string(spec.n));
    }
    if (t.alpha.total() + t.beta.total() > spec.trunc_degree) {
      throw SpecError(index_label(t), "total degree exceeds trunc_degree");
    }
    auto [it, inserted] = table.emplace(std::make_pair(t.alpha.entries(), t.beta.entries()), t.coeff);
    if (!inserted) throw SpecError(index_label(t), "duplicate term");
  }

  for (const auto& t : spec.terms) {
    const unsigned deg = t.alpha.total() + t.beta.total();
    if (sgn(t.coeff) == 0) continue;
    if (deg == 0) throw SpecError("terms[c00]", "normalization requires phi(0) = 0");
    if (deg == 1) {
      throw SpecError(index_label(t), "linear terms are not supported; drop them (they are pluriharmonic)");
    }
    auto it = table.find({t.beta.entries(), t.alpha.entries()});
    if (it == table.end() || it->second != t.coeff) {
      throw SpecError(index_label(t), "Hermitian symmetry c_{alpha beta} = c_{beta alpha} is violated");
    }
  }

  const auto minors = leading_minors(spec.hessian(), spec.n);
  for (std::size_t k = 0; k < minors.size(); ++k) {
    if (sgn(minors[k]) <= 0) {
      throw SpecError("hessian", "leading principal minor of order " + std::to_string(k + 1) +
                                     " is not positive; the Hessian must be positive definite");
    }
  }
}

double hessian_min_eigenvalue(const PotentialSpec& spec) {
  const auto h = spec.hessian();
  Eigen::MatrixXd m(spec.n, spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    for (std::size_t j = 0; j < spec.n; ++j) m(i, j) = to_double(h[i * spec.n + j]);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

namespace {

/// Adds coeff * (sum_i x_i conj(x_i))^k, expanded by the multinomial theorem.
void add_power_of_norm(std::vector<PotentialTerm>& terms, std::size_t n, unsigned k, const Rational& coeff) {
  for (const auto& gamma : indices_of_degree(n, k)) {
    Integer multinomial = factorial(k);
    for (std::size_t i = 0; i < n; ++i) multinomial /= factorial(gamma[i]);
    terms.push_back({gamma, gamma, coeff * Rational(multinomial)});
  }
}

std::string rational_label(const Rational& q) {
  return q.get_den() == 1 ? numerator_string(q) : numerator_string(q) + "/" + denominator_string(q);
}

}  // namespace

PotentialSpec flat_potential(std::size_t n, unsigned trunc_degree) {
  PotentialSpec spec;
  spec.name = "flat(" + std::to_string(n) + ")";
  spec.n = n;
  spec.trunc_degree = trunc_degree;
  add_power_of_norm(spec.terms, n, 1, Rational(1));
  return spec;
}

PotentialSpec chsc_potential(std::size_t n, const Rational& c, unsigned trunc_degree) {
  PotentialSpec spec;
  spec.name = "chsc(" + std::to_string(n) + "," + rational_label(c) + ")";
  spec.n = n;
  spec.trunc_degree = trunc_degree;
  // (1/c) log(1 + c s) = sum_k (-1)^{k+1} c^{k-1} s^k / k, with s = |x|^2.
  Rational cpow = 1;
  for (unsigned k = 1; 2 * k <= trunc_degree; ++k) {
    if (sgn(cpow) == 0) break;
    Rational coeff = cpow / Rational(static_cast<long>(k));
    if (k % 2 == 0) coeff = -coeff;
    add_power_of_norm(spec.terms, n, k, coeff);
    cpow *= c;
  }
  return spec;
}

PotentialSpec quartic_potential(std::size_t n, const Rational& t, unsigned trunc_degree) {
  PotentialSpec spec;
  spec.name = "quartic(" + std::to_string(n) + "," + rational_label(t) + ")";
  spec.n = n;
  spec.trunc_degree = trunc_degree;
  add_power_of_norm(spec.terms, n, 1, Rational(1));
  if (trunc_degree >= 4 && sgn(t) != 0) add_power_of_norm(spec.terms, n, 2, t);
  return spec;
}

PotentialSpec preset_potential(const std::string& preset, unsigned trunc_degree) {
  static const std::regex flat_re(R"(\s*flat\(\s*(\d+)\s*\)\s*)");
  static const std::regex param_re(R"(\s*(chsc|quartic)\(\s*(\d+)\s*,\s*([-+]?[0-9./]+)\s*\)\s*)");
  std::smatch m;
  if (std::regex_match(preset, m, flat_re)) return flat_potential(std::stoul(m[1]), trunc_degree);
  if (std::regex_match(preset, m, param_re)) {
    const std::size_t n = std::stoul(m[2]);
    Rational p;
    try {
      p = parse_rational(m[3]);
    } catch (const std::exception& e) {
      throw SpecError("preset", std::string("bad parameter: ") + e.what());
    }
    return m[1] == "chsc" ? chsc_potential(n, p, trunc_degree) : quartic_potential(n, p, trunc_degree);
  }
  throw SpecError("preset", "unknown preset '" + preset + "' (expected flat(n), chsc(n,c) or quartic(n,t))");
}

json potential_to_json(const PotentialSpec& spec) {
  json terms = json::array();
  for (const auto& t : spec.terms) {
    terms.push_back({{"alpha", t.alpha.entries()},
                     {"beta", t.beta.entries()},
                     {"num", numerator_string(t.coeff)},
                     {"den", denominator_string(t.coeff)}});
  }
  return {{"name", spec.name},
          {"n", spec.n},
          {"trunc_degree", spec.trunc_degree},
          {"eval_radius", spec.eval_radius},
          {"terms", terms}};
}

PotentialSpec potential_from_json(const json& j) {
  PotentialSpec spec;
  try {
    spec.name = j.value("name", std::string("custom"));
    spec.n = j.at("n").get<std::size_t>();
    spec.trunc_degree = j.at("trunc_degree").get<unsigned>();
    spec.eval_radius = j.value("eval_radius", spec.eval_radius);
    for (const auto& t : j.at("terms")) {
      PotentialTerm term{MultiIndex(t.at("alpha").get<std::vector<unsigned>>()),
                         MultiIndex(t.at("beta").get<std::vector<unsigned>>()),
                         rational_from_json(t.at("num"), t.value("den", json(1)))};
      spec.terms.push_back(std::move(term));
    }
  } catch (const json::exception& e) {
    throw SpecError("file", std::string("malformed potential record: ") + e.what());
  } catch (const SeriesError& e) {
    throw SpecError("terms", e.what());
  }
  return spec;
}

std::string potential_hash(const PotentialSpec& spec) { return fnv1a_hex(potential_to_json(spec).dump()); }

}  // namespace bergman
