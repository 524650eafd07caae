#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bergman/multi_index.hpp"
#include "bergman/rational.hpp"

namespace bergman {

class SeriesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Multivariate formal power series truncated at total degree D.
///
/// Coefficients are stored sparsely in graded-lexicographic order (total degree first,
/// then lexicographic on exponents); zero coefficients are never stored. Every operation
/// returns a value in canonical form, so two series are equal iff their term lists are.
template <typename S>
class TruncatedSeries {
 public:
  struct Term {
    detail::MonoKey key;
    unsigned degree;
    S coeff;
  };

  TruncatedSeries() = default;
  TruncatedSeries(std::size_t nvars, unsigned trunc_degree) : nvars_(nvars), trunc_(trunc_degree) {
    if (nvars == 0 || nvars > detail::kMaxVars) {
      throw SeriesError("series must have between 1 and " + std::to_string(detail::kMaxVars) + " variables");
    }
    if (trunc_degree > detail::kMaxDegree) throw SeriesError("truncation degree exceeds supported range");
  }

  static TruncatedSeries constant(std::size_t nvars, unsigned trunc_degree, const S& value) {
    TruncatedSeries s(nvars, trunc_degree);
    if (!ScalarTraits<S>::is_zero(value)) s.terms_.push_back({0, 0, value});
    return s;
  }

  static TruncatedSeries variable(std::size_t nvars, unsigned trunc_degree, std::size_t var, const S& coeff = S(1)) {
    TruncatedSeries s(nvars, trunc_degree);
    if (var >= nvars) throw SeriesError("variable index out of range");
    if (trunc_degree >= 1 && !ScalarTraits<S>::is_zero(coeff)) s.terms_.push_back({detail::unit_key(var), 1, coeff});
    return s;
  }

  /// Builds a series from (index, coefficient) pairs; repeated indices are summed and
  /// entries above the truncation degree are dropped.
  static TruncatedSeries from_terms(std::size_t nvars, unsigned trunc_degree,
                                    const std::vector<std::pair<MultiIndex, S>>& entries);

  std::size_t nvars() const { return nvars_; }
  unsigned trunc_degree() const { return trunc_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  S coeff(const MultiIndex& alpha) const;
  S constant_term() const { return (!terms_.empty() && terms_.front().degree == 0) ? terms_.front().coeff : S(0); }
  /// Largest degree of a stored term (0 for the zero series).
  unsigned max_degree() const { return terms_.empty() ? 0 : terms_.back().degree; }

  /// Re-truncate at a lower degree `d <= trunc_degree()`.
  TruncatedSeries truncated(unsigned d) const;
  /// Declares a larger truncation degree without adding terms. Only sound when the caller
  /// knows the missing coefficients cannot influence the quantity being computed.
  TruncatedSeries with_trunc_degree_unchecked(unsigned d) const;
  TruncatedSeries homogeneous_part(unsigned d) const;

  TruncatedSeries operator-() const;
  TruncatedSeries scaled(const S& factor) const;

  bool operator==(const TruncatedSeries& other) const;
  bool operator!=(const TruncatedSeries& other) const { return !(*this == other); }

  /// Terms in canonical order; used by accumulators.
  static bool term_less(const Term& a, const Term& b) {
    return a.degree != b.degree ? a.degree < b.degree : a.key < b.key;
  }

 private:
  template <typename T>
  friend class SeriesAccumulator;

  std::size_t nvars_ = 0;
  unsigned trunc_ = 0;
  std::vector<Term> terms_;
};

using RationalSeries = TruncatedSeries<Rational>;
using FloatSeries = TruncatedSeries<double>;

/// Hash-map accumulator that emits a canonical series.
template <typename S>
class SeriesAccumulator {
 public:
  SeriesAccumulator(std::size_t nvars, unsigned trunc_degree) : nvars_(nvars), trunc_(trunc_degree) {}

  void reserve(std::size_t n) { acc_.reserve(n); }

  void add(detail::MonoKey key, unsigned degree, const S& c) {
    if (degree > trunc_) return;
    auto [it, inserted] = acc_.try_emplace(key, Slot{c, degree});
    if (!inserted) it->second.coeff += c;
  }

  void add_product(detail::MonoKey key, unsigned degree, const S& a, const S& b) {
    if (degree > trunc_) return;
    auto it = acc_.find(key);
    if (it == acc_.end()) {
      acc_.emplace(key, Slot{S(a * b), degree});
    } else {
      it->second.coeff += a * b;
    }
  }

  void add_series(const TruncatedSeries<S>& s) {
    for (const auto& t : s.terms()) add(t.key, t.degree, t.coeff);
  }

  TruncatedSeries<S> finish() {
    TruncatedSeries<S> out(nvars_, trunc_);
    out.terms_.reserve(acc_.size());
    for (auto& [key, slot] : acc_) {
      if (!ScalarTraits<S>::is_zero(slot.coeff)) out.terms_.push_back({key, slot.degree, std::move(slot.coeff)});
    }
    std::sort(out.terms_.begin(), out.terms_.end(), TruncatedSeries<S>::term_less);
    acc_.clear();
    return out;
  }

 private:
  struct Slot {
    S coeff;
    unsigned degree;
  };

  std::size_t nvars_;
  unsigned trunc_;
  std::unordered_map<detail::MonoKey, Slot> acc_;
};

template <typename S>
TruncatedSeries<S> TruncatedSeries<S>::from_terms(std::size_t nvars, unsigned trunc_degree,
                                                  const std::vector<std::pair<MultiIndex, S>>& entries) {
  const TruncatedSeries validated(nvars, trunc_degree);
  SeriesAccumulator<S> acc(validated.nvars(), validated.trunc_degree());
  for (const auto& [alpha, c] : entries) {
    if (alpha.size() != nvars) throw SeriesError("multi-index length does not match nvars");
    acc.add(detail::pack(alpha), alpha.total(), c);
  }
  return acc.finish();
}

template <typename S>
S TruncatedSeries<S>::coeff(const MultiIndex& alpha) const {
  if (alpha.size() != nvars_) throw SeriesError("multi-index length does not match nvars");
  const Term probe{detail::pack(alpha), alpha.total(), S(0)};
  auto it = std::lower_bound(terms_.begin(), terms_.end(), probe, term_less);
  if (it != terms_.end() && it->key == probe.key) return it->coeff;
  return S(0);
}

template <typename S>
TruncatedSeries<S> TruncatedSeries<S>::truncated(unsigned d) const {
  if (d > trunc_) {
    throw SeriesError("cannot raise truncation degree from " + std::to_string(trunc_) + " to " + std::to_string(d));
  }
  TruncatedSeries out(nvars_, d);
  for (const auto& t : terms_) {
    if (t.degree > d) break;
    out.terms_.push_back(t);
  }
  return out;
}

template <typename S>
TruncatedSeries<S> TruncatedSeries<S>::with_trunc_degree_unchecked(unsigned d) const {
  TruncatedSeries out = d < trunc_ ? truncated(d) : *this;
  out.trunc_ = d;
  return out;
}

template <typename S>
TruncatedSeries<S> TruncatedSeries<S>::homogeneous_part(unsigned d) const {
  TruncatedSeries out(nvars_, trunc_);
  for (const auto& t : terms_) {
    if (t.degree == d) out.terms_.push_back(t);
  }
  return out;
}

template <typename S>
TruncatedSeries<S> TruncatedSeries<S>::operator-() const {
  TruncatedSeries out(*this);
  for (auto& t : out.terms_) t.coeff = -t.coeff;
  return out;
}

template <typename S>
TruncatedSeries<S> TruncatedSeries<S>::scaled(const S& factor) const {
  TruncatedSeries out(nvars_, trunc_);
  if (ScalarTraits<S>::is_zero(factor)) return out;
  out.terms_.reserve(terms_.size());
  for (const auto& t : terms_) {
    S c = t.coeff * factor;
    if (!ScalarTraits<S>::is_zero(c)) out.terms_.push_back({t.key, t.degree, std::move(c)});
  }
  return out;
}

template <typename S>
bool TruncatedSeries<S>::operator==(const TruncatedSeries& other) const {
  if (nvars_ != other.nvars_ || trunc_ != other.trunc_ || terms_.size() != other.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].key != other.terms_[i].key || !(terms_[i].coeff == other.terms_[i].coeff)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Ring operations

namespace detail {
template <typename S>
void require_compatible(const TruncatedSeries<S>& a, const TruncatedSeries<S>& b, const char* op) {
  if (a.nvars() != b.nvars() || a.trunc_degree() != b.trunc_degree()) {
    throw SeriesError(std::string(op) + ": operands differ (nvars " + std::to_string(a.nvars()) + " vs " +
                      std::to_string(b.nvars()) + ", degree " + std::to_string(a.trunc_degree()) + " vs " +
                      std::to_string(b.trunc_degree()) + ")");
  }
}
}  // namespace detail

template <typename S>
TruncatedSeries<S> add(const TruncatedSeries<S>& a, const TruncatedSeries<S>& b) {
  detail::require_compatible(a, b, "add");
  SeriesAccumulator<S> acc(a.nvars(), a.trunc_degree());
  acc.reserve(a.size() + b.size());
  acc.add_series(a);
  acc.add_series(b);
  return acc.finish();
}

template <typename S>
TruncatedSeries<S> sub(const TruncatedSeries<S>& a, const TruncatedSeries<S>& b) {
  return add(a, -b);
}

/// Cauchy product truncated at the common degree.
template <typename S>
TruncatedSeries<S> mul(const TruncatedSeries<S>& a, const TruncatedSeries<S>& b) {
  detail::require_compatible(a, b, "mul");
  const unsigned d = a.trunc_degree();
  SeriesAccumulator<S> acc(a.nvars(), d);
  const auto& bt = b.terms();
  for (const auto& ta : a.terms()) {
    const unsigned room = d - ta.degree;
    for (const auto& tb : bt) {
      if (tb.degree > room) break;
      acc.add_product(ta.key + tb.key, ta.degree + tb.degree, ta.coeff, tb.coeff);
    }
  }
  return acc.finish();
}

template <typename S>
TruncatedSeries<S> operator+(const TruncatedSeries<S>& a, const TruncatedSeries<S>& b) { return add(a, b); }
template <typename S>
TruncatedSeries<S> operator-(const TruncatedSeries<S>& a, const TruncatedSeries<S>& b) { return sub(a, b); }
template <typename S>
TruncatedSeries<S> operator*(const TruncatedSeries<S>& a, const TruncatedSeries<S>& b) { return mul(a, b); }

/// Multiplicative inverse, solved one homogeneous degree at a time.
template <typename S>
TruncatedSeries<S> invert(const TruncatedSeries<S>& a) {
  const S c0 = a.constant_term();
  if (ScalarTraits<S>::is_zero(c0)) throw SeriesError("invert: constant term is zero");
  const unsigned d = a.trunc_degree();
  const S inv_c0 = S(1) / c0;
  std::vector<TruncatedSeries<S>> parts;
  parts.reserve(d + 1);
  for (unsigned j = 0; j <= d; ++j) parts.push_back(a.homogeneous_part(j));

  std::vector<TruncatedSeries<S>> inv;
  inv.reserve(d + 1);
  inv.push_back(TruncatedSeries<S>::constant(a.nvars(), d, inv_c0));
  for (unsigned k = 1; k <= d; ++k) {
    SeriesAccumulator<S> acc(a.nvars(), d);
    for (unsigned j = 1; j <= k; ++j) {
      if (parts[j].is_zero() || inv[k - j].is_zero()) continue;
      for (const auto& ta : parts[j].terms()) {
        for (const auto& tb : inv[k - j].terms()) acc.add_product(ta.key + tb.key, k, ta.coeff, tb.coeff);
      }
    }
    inv.push_back(acc.finish().scaled(-inv_c0));
  }
  SeriesAccumulator<S> total(a.nvars(), d);
  for (const auto& p : inv) total.add_series(p);
  return total.finish();
}

/// Formal partial derivative D^xi; the result is truncated at max(D - |xi|, 0).
template <typename S>
TruncatedSeries<S> diff(const TruncatedSeries<S>& f, const MultiIndex& xi) {
  if (xi.size() != f.nvars()) throw SeriesError("diff: multi-index length does not match nvars");
  const unsigned order = xi.total();
  const unsigned d = f.trunc_degree() >= order ? f.trunc_degree() - order : 0;
  const detail::MonoKey xi_key = detail::pack(xi);
  SeriesAccumulator<S> acc(f.nvars(), d);
  for (const auto& t : f.terms()) {
    if (t.degree < order || t.degree - order > d) continue;
    S c = t.coeff;
    bool ok = true;
    for (std::size_t i = 0; i < f.nvars() && ok; ++i) {
      const unsigned e = detail::exponent_of(t.key, i);
      if (e < xi[i]) {
        ok = false;
        break;
      }
      for (unsigned r = 0; r < xi[i]; ++r) c *= S(static_cast<long>(e - r));
    }
    if (ok) acc.add(t.key - xi_key, t.degree - order, c);
  }
  return acc.finish();
}

/// Partial derivative in a single variable.
template <typename S>
TruncatedSeries<S> diff_var(const TruncatedSeries<S>& f, std::size_t var, unsigned order = 1) {
  return diff(f, MultiIndex::unit(f.nvars(), var, order));
}

/// Renames variables: variable i of `f` becomes variable target[i] of a series in
/// `out_nvars` variables. Several variables may map to the same target (block merge).
template <typename S>
TruncatedSeries<S> remap(const TruncatedSeries<S>& f, const std::vector<std::size_t>& target, std::size_t out_nvars) {
  if (target.size() != f.nvars()) throw SeriesError("remap: target map length does not match nvars");
  for (auto t : target) {
    if (t >= out_nvars) throw SeriesError("remap: target variable out of range");
  }
  SeriesAccumulator<S> acc(out_nvars, f.trunc_degree());
  acc.reserve(f.size());
  for (const auto& t : f.terms()) {
    detail::MonoKey key = 0;
    for (std::size_t i = 0; i < f.nvars(); ++i) {
      const unsigned e = detail::exponent_of(t.key, i);
      if (e) key += detail::unit_key(target[i], e);
    }
    acc.add(key, t.degree, t.coeff);
  }
  return acc.finish();
}

template <typename S>
FloatSeries to_float(const TruncatedSeries<S>& f) {
  std::vector<std::pair<MultiIndex, double>> entries;
  entries.reserve(f.size());
  for (const auto& t : f.terms()) entries.emplace_back(detail::unpack(t.key, f.nvars()), ScalarTraits<S>::to_double(t.coeff));
  return FloatSeries::from_terms(f.nvars(), f.trunc_degree(), entries);
}

template <typename S>
std::vector<std::pair<MultiIndex, S>> term_list(const TruncatedSeries<S>& f) {
  std::vector<std::pair<MultiIndex, S>> out;
  out.reserve(f.size());
  for (const auto& t : f.terms()) out.emplace_back(detail::unpack(t.key, f.nvars()), t.coeff);
  return out;
}

/// Numeric evaluation of the truncated polynomial at a complex point. Terms are summed in
/// the stored graded-lexicographic order, so the result is reproducible bit for bit.
template <typename S>
std::complex<double> eval(const TruncatedSeries<S>& f, std::span<const std::complex<double>> point) {
  if (point.size() != f.nvars()) throw SeriesError("eval: point dimension does not match nvars");
  const unsigned dmax = f.max_degree();
  std::vector<std::vector<std::complex<double>>> powers(f.nvars());
  for (std::size_t i = 0; i < f.nvars(); ++i) {
    powers[i].resize(dmax + 1);
    powers[i][0] = 1.0;
    for (unsigned e = 1; e <= dmax; ++e) powers[i][e] = powers[i][e - 1] * point[i];
  }
  std::complex<double> sum = 0.0;
  for (const auto& t : f.terms()) {
    std::complex<double> m = ScalarTraits<S>::to_double(t.coeff);
    for (std::size_t i = 0; i < f.nvars(); ++i) {
      const unsigned e = detail::exponent_of(t.key, i);
      if (e) m *= powers[i][e];
    }
    sum += m;
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Composition

/// Reusable substitution x_i -> args[i]. Powers of the substituted arguments are cached, so
/// applying the same substitution to many series only pays for the powers once. Arguments
/// that are plain variables (a single degree-one term with coefficient one) are handled as
/// renames and never enter the power cache.
template <typename S>
class Substitution {
 public:
  explicit Substitution(std::vector<TruncatedSeries<S>> args, int degree_cap = -1);

  std::size_t arity() const { return args_.size(); }
  std::size_t out_nvars() const { return out_nvars_; }
  unsigned out_degree() const { return out_degree_; }

  /// f(args), truncated at min(f.trunc_degree(), out_degree()).
  TruncatedSeries<S> apply(const TruncatedSeries<S>& f);

 private:
  const TruncatedSeries<S>& power(detail::MonoKey sub_key);

  std::vector<TruncatedSeries<S>> args_;
  std::vector<long> rename_;  // target variable for plain-variable arguments, else -1
  std::size_t out_nvars_ = 0;
  unsigned out_degree_ = 0;
  std::unordered_map<detail::MonoKey, TruncatedSeries<S>> powers_;
};

template <typename S>
Substitution<S>::Substitution(std::vector<TruncatedSeries<S>> args, int degree_cap) : args_(std::move(args)) {
  if (args_.empty()) throw SeriesError("compose: empty argument list");
  out_nvars_ = args_.front().nvars();
  unsigned d = args_.front().trunc_degree();
  for (const auto& a : args_) {
    if (a.nvars() != out_nvars_) throw SeriesError("compose: arguments have different nvars");
    d = std::min(d, a.trunc_degree());
  }
  if (degree_cap >= 0) d = std::min<unsigned>(d, static_cast<unsigned>(degree_cap));
  out_degree_ = d;
  rename_.assign(args_.size(), -1);
  for (std::size_t i = 0; i < args_.size(); ++i) {
    args_[i] = args_[i].truncated(d);
    const auto& t = args_[i].terms();
    if (t.size() == 1 && t[0].degree == 1 && t[0].coeff == S(1)) {
      for (std::size_t v = 0; v < out_nvars_; ++v) {
        if (detail::exponent_of(t[0].key, v) == 1) rename_[i] = static_cast<long>(v);
      }
    } else if (!ScalarTraits<S>::is_zero(args_[i].constant_term())) {
      throw SeriesError("compose: argument " + std::to_string(i) +
                        " has a nonzero constant term; re-center the outer series first");
    }
  }
}

template <typename S>
const TruncatedSeries<S>& Substitution<S>::power(detail::MonoKey sub_key) {
  if (auto it = powers_.find(sub_key); it != powers_.end()) return it->second;
  TruncatedSeries<S> value;
  if (sub_key == 0) {
    value = TruncatedSeries<S>::constant(out_nvars_, out_degree_, S(1));
  } else {
    std::size_t var = 0;
    while (detail::exponent_of(sub_key, var) == 0) ++var;
    const TruncatedSeries<S>& lower = power(sub_key - detail::unit_key(var));
    value = mul(lower, args_[var]);
  }
  return powers_.emplace(sub_key, std::move(value)).first->second;
}

template <typename S>
TruncatedSeries<S> Substitution<S>::apply(const TruncatedSeries<S>& f) {
  if (f.nvars() != args_.size()) throw SeriesError("compose: outer series nvars does not match argument count");
  const unsigned d = std::min(f.trunc_degree(), out_degree_);

  // Group terms of f by the exponent of the substituted variables.
  struct Piece {
    detail::MonoKey key;
    unsigned degree;
    const S* coeff;
  };
  std::unordered_map<detail::MonoKey, std::vector<Piece>> groups;
  std::vector<detail::MonoKey> order;
  for (const auto& t : f.terms()) {
    detail::MonoKey sub_key = 0, out_key = 0;
    unsigned sub_deg = 0, out_deg = 0;
    for (std::size_t i = 0; i < args_.size(); ++i) {
      const unsigned e = detail::exponent_of(t.key, i);
      if (!e) continue;
      if (rename_[i] >= 0) {
        out_key += detail::unit_key(static_cast<std::size_t>(rename_[i]), e);
        out_deg += e;
      } else {
        sub_key += detail::unit_key(i, e);
        sub_deg += e;
      }
    }
    if (sub_deg + out_deg > d) continue;  // every power has order >= its exponent sum
    auto [it, inserted] = groups.try_emplace(sub_key);
    if (inserted) order.push_back(sub_key);
    it->second.push_back({out_key, out_deg, &t.coeff});
  }
  std::sort(order.begin(), order.end());

  SeriesAccumulator<S> acc(out_nvars_, d);
  for (auto sub_key : order) {
    const auto& p = power(sub_key);
    for (const auto& piece : groups[sub_key]) {
      const unsigned room = d - piece.degree;
      for (const auto& tp : p.terms()) {
        if (tp.degree > room) break;
        acc.add_product(piece.key + tp.key, piece.degree + tp.degree, *piece.coeff, tp.coeff);
      }
    }
  }
  return acc.finish();
}

/// f(args[0], ..., args[k-1]).
template <typename S>
TruncatedSeries<S> compose(const TruncatedSeries<S>& f, const std::vector<TruncatedSeries<S>>& args) {
  Substitution<S> sub(args);
  return sub.apply(f);
}

// ---------------------------------------------------------------------------
// Segment averages

/// Replaces the variables `src` of f by the segment t*X + (1-t)*Y and integrates t over
/// [0,1], exactly per monomial:
///   int_0^1 prod_j (t x_j + (1-t) y_j)^{b_j} dt
///     = sum_{e <= b} binom(b,e) |e|! (|b|-|e|)! / (|b|+1)! x^e y^{b-e}.
/// Variable i not in `src` is renamed to keep[i]; `x_dst`/`y_dst` give the targets of the
/// segment endpoints. Degrees are preserved.
template <typename S>
TruncatedSeries<S> integrate_segment(const TruncatedSeries<S>& f, const std::vector<std::size_t>& src,
                                     const std::vector<std::size_t>& x_dst, const std::vector<std::size_t>& y_dst,
                                     const std::vector<long>& keep, std::size_t out_nvars) {
  if (src.size() != x_dst.size() || src.size() != y_dst.size()) throw SeriesError("integrate_segment: block sizes differ");
  if (keep.size() != f.nvars()) throw SeriesError("integrate_segment: keep map length does not match nvars");
  const std::size_t n = src.size();
  SeriesAccumulator<S> acc(out_nvars, f.trunc_degree());
  for (const auto& t : f.terms()) {
    detail::MonoKey base = 0;
    for (std::size_t i = 0; i < f.nvars(); ++i) {
      const unsigned e = detail::exponent_of(t.key, i);
      if (e && keep[i] >= 0) base += detail::unit_key(static_cast<std::size_t>(keep[i]), e);
    }
    MultiIndex b(n);
    for (std::size_t j = 0; j < n; ++j) b[j] = detail::exponent_of(t.key, src[j]);
    const unsigned bt = b.total();
    for (const auto& e : indices_below(b)) {
      const unsigned et = e.total();
      Rational w = Rational(factorial(et) * factorial(bt - et), factorial(bt + 1));
      for (std::size_t j = 0; j < n; ++j) w *= Rational(binomial(b[j], e[j]));
      w.canonicalize();
      detail::MonoKey key = base;
      for (std::size_t j = 0; j < n; ++j) {
        if (e[j]) key += detail::unit_key(x_dst[j], e[j]);
        if (b[j] - e[j]) key += detail::unit_key(y_dst[j], b[j] - e[j]);
      }
      acc.add(key, t.degree, t.coeff * ScalarTraits<S>::from_rational(w));
    }
  }
  return acc.finish();
}

}  // namespace bergman
