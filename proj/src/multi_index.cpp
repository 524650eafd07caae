#include "bergman/multi_index.hpp"

#include <numeric>
#include <stdexcept>

namespace bergman {

unsigned MultiIndex::total() const { return std::accumulate(entries_.begin(), entries_.end(), 0u); }

bool MultiIndex::leq(const MultiIndex& other) const {
  if (other.size() != size()) throw std::invalid_argument("multi-index length mismatch");
  for (std::size_t i = 0; i < size(); ++i) {
    if (entries_[i] > other.entries_[i]) return false;
  }
  return true;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (other.size() != size()) throw std::invalid_argument("multi-index length mismatch");
  MultiIndex r(*this);
  for (std::size_t i = 0; i < size(); ++i) r.entries_[i] += other.entries_[i];
  return r;
}

MultiIndex MultiIndex::operator-(const MultiIndex& other) const {
  if (!other.leq(*this)) throw std::invalid_argument("multi-index difference would be negative");
  MultiIndex r(*this);
  for (std::size_t i = 0; i < size(); ++i) r.entries_[i] -= other.entries_[i];
  return r;
}

std::string MultiIndex::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < size(); ++i) {
    if (i) s += ",";
    s += std::to_string(entries_[i]);
  }
  return s + ")";
}

namespace {

void fill_degree(std::size_t pos, unsigned remaining, MultiIndex& current, std::vector<MultiIndex>& out) {
  if (pos + 1 == current.size()) {
    current[pos] = remaining;
    out.push_back(current);
    return;
  }
  for (unsigned e = remaining + 1; e-- > 0;) {
    current[pos] = e;
    fill_degree(pos + 1, remaining - e, current, out);
  }
}

void fill_below(std::size_t pos, const MultiIndex& bound, MultiIndex& current, std::vector<MultiIndex>& out) {
  if (pos == bound.size()) {
    out.push_back(current);
    return;
  }
  for (unsigned e = 0; e <= bound[pos]; ++e) {
    current[pos] = e;
    fill_below(pos + 1, bound, current, out);
  }
}

}  // namespace

std::vector<MultiIndex> indices_of_degree(std::size_t nvars, unsigned degree) {
  std::vector<MultiIndex> out;
  if (nvars == 0) {
    if (degree == 0) out.emplace_back();
    return out;
  }
  MultiIndex current(nvars);
  fill_degree(0, degree, current, out);
  return out;
}

std::vector<MultiIndex> indices_below(const MultiIndex& bound) {
  std::vector<MultiIndex> out;
  MultiIndex current(bound.size());
  fill_below(0, bound, current, out);
  return out;
}

namespace detail {

MonoKey pack(const MultiIndex& alpha) {
  if (alpha.size() > kMaxVars) throw std::invalid_argument("too many variables for packed monomial");
  MonoKey key = 0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] > kMaxDegree) throw std::invalid_argument("exponent exceeds packed monomial range");
    key |= unit_key(i, alpha[i]);
  }
  return key;
}

MultiIndex unpack(MonoKey key, std::size_t nvars) {
  MultiIndex alpha(nvars);
  for (std::size_t i = 0; i < nvars; ++i) alpha[i] = exponent_of(key, i);
  return alpha;
}

unsigned key_degree(MonoKey key, std::size_t nvars) {
  unsigned d = 0;
  for (std::size_t i = 0; i < nvars; ++i) d += exponent_of(key, i);
  return d;
}

}  // namespace detail

}  // namespace bergman
