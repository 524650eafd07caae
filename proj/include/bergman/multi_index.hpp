#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace bergman {

/// Exponent vector alpha = (alpha_1, ..., alpha_n) with the componentwise partial order.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t nvars) : entries_(nvars, 0) {}
  MultiIndex(std::initializer_list<unsigned> entries) : entries_(entries) {}
  explicit MultiIndex(std::vector<unsigned> entries) : entries_(std::move(entries)) {}

  static MultiIndex unit(std::size_t nvars, std::size_t i, unsigned power = 1) {
    MultiIndex m(nvars);
    m.entries_.at(i) = power;
    return m;
  }

  std::size_t size() const { return entries_.size(); }
  unsigned operator[](std::size_t i) const { return entries_[i]; }
  unsigned& operator[](std::size_t i) { return entries_[i]; }
  const std::vector<unsigned>& entries() const { return entries_; }

  unsigned total() const;
  /// alpha <= beta componentwise.
  bool leq(const MultiIndex& other) const;
  MultiIndex operator+(const MultiIndex& other) const;
  MultiIndex operator-(const MultiIndex& other) const;

  bool operator==(const MultiIndex& other) const = default;
  std::string to_string() const;

 private:
  std::vector<unsigned> entries_;
};

/// All multi-indices in `nvars` variables with |alpha| == degree, in lexicographic order
/// (first exponent largest first).
std::vector<MultiIndex> indices_of_degree(std::size_t nvars, unsigned degree);

/// All multi-indices gamma <= bound (componentwise).
std::vector<MultiIndex> indices_below(const MultiIndex& bound);

namespace detail {

// Monomials are packed into 64 bits, six bits per variable with variable 0 in the highest
// field, so integer order on keys coincides with lexicographic order on exponents.
inline constexpr std::size_t kMaxVars = 10;
inline constexpr unsigned kFieldBits = 6;
inline constexpr unsigned kMaxDegree = (1u << kFieldBits) - 1;

using MonoKey = std::uint64_t;

inline constexpr unsigned field_shift(std::size_t var) {
  return static_cast<unsigned>((kMaxVars - 1 - var) * kFieldBits);
}

inline unsigned exponent_of(MonoKey key, std::size_t var) {
  return static_cast<unsigned>((key >> field_shift(var)) & kMaxDegree);
}

inline MonoKey unit_key(std::size_t var, unsigned power = 1) {
  return static_cast<MonoKey>(power) << field_shift(var);
}

MonoKey pack(const MultiIndex& alpha);
MultiIndex unpack(MonoKey key, std::size_t nvars);
unsigned key_degree(MonoKey key, std::size_t nvars);

}  // namespace detail

}  // namespace bergman
