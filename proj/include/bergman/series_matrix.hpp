#pragma once

#include <vector>

#include "bergman/truncated_series.hpp"

namespace bergman {

/// Row-major matrix of series sharing nvars and truncation degree.
template <typename S>
class SeriesMatrix {
 public:
  SeriesMatrix(std::size_t rows, std::size_t cols, std::vector<TruncatedSeries<S>> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (rows == 0 || cols == 0) throw SeriesError("matrix dimensions must be positive");
    if (entries_.size() != rows * cols) throw SeriesError("matrix entry count does not match dimensions");
    for (const auto& e : entries_) {
      if (e.nvars() != entries_.front().nvars() || e.trunc_degree() != entries_.front().trunc_degree()) {
        throw SeriesError("matrix entries must share nvars and truncation degree");
      }
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const TruncatedSeries<S>& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  std::size_t nvars() const { return entries_.front().nvars(); }
  unsigned trunc_degree() const { return entries_.front().trunc_degree(); }

 private:
  std::size_t rows_, cols_;
  std::vector<TruncatedSeries<S>> entries_;
};

namespace detail {

template <typename S>
TruncatedSeries<S> det_minor(const SeriesMatrix<S>& m, std::vector<std::size_t>& rows, std::vector<std::size_t>& cols) {
  if (rows.size() == 1) return m(rows[0], cols[0]);
  const std::size_t r0 = rows.front();
  std::vector<std::size_t> sub_rows(rows.begin() + 1, rows.end());
  TruncatedSeries<S> total(m.nvars(), m.trunc_degree());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    const auto& entry = m(r0, cols[j]);
    if (entry.is_zero()) continue;
    std::vector<std::size_t> sub_cols;
    sub_cols.reserve(cols.size() - 1);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (k != j) sub_cols.push_back(cols[k]);
    }
    auto term = mul(entry, det_minor(m, sub_rows, sub_cols));
    total = (j % 2 == 0) ? add(total, term) : sub(total, term);
  }
  return total;
}

}  // namespace detail

/// Determinant by cofactor expansion along the first row, truncating after every product.
template <typename S>
TruncatedSeries<S> det(const SeriesMatrix<S>& m) {
  if (m.rows() != m.cols()) throw SeriesError("det: matrix is not square");
  std::vector<std::size_t> rows(m.rows()), cols(m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = cols[i] = i;
  return detail::det_minor(m, rows, cols);
}

}  // namespace bergman
