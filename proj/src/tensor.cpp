// SPDX-License-Identifier: Apache-2.0
#include "absa/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "absa/errors.hpp"

namespace absa {

Tensor2::Tensor2(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Tensor2::Tensor2(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ShapeError("Tensor2: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

void Tensor2::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

bool Tensor2::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

Tensor2& Tensor2::operator+=(const Tensor2& other) {
  if (!same_shape(other)) throw ShapeError("Tensor2 +=: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Tensor2 Tensor2::slice_cols(std::size_t begin, std::size_t count) const {
  if (begin + count > cols_) throw ShapeError("slice_cols: range exceeds width");
  Tensor2 out(rows_, count);
  for (std::size_t r = 0; r < rows_; ++r) {
    auto src = row(r).subspan(begin, count);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

Tensor2 Tensor2::row_tensor(std::size_t r) const {
  Tensor2 out(1, cols_);
  auto src = row(r);
  std::copy(src.begin(), src.end(), out.data().begin());
  return out;
}

Tensor2 concat_cols(std::span<const Tensor2* const> parts) {
  if (parts.empty()) return {};
  const std::size_t rows = parts.front()->rows();
  std::size_t width = 0;
  for (const Tensor2* p : parts) {
    if (p->rows() != rows) {
      throw ShapeError("concat_cols: row counts differ (" + std::to_string(rows) +
                       " vs " + std::to_string(p->rows()) + ")");
    }
    width += p->cols();
  }
  Tensor2 out(rows, width);
  for (std::size_t r = 0; r < rows; ++r) {
    auto dst = out.row(r).begin();
    for (const Tensor2* p : parts) dst = std::copy(p->row(r).begin(), p->row(r).end(), dst);
  }
  return out;
}

}  // namespace absa
