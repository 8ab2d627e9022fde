// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace otfs {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// e^{j 2 pi cycles}, with the argument reduced to [-0.5, 0.5] cycles first so
/// large phase ramps keep full precision.
inline cplx cis_cycles(double cycles) {
  const double frac = cycles - std::nearbyint(cycles);
  return std::polar(1.0, kTwoPi * frac);
}

/// Dense row-major matrix. Rows are contiguous.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<T> flat() { return data_; }
  std::span<const T> flat() const { return data_; }

  std::vector<T> column(std::size_t c) const {
    std::vector<T> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = data_[r * cols_ + c];
    return out;
  }
  void set_column(std::size_t c, std::span<const T> values) {
    if (values.size() != rows_) throw std::invalid_argument("Matrix::set_column: length mismatch");
    for (std::size_t r = 0; r < rows_; ++r) data_[r * cols_ + c] = values[r];
  }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using CMatrix = Matrix<cplx>;
using RMatrix = Matrix<double>;

inline double squared_norm(std::span<const cplx> v) {
  double acc = 0.0;
  for (const auto& x : v) acc += std::norm(x);
  return acc;
}

}  // namespace otfs
