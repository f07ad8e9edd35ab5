#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace hybridcast {

/// Dense row-major matrix of doubles. Rows are time steps, columns are features.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) {
    assert(r < rows_ && c < cols_);
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    assert(r < rows_ && c < cols_);
    return data_[r * cols_ + c];
  }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<const double> data() const { return data_; }

  /// Copies rows [first, first + count).
  Matrix slice_rows(std::size_t first, std::size_t count) const {
    assert(first + count <= rows_);
    Matrix out(count, cols_);
    std::copy(data_.begin() + static_cast<std::ptrdiff_t>(first * cols_),
              data_.begin() + static_cast<std::ptrdiff_t>((first + count) * cols_), out.data_.begin());
    return out;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace hybridcast
