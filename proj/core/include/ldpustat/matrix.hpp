#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ldpustat {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& data() noexcept { return data_; }

  bool is_symmetric(double tol = 0.0) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Symmetric n x n real matrix; symmetry is validated at construction.
///
/// Couplings Q_n are read through `coupling()`, which treats the diagonal as zero
/// regardless of what was stored.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(Matrix dense, double tol = 0.0);

  static SymmetricMatrix from_rows(const std::vector<std::vector<double>>& rows);
  static SymmetricMatrix zeros(std::size_t n);

  std::size_t size() const noexcept { return dense_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return dense_(i, j); }
  double coupling(std::size_t i, std::size_t j) const { return i == j ? 0.0 : dense_(i, j); }

  const Matrix& dense() const noexcept { return dense_; }
  bool has_zero_diagonal() const;
  SymmetricMatrix with_zero_diagonal() const;

  /// Relabel sites: result(i, j) = (*this)(perm[i], perm[j]).
  SymmetricMatrix permuted(std::span<const std::size_t> perm) const;

 private:
  Matrix dense_;
};

}  // namespace ldpustat
