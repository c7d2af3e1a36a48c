#include "ldpustat/matrix.hpp"

#include <cmath>

#include "ldpustat/errors.hpp"

namespace ldpustat {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) throw InvalidArgument("Matrix: data size does not match shape");
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  const std::size_t cols = rows.front().size();
  std::vector<double> data;
  data.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw InvalidArgument("Matrix: ragged rows");
    data.insert(data.end(), r.begin(), r.end());
  }
  return Matrix(rows.size(), cols, std::move(data));
}

bool Matrix::is_symmetric(double tol) const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
  return true;
}

SymmetricMatrix::SymmetricMatrix(Matrix dense, double tol) : dense_(std::move(dense)) {
  if (dense_.rows() != dense_.cols()) throw InvalidArgument("SymmetricMatrix: matrix is not square");
  if (dense_.rows() == 0) throw InvalidArgument("SymmetricMatrix: empty matrix");
  if (!dense_.is_symmetric(tol)) throw InvalidArgument("SymmetricMatrix: matrix is not symmetric");
  for (double v : dense_.data())
    if (!std::isfinite(v)) throw InvalidArgument("SymmetricMatrix: non-finite entry");
}

SymmetricMatrix SymmetricMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  return SymmetricMatrix(Matrix::from_rows(rows));
}

SymmetricMatrix SymmetricMatrix::zeros(std::size_t n) { return SymmetricMatrix(Matrix(n, n, 0.0)); }

bool SymmetricMatrix::has_zero_diagonal() const {
  for (std::size_t i = 0; i < size(); ++i)
    if (dense_(i, i) != 0.0) return false;
  return true;
}

SymmetricMatrix SymmetricMatrix::with_zero_diagonal() const {
  SymmetricMatrix out = *this;
  for (std::size_t i = 0; i < size(); ++i) out.dense_(i, i) = 0.0;
  return out;
}

SymmetricMatrix SymmetricMatrix::permuted(std::span<const std::size_t> perm) const {
  const std::size_t n = size();
  if (perm.size() != n) throw InvalidArgument("SymmetricMatrix::permuted: permutation size mismatch");
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = dense_(perm[i], perm[j]);
  return SymmetricMatrix(std::move(out));
}

}  // namespace ldpustat
