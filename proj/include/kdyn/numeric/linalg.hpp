#pragma once

#include <cstddef>
#include <vector>

#include "kdyn/exact/matrix.hpp"
#include "kdyn/numeric/real.hpp"

namespace kdyn::hp {

using CVector = std::vector<Complex>;

/// Dense complex matrix at MPFR precision. Row-major.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols, long bits);

  static CMatrix identity(std::size_t n, long bits);
  static CMatrix from_exact(const ExactMatrix& m, long bits);
  static CMatrix from_columns(const std::vector<CVector>& cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  long bits() const { return bits_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  CVector column(std::size_t c) const;

  CMatrix operator*(const CMatrix& o) const;
  CVector operator*(const CVector& v) const;
  CMatrix operator+(const CMatrix& o) const;
  CMatrix operator-(const CMatrix& o) const;
  CMatrix scaled(const Complex& s) const;
  CMatrix transpose() const;
  CMatrix conj_transpose() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  long bits_ = 0;
  std::vector<Complex> data_;
};

/// Operator norm induced by the max-norm: largest absolute row sum.
Real max_norm(const CMatrix& m);
Real max_abs(const CVector& v);

/// Inverse by Gauss-Jordan elimination with complete pivoting.
CMatrix inverse(const CMatrix& m);

/// Kernel basis assuming the (exactly known) rank. Complete pivoting picks
/// the `rank` most significant pivots; the remaining columns are free.
std::vector<CVector> kernel_with_rank(const CMatrix& m, std::size_t rank);

/// Column-space basis assuming the rank: the pivot columns of `m`.
std::vector<CVector> range_with_rank(const CMatrix& m, std::size_t rank);

/// Numerical rank: number of complete-pivoting steps whose pivot exceeds
/// tol * (largest entry of the input).
std::size_t numeric_rank(const CMatrix& m, const Real& tol);

}  // namespace kdyn::hp
