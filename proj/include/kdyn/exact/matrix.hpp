#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "kdyn/exact/gauss_rational.hpp"
#include "kdyn/exact/polynomial.hpp"

namespace kdyn {

using ExactVector = std::vector<GaussRational>;

/// Dense matrix over Q(i) with exact entry arithmetic. Row-major.
class ExactMatrix {
 public:
  ExactMatrix() = default;
  ExactMatrix(std::size_t rows, std::size_t cols);
  /// Square from nested rows; throws std::invalid_argument if ragged.
  explicit ExactMatrix(const std::vector<std::vector<GaussRational>>& rows);

  static ExactMatrix identity(std::size_t n);
  static ExactMatrix parse(const std::vector<std::vector<std::string>>& rows);
  static ExactMatrix diagonal(const std::vector<GaussRational>& d);
  /// Columns given as vectors.
  static ExactMatrix from_columns(const std::vector<ExactVector>& cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  bool is_real() const;
  bool is_zero() const;

  GaussRational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const GaussRational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  ExactVector column(std::size_t c) const;
  ExactVector row(std::size_t r) const;

  ExactMatrix transpose() const;
  ExactMatrix conj() const;
  ExactMatrix operator*(const ExactMatrix& o) const;
  ExactVector operator*(const ExactVector& v) const;
  ExactMatrix operator+(const ExactMatrix& o) const;
  ExactMatrix operator-(const ExactMatrix& o) const;
  ExactMatrix scaled(const GaussRational& s) const;
  friend bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  ExactMatrix pow(unsigned long n) const;
  /// p(M) by Horner's rule.
  ExactMatrix eval_poly(const Poly& p) const;

  GaussRational determinant() const;
  std::size_t rank() const;
  /// Throws std::domain_error when singular.
  ExactMatrix inverse() const;
  /// Basis of the right kernel, one vector per column of the result list.
  std::vector<ExactVector> kernel() const;
  /// Solves A x = b for square nonsingular A.
  ExactVector solve(const ExactVector& b) const;

  /// det(x I - M) via Hessenberg reduction.
  Poly char_poly() const;

  /// Largest decimal digit count of any entry (growth budget checks).
  std::size_t max_digits() const;

  std::string to_string() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<GaussRational> data_;
};

ExactMatrix kronecker(const ExactMatrix& a, const ExactMatrix& b);

/// Row-echelon elimination returning the rank and pivot columns; `m` is reduced in place.
struct EchelonResult {
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_cols;
};
EchelonResult row_reduce(ExactMatrix& m);

bool is_zero_vector(const ExactVector& v);

}  // namespace kdyn
