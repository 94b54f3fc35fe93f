#include "kdyn/numeric/linalg.hpp"

#include <numeric>
#include <stdexcept>

namespace kdyn::hp {

CMatrix::CMatrix(std::size_t rows, std::size_t cols, long bits)
    : rows_(rows), cols_(cols), bits_(bits) {
  PrecisionGuard guard(bits);
  data_.assign(rows * cols, Complex(Real(0)));
}

CMatrix CMatrix::identity(std::size_t n, long bits) {
  CMatrix m(n, n, bits);
  PrecisionGuard guard(bits);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Complex(Real(1));
  return m;
}

CMatrix CMatrix::from_exact(const ExactMatrix& e, long bits) {
  CMatrix m(e.rows(), e.cols(), bits);
  PrecisionGuard guard(bits);
  for (std::size_t r = 0; r < e.rows(); ++r)
    for (std::size_t c = 0; c < e.cols(); ++c) m(r, c) = e(r, c).to_complex();
  return m;
}

CMatrix CMatrix::from_columns(const std::vector<CVector>& cols) {
  if (cols.empty()) return {};
  long bits = 0;
  for (const auto& c : cols)
    for (const auto& z : c) bits = std::max(bits, z.bits());
  CMatrix m(cols.front().size(), cols.size(), bits);
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (std::size_t r = 0; r < m.rows_; ++r) m(r, c) = cols[c][r];
  return m;
}

CVector CMatrix::column(std::size_t c) const {
  CVector v;
  v.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v.push_back((*this)(r, c));
  return v;
}

CMatrix CMatrix::operator*(const CMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
  CMatrix out(rows_, o.cols_, std::max(bits_, o.bits_));
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Complex& a = (*this)(r, k);
      if (a.is_zero()) continue;
      for (std::size_t c = 0; c < o.cols_; ++c) out(r, c) += a * o(k, c);
    }
  return out;
}

CVector CMatrix::operator*(const CVector& v) const {
  if (cols_ != v.size()) throw std::invalid_argument("matrix-vector shape mismatch");
  PrecisionGuard guard(bits_);
  CVector out(rows_, Complex(Real(0)));
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out[r] += (*this)(r, c) * v[c];
  return out;
}

CMatrix CMatrix::operator+(const CMatrix& o) const {
  CMatrix out = *this;
  for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] += o.data_[k];
  return out;
}

CMatrix CMatrix::operator-(const CMatrix& o) const {
  CMatrix out = *this;
  for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] -= o.data_[k];
  return out;
}

CMatrix CMatrix::scaled(const Complex& s) const {
  CMatrix out = *this;
  for (auto& z : out.data_) z *= s;
  return out;
}

CMatrix CMatrix::transpose() const {
  CMatrix t(cols_, rows_, bits_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

CMatrix CMatrix::conj_transpose() const {
  CMatrix t(cols_, rows_, bits_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = conj((*this)(r, c));
  return t;
}

Real max_norm(const CMatrix& m) {
  PrecisionGuard guard(m.bits());
  Real best = 0;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Real s = 0;
    for (std::size_t c = 0; c < m.cols(); ++c) s += abs(m(r, c));
    best = max(best, s);
  }
  return best;
}

Real max_abs(const CVector& v) {
  Real best = 0;
  for (const auto& z : v) best = max(best, abs(z));
  return best;
}

namespace {

// In-place elimination with complete pivoting, limited to `steps` pivots.
// Records the row and column order; afterwards the leading steps x steps block
// of the permuted matrix is upper triangular.
struct Pivoted {
  CMatrix a;
  std::vector<std::size_t> row_perm, col_perm;
  std::vector<Real> pivots;
};

Pivoted eliminate(const CMatrix& m, std::size_t steps) {
  Pivoted p{m, {}, {}, {}};
  const std::size_t R = m.rows(), C = m.cols();
  p.row_perm.resize(R);
  p.col_perm.resize(C);
  std::iota(p.row_perm.begin(), p.row_perm.end(), 0);
  std::iota(p.col_perm.begin(), p.col_perm.end(), 0);
  PrecisionGuard guard(m.bits());
  CMatrix& a = p.a;
  for (std::size_t k = 0; k < steps && k < R && k < C; ++k) {
    std::size_t br = k, bc = k;
    Real best = -1;
    for (std::size_t r = k; r < R; ++r)
      for (std::size_t c = k; c < C; ++c) {
        Real v = norm(a(r, c));
        if (v > best) {
          best = v;
          br = r;
          bc = c;
        }
      }
    if (br != k) {
      for (std::size_t c = 0; c < C; ++c) std::swap(a(br, c), a(k, c));
      std::swap(p.row_perm[br], p.row_perm[k]);
    }
    if (bc != k) {
      for (std::size_t r = 0; r < R; ++r) std::swap(a(r, bc), a(r, k));
      std::swap(p.col_perm[bc], p.col_perm[k]);
    }
    p.pivots.push_back(sqrt(best));
    if (a(k, k).is_zero()) break;
    for (std::size_t r = k + 1; r < R; ++r) {
      if (a(r, k).is_zero()) continue;
      Complex f = a(r, k) / a(k, k);
      for (std::size_t c = k; c < C; ++c) a(r, c) -= f * a(k, c);
    }
  }
  return p;
}

}  // namespace

CMatrix inverse(const CMatrix& m) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("inverse of non-square matrix");
  PrecisionGuard guard(m.bits());
  CMatrix aug(n, 2 * n, m.bits());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = m(r, c);
    aug(r, n + r) = Complex(Real(1));
  }
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t br = k;
    Real best = -1;
    for (std::size_t r = k; r < n; ++r) {
      Real v = norm(aug(r, k));
      if (v > best) {
        best = v;
        br = r;
      }
    }
    if (best.is_zero()) throw std::domain_error("matrix is numerically singular");
    if (br != k)
      for (std::size_t c = 0; c < 2 * n; ++c) std::swap(aug(br, c), aug(k, c));
    Complex inv = Complex(Real(1)) / aug(k, k);
    for (std::size_t c = 0; c < 2 * n; ++c) aug(k, c) *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == k || aug(r, k).is_zero()) continue;
      Complex f = aug(r, k);
      for (std::size_t c = 0; c < 2 * n; ++c) aug(r, c) -= f * aug(k, c);
    }
  }
  CMatrix out(n, n, m.bits());
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) out(r, c) = aug(r, n + c);
  return out;
}

std::vector<CVector> kernel_with_rank(const CMatrix& m, std::size_t rank) {
  const std::size_t C = m.cols();
  if (rank > C) throw std::invalid_argument("rank exceeds column count");
  Pivoted p = eliminate(m, rank);
  PrecisionGuard guard(m.bits());
  const CMatrix& a = p.a;
  std::vector<CVector> basis;
  for (std::size_t f = rank; f < C; ++f) {
    // Solve U y = -a[:, f] on the leading rank x rank triangle, y_f = 1.
    CVector y(C, Complex(Real(0)));
    y[f] = Complex(Real(1));
    for (std::size_t i = rank; i-- > 0;) {
      Complex s = -a(i, f);
      for (std::size_t j = i + 1; j < rank; ++j) s -= a(i, j) * y[j];
      y[i] = s / a(i, i);
    }
    CVector x(C, Complex(Real(0)));
    for (std::size_t j = 0; j < C; ++j) x[p.col_perm[j]] = y[j];
    basis.push_back(std::move(x));
  }
  return basis;
}

std::vector<CVector> range_with_rank(const CMatrix& m, std::size_t rank) {
  Pivoted p = eliminate(m, rank);
  std::vector<CVector> basis;
  for (std::size_t k = 0; k < rank; ++k) basis.push_back(m.column(p.col_perm[k]));
  return basis;
}

std::size_t numeric_rank(const CMatrix& m, const Real& tol) {
  PrecisionGuard guard(m.bits());
  Real scale = 0;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) scale = max(scale, abs(m(r, c)));
  if (scale.is_zero()) return 0;
  Pivoted p = eliminate(m, std::min(m.rows(), m.cols()));
  std::size_t rank = 0;
  for (const auto& piv : p.pivots) {
    if (piv <= tol * scale) break;
    ++rank;
  }
  return rank;
}

}  // namespace kdyn::hp
