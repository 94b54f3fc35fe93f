#include "kdyn/exact/matrix.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace kdyn {

ExactMatrix::ExactMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ExactMatrix::ExactMatrix(const std::vector<std::vector<GaussRational>>& rows) {
  rows_ = rows.size();
  cols_ = rows.empty() ? 0 : rows.front().size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("ragged matrix rows");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

ExactMatrix ExactMatrix::identity(std::size_t n) {
  ExactMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

ExactMatrix ExactMatrix::parse(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::vector<GaussRational>> parsed;
  parsed.reserve(rows.size());
  for (const auto& r : rows) {
    std::vector<GaussRational> pr;
    pr.reserve(r.size());
    for (const auto& s : r) pr.push_back(GaussRational::parse(s));
    parsed.push_back(std::move(pr));
  }
  return ExactMatrix(parsed);
}

ExactMatrix ExactMatrix::diagonal(const std::vector<GaussRational>& d) {
  ExactMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ExactMatrix ExactMatrix::from_columns(const std::vector<ExactVector>& cols) {
  if (cols.empty()) return {};
  ExactMatrix m(cols.front().size(), cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c].size() != m.rows_) throw std::invalid_argument("ragged columns");
    for (std::size_t r = 0; r < m.rows_; ++r) m(r, c) = cols[c][r];
  }
  return m;
}

bool ExactMatrix::is_real() const {
  return std::all_of(data_.begin(), data_.end(), [](const GaussRational& a) { return a.is_real(); });
}

bool ExactMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const GaussRational& a) { return a.is_zero(); });
}

ExactVector ExactMatrix::column(std::size_t c) const {
  ExactVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

ExactVector ExactMatrix::row(std::size_t r) const {
  return ExactVector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                     data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

ExactMatrix ExactMatrix::transpose() const {
  ExactMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

ExactMatrix ExactMatrix::conj() const {
  ExactMatrix t = *this;
  for (auto& a : t.data_) a = a.conj();
  return t;
}

ExactMatrix ExactMatrix::operator*(const ExactMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
  ExactMatrix out(rows_, o.cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = 0; k < cols_; ++k) {
      const GaussRational& a = (*this)(r, k);
      if (a.is_zero()) continue;
      for (std::size_t c = 0; c < o.cols_; ++c) {
        const GaussRational& b = o(k, c);
        if (!b.is_zero()) out(r, c) += a * b;
      }
    }
  return out;
}

ExactVector ExactMatrix::operator*(const ExactVector& v) const {
  if (cols_ != v.size()) throw std::invalid_argument("matrix-vector shape mismatch");
  ExactVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) {
      const GaussRational& a = (*this)(r, c);
      if (!a.is_zero() && !v[c].is_zero()) out[r] += a * v[c];
    }
  return out;
}

ExactMatrix ExactMatrix::operator+(const ExactMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix sum shape mismatch");
  ExactMatrix out = *this;
  for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] += o.data_[k];
  return out;
}

ExactMatrix ExactMatrix::operator-(const ExactMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix difference shape mismatch");
  ExactMatrix out = *this;
  for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] -= o.data_[k];
  return out;
}

ExactMatrix ExactMatrix::scaled(const GaussRational& s) const {
  ExactMatrix out = *this;
  for (auto& a : out.data_) a *= s;
  return out;
}

ExactMatrix ExactMatrix::pow(unsigned long n) const {
  if (!is_square()) throw std::invalid_argument("power of non-square matrix");
  ExactMatrix result = identity(rows_), base = *this;
  while (n) {
    if (n & 1UL) result = result * base;
    n >>= 1UL;
    if (n) base = base * base;
  }
  return result;
}

ExactMatrix ExactMatrix::eval_poly(const Poly& p) const {
  ExactMatrix acc(rows_, cols_);
  const auto& c = p.coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    acc = acc * *this;
    for (std::size_t i = 0; i < rows_; ++i) acc(i, i) += *it;
  }
  return acc;
}

EchelonResult row_reduce(ExactMatrix& m) {
  EchelonResult res;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t piv = row;
    while (piv < m.rows() && m(piv, col).is_zero()) ++piv;
    if (piv == m.rows()) continue;
    if (piv != row)
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(piv, c), m(row, c));
    GaussRational inv = m(row, col).inverse();
    for (std::size_t c = col; c < m.cols(); ++c) m(row, c) *= inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col).is_zero()) continue;
      GaussRational f = m(r, col);
      for (std::size_t c = col; c < m.cols(); ++c)
        if (!m(row, c).is_zero()) m(r, c) -= f * m(row, c);
    }
    res.pivot_cols.push_back(col);
    ++row;
  }
  res.rank = row;
  return res;
}

GaussRational ExactMatrix::determinant() const {
  if (!is_square()) throw std::invalid_argument("determinant of non-square matrix");
  ExactMatrix m = *this;
  GaussRational det = 1;
  const std::size_t n = rows_;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m(piv, col).is_zero()) ++piv;
    if (piv == n) return {};
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m(piv, c), m(col, c));
      det = -det;
    }
    det *= m(col, col);
    GaussRational inv = m(col, col).inverse();
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m(r, col).is_zero()) continue;
      GaussRational f = m(r, col) * inv;
      for (std::size_t c = col; c < n; ++c)
        if (!m(col, c).is_zero()) m(r, c) -= f * m(col, c);
    }
  }
  return det;
}

std::size_t ExactMatrix::rank() const {
  ExactMatrix m = *this;
  return row_reduce(m).rank;
}

ExactMatrix ExactMatrix::inverse() const {
  if (!is_square()) throw std::invalid_argument("inverse of non-square matrix");
  const std::size_t n = rows_;
  ExactMatrix aug(n, 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = (*this)(r, c);
    aug(r, n + r) = 1;
  }
  auto res = row_reduce(aug);
  if (res.rank < n || res.pivot_cols[n - 1] != n - 1) throw std::domain_error("matrix is singular");
  ExactMatrix inv(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) inv(r, c) = aug(r, n + c);
  return inv;
}

std::vector<ExactVector> ExactMatrix::kernel() const {
  ExactMatrix m = *this;
  auto res = row_reduce(m);
  std::vector<bool> is_pivot(cols_, false);
  for (auto c : res.pivot_cols) is_pivot[c] = true;
  std::vector<ExactVector> basis;
  for (std::size_t free = 0; free < cols_; ++free) {
    if (is_pivot[free]) continue;
    ExactVector v(cols_);
    v[free] = 1;
    for (std::size_t k = 0; k < res.rank; ++k) v[res.pivot_cols[k]] = -m(k, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

ExactVector ExactMatrix::solve(const ExactVector& b) const {
  const std::size_t n = rows_;
  ExactMatrix aug(n, n + 1);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = (*this)(r, c);
    aug(r, n) = b[r];
  }
  auto res = row_reduce(aug);
  if (res.rank < n || res.pivot_cols[n - 1] != n - 1) throw std::domain_error("matrix is singular");
  ExactVector x(n);
  for (std::size_t r = 0; r < n; ++r) x[r] = aug(r, n);
  return x;
}

Poly ExactMatrix::char_poly() const {
  if (!is_square()) throw std::invalid_argument("characteristic polynomial of non-square matrix");
  const std::size_t n = rows_;
  ExactMatrix h = *this;
  // Similarity reduction to upper Hessenberg form.
  for (std::size_t j = 0; j + 2 < n; ++j) {
    std::size_t piv = j + 1;
    while (piv < n && h(piv, j).is_zero()) ++piv;
    if (piv == n) continue;
    if (piv != j + 1) {
      for (std::size_t c = 0; c < n; ++c) std::swap(h(piv, c), h(j + 1, c));
      for (std::size_t r = 0; r < n; ++r) std::swap(h(r, piv), h(r, j + 1));
    }
    GaussRational inv = h(j + 1, j).inverse();
    for (std::size_t r = j + 2; r < n; ++r) {
      if (h(r, j).is_zero()) continue;
      GaussRational f = h(r, j) * inv;
      for (std::size_t c = 0; c < n; ++c)
        if (!h(j + 1, c).is_zero()) h(r, c) -= f * h(j + 1, c);
      for (std::size_t rr = 0; rr < n; ++rr)
        if (!h(rr, r).is_zero()) h(rr, j + 1) += f * h(rr, r);
    }
  }
  // p_m = (x - h_mm) p_{m-1} - sum_{i<m} h_im (prod_{j=i+1..m} h_{j,j-1}) p_{i-1}  (1-indexed)
  std::vector<Poly> p(n + 1);
  p[0] = Poly(1);
  for (std::size_t m = 1; m <= n; ++m) {
    p[m] = Poly(std::vector<GaussRational>{-h(m - 1, m - 1), 1}) * p[m - 1];
    GaussRational prod = 1;
    for (std::size_t i = m - 1; i >= 1; --i) {
      prod *= h(i, i - 1);
      if (prod.is_zero()) break;
      GaussRational coeff = h(i - 1, m - 1) * prod;
      if (!coeff.is_zero()) p[m] -= Poly(coeff) * p[i - 1];
    }
  }
  return p[n];
}

std::size_t ExactMatrix::max_digits() const {
  std::size_t best = 0;
  for (const auto& a : data_) best = std::max(best, a.digit_count());
  return best;
}

std::string ExactMatrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t r = 0; r < rows_; ++r) {
    os << (r ? ", [" : "[");
    for (std::size_t c = 0; c < cols_; ++c) os << (c ? ", " : "") << (*this)(r, c).to_string();
    os << ']';
  }
  os << ']';
  return os.str();
}

ExactMatrix kronecker(const ExactMatrix& a, const ExactMatrix& b) {
  ExactMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j).is_zero()) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    }
  return out;
}

bool is_zero_vector(const ExactVector& v) {
  return std::all_of(v.begin(), v.end(), [](const GaussRational& a) { return a.is_zero(); });
}

}  // namespace kdyn
