#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "kdyn/numeric/real.hpp"

namespace kdyn {

/// Exact element a + b*i of Q(i).
class GaussRational {
 public:
  GaussRational() = default;
  GaussRational(long a) : re_(a), im_(0) {}
  GaussRational(int a) : re_(a), im_(0) {}
  GaussRational(mpq_class a) : re_(std::move(a)), im_(0) {}
  GaussRational(mpq_class a, mpq_class b) : re_(std::move(a)), im_(std::move(b)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  static GaussRational i() { return {0, 1}; }

  /// Parses "3/2", "1.5", "-2", "1+2i", "0.1-0.25i", "i", "-1/2i".
  static GaussRational parse(std::string_view text);

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  bool is_one() const { return re_ == 1 && sgn(im_) == 0; }

  GaussRational conj() const { return {re_, -im_}; }
  /// a^2 + b^2.
  mpq_class norm() const { return re_ * re_ + im_ * im_; }
  GaussRational inverse() const;

  GaussRational& operator+=(const GaussRational& o);
  GaussRational& operator-=(const GaussRational& o);
  GaussRational& operator*=(const GaussRational& o);
  GaussRational& operator/=(const GaussRational& o);
  GaussRational operator-() const { return {-re_, -im_}; }

  friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
  friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
  friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
  friend GaussRational operator/(GaussRational a, const GaussRational& b) { return a /= b; }
  friend bool operator==(const GaussRational& a, const GaussRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  /// Canonical text: "3/2", "-1/10+1/5i", "i".
  std::string to_string() const;

  hp::Complex to_complex() const;
  hp::Real abs() const;

  /// Total number of decimal digits in the four integers; used for growth budgets.
  std::size_t digit_count() const;

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

/// Exact decimal or fraction string to a rational ("1.25" -> 5/4, "-3/8").
mpq_class parse_rational(std::string_view text);

}  // namespace kdyn
