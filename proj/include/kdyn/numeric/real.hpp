#pragma once

// Arbitrary-precision real and complex scalars backed by MPFR.
//
// Every value carries its own precision. Binary operations produce a result
// at the larger of the two operand precisions; values constructed from
// literals use the calling thread's default precision (see PrecisionGuard).

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <compare>
#include <iosfwd>
#include <string>

namespace kdyn::hp {

/// Thread-local default precision in bits (128 unless overridden).
long default_bits();
void set_default_bits(long bits);

/// Sets the thread's default precision for the lifetime of the guard.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(long bits);
  ~PrecisionGuard();
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  long saved_;
};

class Real {
 public:
  Real();
  Real(int x);
  Real(long x);
  Real(double x);
  explicit Real(const mpz_class& x);
  explicit Real(const mpq_class& x);
  explicit Real(const std::string& decimal);

  /// Zero at an explicit precision.
  static Real with_bits(long bits);
  static Real pi(long bits = 0);
  static Real from_long_double(long double x);

  Real(const Real& o);
  Real(Real&& o) noexcept;
  Real& operator=(const Real& o);
  Real& operator=(Real&& o) noexcept;
  ~Real();

  long bits() const { return static_cast<long>(mpfr_get_prec(v_)); }
  /// Re-rounds the value to a new precision.
  void set_bits(long bits);

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long double to_long_double() const { return mpfr_get_ld(v_, MPFR_RNDN); }
  /// Scientific decimal with `digits` significant digits.
  std::string to_string(int digits) const;

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);
  Real operator-() const;

  friend Real operator+(const Real& a, const Real& b);
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  friend Real operator/(const Real& a, const Real& b);

  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::partial_ordering operator<=>(const Real& a, const Real& b);

  friend Real abs(const Real& x);
  friend Real sqrt(const Real& x);
  friend Real log(const Real& x);
  friend Real log2(const Real& x);
  friend Real exp(const Real& x);
  friend Real sin(const Real& x);
  friend Real cos(const Real& x);
  friend Real atan2(const Real& y, const Real& x);
  friend Real hypot(const Real& a, const Real& b);
  friend Real pow(const Real& x, const Real& y);
  friend Real pow(const Real& x, long n);
  friend Real floor(const Real& x);
  friend Real ldexp(const Real& x, long e);

  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

 private:
  struct NoInit {};
  Real(NoInit, long bits);
  mpfr_t v_;
};

// Namespace-scope declarations so qualified calls (hp::sqrt) find the friends.
Real abs(const Real& x);
Real sqrt(const Real& x);
Real log(const Real& x);
Real log2(const Real& x);
Real exp(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
Real atan2(const Real& y, const Real& x);
Real hypot(const Real& a, const Real& b);
Real pow(const Real& x, const Real& y);
Real pow(const Real& x, long n);
Real floor(const Real& x);
Real ldexp(const Real& x, long e);

std::ostream& operator<<(std::ostream& os, const Real& x);

Real max(const Real& a, const Real& b);
Real min(const Real& a, const Real& b);

struct Complex {
  Real re;
  Real im;

  Complex() = default;
  Complex(Real r) : re(std::move(r)), im(Real::with_bits(re.bits())) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  Complex(int r) : Complex(Real(r)) {}
  Complex(double r) : Complex(Real(r)) {}

  Complex& operator+=(const Complex& o);
  Complex& operator-=(const Complex& o);
  Complex& operator*=(const Complex& o);
  Complex& operator/=(const Complex& o);
  Complex operator-() const { return {-re, -im}; }

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  long bits() const { return std::max(re.bits(), im.bits()); }
};

Complex operator+(const Complex& a, const Complex& b);
Complex operator-(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Complex& b);
Complex operator/(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Real& b);
Complex operator*(const Real& a, const Complex& b);
Complex operator/(const Complex& a, const Real& b);

Complex conj(const Complex& z);
Real abs(const Complex& z);
Real norm(const Complex& z);  // |z|^2
Real arg(const Complex& z);
Complex polar(const Real& r, const Real& theta);
Complex pow(const Complex& z, long n);
Complex sqrt(const Complex& z);

std::ostream& operator<<(std::ostream& os, const Complex& z);

/// Angle reduced to [0, 2*pi).
Real wrap_angle(const Real& theta);

}  // namespace kdyn::hp
