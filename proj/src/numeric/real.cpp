#include "kdyn/numeric/real.hpp"

#include <ostream>
#include <stdexcept>
#include <vector>

namespace kdyn::hp {

namespace {
thread_local long g_default_bits = 128;

long max_bits(const Real& a, const Real& b) { return std::max(a.bits(), b.bits()); }
}  // namespace

long default_bits() { return g_default_bits; }

void set_default_bits(long bits) {
  if (bits < MPFR_PREC_MIN) throw std::invalid_argument("precision too small");
  g_default_bits = bits;
}

PrecisionGuard::PrecisionGuard(long bits) : saved_(g_default_bits) { set_default_bits(bits); }
PrecisionGuard::~PrecisionGuard() { g_default_bits = saved_; }

Real::Real(NoInit, long bits) { mpfr_init2(v_, bits); }

Real::Real() : Real(NoInit{}, g_default_bits) { mpfr_set_zero(v_, 1); }
Real::Real(int x) : Real(NoInit{}, g_default_bits) { mpfr_set_si(v_, x, MPFR_RNDN); }
Real::Real(long x) : Real(NoInit{}, g_default_bits) { mpfr_set_si(v_, x, MPFR_RNDN); }
Real::Real(double x) : Real(NoInit{}, g_default_bits) { mpfr_set_d(v_, x, MPFR_RNDN); }
Real::Real(const mpz_class& x) : Real(NoInit{}, g_default_bits) {
  mpfr_set_z(v_, x.get_mpz_t(), MPFR_RNDN);
}
Real::Real(const mpq_class& x) : Real(NoInit{}, g_default_bits) {
  mpfr_set_q(v_, x.get_mpq_t(), MPFR_RNDN);
}
Real::Real(const std::string& decimal) : Real(NoInit{}, g_default_bits) {
  if (mpfr_set_str(v_, decimal.c_str(), 10, MPFR_RNDN) != 0)
    throw std::invalid_argument("not a decimal number: " + decimal);
}

Real Real::from_long_double(long double x) {
  Real r(NoInit{}, g_default_bits);
  mpfr_set_ld(r.v_, x, MPFR_RNDN);
  return r;
}

Real Real::with_bits(long bits) {
  Real r(NoInit{}, bits);
  mpfr_set_zero(r.v_, 1);
  return r;
}

Real Real::pi(long bits) {
  Real r(NoInit{}, bits > 0 ? bits : g_default_bits);
  mpfr_const_pi(r.v_, MPFR_RNDN);
  return r;
}

Real::Real(const Real& o) : Real(NoInit{}, o.bits()) { mpfr_set(v_, o.v_, MPFR_RNDN); }

Real::Real(Real&& o) noexcept : Real(NoInit{}, o.bits()) { mpfr_swap(v_, o.v_); }

Real& Real::operator=(const Real& o) {
  if (this != &o) {
    mpfr_set_prec(v_, o.bits());
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& o) noexcept {
  mpfr_swap(v_, o.v_);
  return *this;
}

Real::~Real() { mpfr_clear(v_); }

void Real::set_bits(long bits) { mpfr_prec_round(v_, bits, MPFR_RNDN); }

std::string Real::to_string(int digits) const {
  if (!is_finite()) return mpfr_nan_p(v_) ? "nan" : (sign() > 0 ? "inf" : "-inf");
  if (is_zero()) return "0";
  std::vector<char> buf(static_cast<std::size_t>(digits) + 64);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Re", digits - 1, v_);
  return std::string(buf.data());
}

Real& Real::operator+=(const Real& o) {
  if (o.bits() > bits()) mpfr_prec_round(v_, o.bits(), MPFR_RNDN);
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator-=(const Real& o) {
  if (o.bits() > bits()) mpfr_prec_round(v_, o.bits(), MPFR_RNDN);
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator*=(const Real& o) {
  if (o.bits() > bits()) mpfr_prec_round(v_, o.bits(), MPFR_RNDN);
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator/=(const Real& o) {
  if (o.bits() > bits()) mpfr_prec_round(v_, o.bits(), MPFR_RNDN);
  mpfr_div(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real Real::operator-() const {
  Real r(NoInit{}, bits());
  mpfr_neg(r.v_, v_, MPFR_RNDN);
  return r;
}

#define KDYN_BINOP(op, fn)                           \
  Real operator op(const Real& a, const Real& b) {   \
    Real r(Real::NoInit{}, max_bits(a, b));          \
    fn(r.v_, a.v_, b.v_, MPFR_RNDN);                 \
    return r;                                        \
  }
KDYN_BINOP(+, mpfr_add)
KDYN_BINOP(-, mpfr_sub)
KDYN_BINOP(*, mpfr_mul)
KDYN_BINOP(/, mpfr_div)
#undef KDYN_BINOP

std::partial_ordering operator<=>(const Real& a, const Real& b) {
  if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
  int c = mpfr_cmp(a.v_, b.v_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

#define KDYN_UNARY(name, fn)               \
  Real name(const Real& x) {               \
    Real r(Real::NoInit{}, x.bits());      \
    fn(r.v_, x.v_, MPFR_RNDN);             \
    return r;                              \
  }
KDYN_UNARY(abs, mpfr_abs)
KDYN_UNARY(sqrt, mpfr_sqrt)
KDYN_UNARY(log, mpfr_log)
KDYN_UNARY(log2, mpfr_log2)
KDYN_UNARY(exp, mpfr_exp)
KDYN_UNARY(sin, mpfr_sin)
KDYN_UNARY(cos, mpfr_cos)
#undef KDYN_UNARY

Real floor(const Real& x) {
  Real r(Real::NoInit{}, x.bits());
  mpfr_floor(r.v_, x.v_);
  return r;
}

Real atan2(const Real& y, const Real& x) {
  Real r(Real::NoInit{}, max_bits(y, x));
  mpfr_atan2(r.v_, y.v_, x.v_, MPFR_RNDN);
  return r;
}

Real hypot(const Real& a, const Real& b) {
  Real r(Real::NoInit{}, max_bits(a, b));
  mpfr_hypot(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

Real pow(const Real& x, const Real& y) {
  Real r(Real::NoInit{}, max_bits(x, y));
  mpfr_pow(r.v_, x.v_, y.v_, MPFR_RNDN);
  return r;
}

Real pow(const Real& x, long n) {
  Real r(Real::NoInit{}, x.bits());
  mpfr_pow_si(r.v_, x.v_, n, MPFR_RNDN);
  return r;
}

Real ldexp(const Real& x, long e) {
  Real r(Real::NoInit{}, x.bits());
  mpfr_mul_2si(r.v_, x.v_, e, MPFR_RNDN);
  return r;
}

std::ostream& operator<<(std::ostream& os, const Real& x) {
  return os << x.to_string(static_cast<int>(x.bits() * 0.30103) + 1);
}

Real max(const Real& a, const Real& b) { return a < b ? b : a; }
Real min(const Real& a, const Real& b) { return b < a ? b : a; }

Complex& Complex::operator+=(const Complex& o) {
  re += o.re;
  im += o.im;
  return *this;
}
Complex& Complex::operator-=(const Complex& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}
Complex& Complex::operator*=(const Complex& o) { return *this = *this * o; }
Complex& Complex::operator/=(const Complex& o) { return *this = *this / o; }

Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
Complex operator*(const Complex& a, const Complex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
Complex operator/(const Complex& a, const Complex& b) {
  // Smith's algorithm keeps intermediate magnitudes bounded.
  if (abs(b.re) >= abs(b.im)) {
    Real r = b.im / b.re;
    Real d = b.re + b.im * r;
    return {(a.re + a.im * r) / d, (a.im - a.re * r) / d};
  }
  Real r = b.re / b.im;
  Real d = b.re * r + b.im;
  return {(a.re * r + a.im) / d, (a.im * r - a.re) / d};
}
Complex operator*(const Complex& a, const Real& b) { return {a.re * b, a.im * b}; }
Complex operator*(const Real& a, const Complex& b) { return {a * b.re, a * b.im}; }
Complex operator/(const Complex& a, const Real& b) { return {a.re / b, a.im / b}; }

Complex conj(const Complex& z) { return {z.re, -z.im}; }
Real abs(const Complex& z) { return hypot(z.re, z.im); }
Real norm(const Complex& z) { return z.re * z.re + z.im * z.im; }
Real arg(const Complex& z) { return atan2(z.im, z.re); }
Complex polar(const Real& r, const Real& theta) { return {r * cos(theta), r * sin(theta)}; }

Complex pow(const Complex& z, long n) {
  if (n < 0) return Complex(Real(1)) / pow(z, -n);
  Complex result(Real::with_bits(z.bits()) + Real(1), Real::with_bits(z.bits()));
  Complex base = z;
  while (n > 0) {
    if (n & 1) result = result * base;
    base = base * base;
    n >>= 1;
  }
  return result;
}

Complex sqrt(const Complex& z) {
  Real r = abs(z);
  if (r.is_zero()) return z;
  Real a = sqrt((r + abs(z.re)) / Real(2));
  if (z.re.sign() >= 0) return {a, z.im / (a * Real(2))};
  Real b = z.im.sign() >= 0 ? a : -a;
  return {abs(z.im) / (a * Real(2)), b};
}

std::ostream& operator<<(std::ostream& os, const Complex& z) {
  return os << '(' << z.re << ", " << z.im << ')';
}

Real wrap_angle(const Real& theta) {
  Real two_pi = Real::pi(theta.bits()) * Real(2);
  Real t = theta - two_pi * floor(theta / two_pi);
  if (t >= two_pi) t -= two_pi;
  if (t.sign() < 0) t += two_pi;
  return t;
}

}  // namespace kdyn::hp
