#pragma once

#include <string>
#include <utility>
#include <vector>

#include "kdyn/exact/gauss_rational.hpp"

namespace kdyn {

/// Univariate polynomial over Q(i), coefficients stored low degree first.
/// The zero polynomial has no coefficients and degree -1.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<GaussRational> coeffs);
  Poly(GaussRational constant);
  Poly(long constant) : Poly(GaussRational(constant)) {}
  Poly(int constant) : Poly(GaussRational(constant)) {}

  static Poly x() { return Poly(std::vector<GaussRational>{0, 1}); }
  /// x - r
  static Poly linear(const GaussRational& root);
  static Poly monomial(int degree, GaussRational coeff = 1);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_real() const;
  bool is_monic() const { return !c_.empty() && c_.back().is_one(); }
  const std::vector<GaussRational>& coeffs() const { return c_; }
  const GaussRational& lead() const { return c_.back(); }
  GaussRational coeff(int k) const;

  Poly monic() const;
  Poly conj() const;
  Poly derivative() const;
  /// x^deg * p(1/x)
  Poly reversed() const;
  /// p(x + shift)
  Poly shifted(const GaussRational& shift) const;
  /// p(c * x)
  Poly scaled(const GaussRational& c) const;

  GaussRational eval(const GaussRational& x) const;
  hp::Complex eval(const hp::Complex& x) const;

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  Poly operator-() const;
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, const Poly& b) { return a *= b; }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  /// Euclidean division; throws on division by zero.
  std::pair<Poly, Poly> divmod(const Poly& d) const;
  Poly operator/(const Poly& d) const { return divmod(d).first; }
  Poly operator%(const Poly& d) const { return divmod(d).second; }

  Poly pow(unsigned n) const;

  /// Pretty form in the variable `var`, e.g. "x^2 - 3*x + 1".
  std::string to_string(const std::string& var = "x") const;

 private:
  void normalize();
  std::vector<GaussRational> c_;
};

/// Monic gcd (zero if both are zero).
Poly gcd(const Poly& a, const Poly& b);

/// Extended gcd: returns (g, s, t) with s*a + t*b = g, g monic.
struct XGcd {
  Poly g, s, t;
};
XGcd xgcd(const Poly& a, const Poly& b);

/// Yun's algorithm: returns (s_1, s_2, ...) monic squarefree and pairwise coprime
/// with p = lead * prod s_i^i. Entry i-1 holds s_i (possibly 1).
std::vector<Poly> squarefree_decomposition(const Poly& p);

/// Monic squarefree part.
Poly squarefree_part(const Poly& p);

/// Power sums p_1..p_n of the roots of a monic polynomial (Newton identities).
std::vector<GaussRational> power_sums(const Poly& monic_p, int count);

/// Monic polynomial of degree n from the power sums p_1..p_n of its roots.
Poly from_power_sums(const std::vector<GaussRational>& sums, int n);

/// Monic polynomial whose roots are all products a_i * b_j.
Poly product_root_poly(const Poly& a, const Poly& b);

/// Cyclotomic polynomial Phi_n (integer coefficients).
Poly cyclotomic(int n);

/// Euler's totient.
int totient(int n);

}  // namespace kdyn
