#include "kdyn/numeric/roots.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace kdyn::hp {
namespace {

using cld = std::complex<long double>;

std::vector<cld> aberth_ld(const std::vector<cld>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  long double radius = 0;
  for (int k = 1; k <= n; ++k) {
    long double r = std::pow(std::abs(c[static_cast<std::size_t>(n - k)] / c.back()), 1.0L / k);
    radius = std::max(radius, r);
  }
  radius = 2 * radius + 1e-3L;
  std::vector<cld> z(static_cast<std::size_t>(n));
  const long double two_pi = 6.283185307179586476925286766559L;
  for (int k = 0; k < n; ++k) z[static_cast<std::size_t>(k)] = std::polar(radius * 0.5L, two_pi * k / n + 0.4L);
  auto eval = [&](const cld& x, cld& p, cld& dp) {
    p = c.back();
    dp = 0;
    for (int k = n - 1; k >= 0; --k) {
      dp = dp * x + p;
      p = p * x + c[static_cast<std::size_t>(k)];
    }
  };
  for (int iter = 0; iter < 800; ++iter) {
    long double worst = 0;
    for (int k = 0; k < n; ++k) {
      cld p, dp;
      auto& zk = z[static_cast<std::size_t>(k)];
      eval(zk, p, dp);
      if (p == cld(0)) continue;
      cld ratio = p / dp;
      cld s = 0;
      for (int j = 0; j < n; ++j)
        if (j != k) s += 1.0L / (zk - z[static_cast<std::size_t>(j)]);
      cld w = ratio / (1.0L - ratio * s);
      if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) continue;
      zk -= w;
      worst = std::max(worst, std::abs(w) / std::max(1.0L, std::abs(zk)));
    }
    if (worst < 1e-18L) break;
  }
  return z;
}

std::vector<Complex> hp_coeffs(const Poly& p, long bits) {
  PrecisionGuard guard(bits);
  std::vector<Complex> c;
  c.reserve(p.coeffs().size());
  for (const auto& a : p.coeffs()) c.push_back(a.to_complex());
  return c;
}

void horner(const std::vector<Complex>& c, const Complex& x, Complex& p, Complex& dp) {
  p = c.back();
  dp = Complex(Real::with_bits(x.bits()));
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    dp = dp * x + p;
    p = p * x + c[k];
  }
}

Real max_modulus(const std::vector<Complex>& z) {
  Real m = 0;
  for (const auto& v : z) m = max(m, abs(v));
  return m;
}

Real min_separation(const std::vector<Complex>& z, long bits) {
  PrecisionGuard guard(bits);
  Real best = -1;
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size(); ++j) {
      Real d = abs(z[i] - z[j]);
      if (best < 0 || d < best) best = d;
    }
  return best < 0 ? Real(1e300) : best;
}

std::vector<Complex> aberth_hp(const std::vector<Complex>& c, const std::vector<Complex>& start, long bits) {
  PrecisionGuard guard(bits);
  std::vector<Complex> z = start;
  const std::size_t n = z.size();
  const Real tol = ldexp(Real(1), -(bits - 8));
  for (int iter = 0; iter < 2000; ++iter) {
    Real worst = 0;
    for (std::size_t k = 0; k < n; ++k) {
      Complex p, dp;
      horner(c, z[k], p, dp);
      if (p.is_zero()) continue;
      Complex ratio = p / dp;
      Complex s(Real(0));
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) s += Complex(Real(1)) / (z[k] - z[j]);
      Complex w = ratio / (Complex(Real(1)) - ratio * s);
      z[k] -= w;
      worst = max(worst, abs(w) / max(Real(1), abs(z[k])));
    }
    if (worst < tol) break;
  }
  return z;
}

}  // namespace

std::vector<Complex> roots_squarefree(const Poly& p, long bits) {
  const int n = p.degree();
  if (n < 1) return {};
  const long work = bits + 32;
  PrecisionGuard guard(work);
  auto c = hp_coeffs(p.monic(), work);
  if (n == 1) return {-c[0]};

  std::vector<cld> cl;
  cl.reserve(c.size());
  for (const auto& a : c) cl.emplace_back(a.re.to_long_double(), a.im.to_long_double());
  auto approx = aberth_ld(cl);

  std::vector<Complex> z;
  z.reserve(approx.size());
  for (const auto& a : approx) z.emplace_back(Real::from_long_double(a.real()), Real::from_long_double(a.imag()));

  const Real tol = ldexp(Real(1), -(work - 8));
  bool ok = true;
  for (auto& zk : z) {
    bool converged = false;
    for (int iter = 0; iter < 60; ++iter) {
      Complex v, dv;
      horner(c, zk, v, dv);
      if (v.is_zero()) {
        converged = true;
        break;
      }
      if (dv.is_zero()) break;
      Complex step = v / dv;
      zk -= step;
      if (abs(step) <= tol * max(Real(1), abs(zk))) {
        converged = true;
        break;
      }
    }
    ok = ok && converged;
  }
  // Newton from nearby starts can land on the same root; fall back if so.
  Real scale = max(Real(1), max_modulus(z));
  if (!ok || min_separation(z, work) < ldexp(scale, -(work / 2))) z = aberth_hp(c, z, work);
  for (auto& zk : z) {
    zk.re.set_bits(bits);
    zk.im.set_bits(bits);
  }
  return z;
}

RootLocator::RootLocator(const Poly& squarefree, long bits) : bits_(bits) {
  roots_ = roots_squarefree(squarefree, bits);
  separation_ = min_separation(roots_, bits);
  PrecisionGuard guard(bits);
  root_err_ = ldexp(max(Real(1), max_modulus(roots_)), -(bits - 16));
}

std::optional<std::size_t> RootLocator::locate(const Complex& z, const Real& err) const {
  if (roots_.empty()) return std::nullopt;
  PrecisionGuard guard(bits_);
  std::size_t best = 0;
  Real best_d = abs(z - roots_[0]);
  for (std::size_t i = 1; i < roots_.size(); ++i) {
    Real d = abs(z - roots_[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  // Any other root is at least `separation_` from roots_[best]; the true value
  // is within err + root_err_ of z, so it is identified when that radius is
  // less than half the separation.
  Real radius = err + root_err_;
  if (best_d > radius) return std::nullopt;
  if (Real(2) * (radius + best_d) >= separation_) return std::nullopt;
  return best;
}

}  // namespace kdyn::hp
