#include "kdyn/algebraic.hpp"

#include <cmath>
#include <numeric>

#include "kdyn/error.hpp"
#include "kdyn/numeric/roots.hpp"

namespace kdyn::algebraic {
namespace {

constexpr long kMaxBits = 8192;

hp::Real approx_error(const hp::Complex& z, long bits) {
  return ldexp(max(hp::Real(1), abs(z)), -(bits - 24));
}

}  // namespace

hp::Complex AlgebraicNumber::at(long bits) const {
  if (approx.bits() >= bits) {
    hp::Complex z = approx;
    z.re.set_bits(bits);
    z.im.set_bits(bits);
    return z;
  }
  auto roots = hp::roots_squarefree(poly, bits);
  hp::PrecisionGuard guard(bits);
  std::size_t best = 0;
  hp::Real best_d = abs(roots[0] - approx);
  for (std::size_t i = 1; i < roots.size(); ++i) {
    hp::Real d = abs(roots[i] - approx);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return roots[best];
}

bool same_root(const Poly& p, const std::function<hp::Complex(long)>& x, const std::function<hp::Complex(long)>& y,
               long bits) {
  for (long b = std::max(bits, 64L); b <= kMaxBits; b *= 2) {
    hp::RootLocator loc(p, b);
    hp::Complex xb = x(b), yb = y(b);
    auto ix = loc.locate(xb, approx_error(xb, b));
    auto iy = loc.locate(yb, approx_error(yb, b));
    if (ix && iy) return *ix == *iy;
  }
  throw Error(ErrorCode::Internal, "root identification did not stabilise");
}

Decision same_number(const AlgebraicNumber& a, const AlgebraicNumber& b, long bits) {
  Poly p = squarefree_part(a.poly * b.poly);
  if (p.degree() > kMaxAuxDegree) {
    long hb = 4 * bits;
    hp::PrecisionGuard guard(hb);
    hp::Complex d = a.at(hb) - b.at(hb);
    return {abs(d) < approx_error(a.approx, 2 * bits), false};
  }
  return {same_root(p, [&](long k) { return a.at(k); }, [&](long k) { return b.at(k); }, bits), true};
}

Decision is_real(const AlgebraicNumber& a, long bits) {
  if (a.poly.is_real() && a.poly.degree() == 1) return {true, true};
  AlgebraicNumber c{a.poly.conj(), hp::conj(a.approx)};
  return same_number(a, c, bits);
}

Decision same_modulus(const AlgebraicNumber& a, const AlgebraicNumber& b, long bits) {
  // b equal to a or to conj(a) settles it cheaply.
  AlgebraicNumber ac{a.poly.conj(), hp::conj(a.approx)};
  Poly small = squarefree_part(a.poly * a.poly.conj() * b.poly);
  if (small.degree() <= kMaxAuxDegree) {
    auto ax = [&](long k) { return a.at(k); };
    auto acx = [&](long k) { return ac.at(k); };
    auto bx = [&](long k) { return b.at(k); };
    if (same_root(small, ax, bx, bits) || same_root(small, acx, bx, bits)) return {true, true};
  }
  const int da = a.poly.degree(), db = b.poly.degree();
  if (da * da + db * db > kMaxAuxDegree) {
    long hb = 4 * bits;
    hp::PrecisionGuard guard(hb);
    hp::Real d = hp::norm(a.at(hb)) - hp::norm(b.at(hb));
    return {abs(d) < approx_error(hp::Complex(hp::norm(a.approx)), 2 * bits), false};
  }
  Poly na = product_root_poly(a.poly, a.poly.conj());
  Poly nb = product_root_poly(b.poly, b.poly.conj());
  Poly p = squarefree_part(na * nb);
  auto mod_a = [&](long k) {
    hp::PrecisionGuard guard(k);
    return hp::Complex(hp::norm(a.at(k)));
  };
  auto mod_b = [&](long k) {
    hp::PrecisionGuard guard(k);
    return hp::Complex(hp::norm(b.at(k)));
  };
  return {same_root(p, mod_a, mod_b, bits), true};
}

UnitOrder unit_direction_order(const AlgebraicNumber& a, long bits) {
  const int d = a.poly.degree();
  auto zeta_at = [&](long k) {
    hp::PrecisionGuard guard(k);
    hp::Complex z = a.at(k);
    return z / hp::conj(z);
  };
  // Angle of a, as a fraction of pi: zeta^N = 1 iff N * arg(a) / pi is an integer.
  hp::PrecisionGuard guard(bits);
  hp::Complex z = a.at(bits);
  hp::Real x = hp::arg(z) / hp::Real::pi(bits);
  const hp::Real near = ldexp(hp::Real(1), -(bits / 2));

  auto direction_order = [&](long n_zeta) {
    // a/|a| has order n_zeta or 2 n_zeta; (a/|a|)^n_zeta is exactly +1 or -1.
    hp::Complex u = z / hp::Complex(abs(z));
    hp::Complex w = hp::pow(u, n_zeta);
    return w.re.sign() > 0 ? n_zeta : 2 * n_zeta;
  };

  if (d * d > kMaxAuxDegree) {
    // Numeric fallback: accept the smallest N below a fixed bound.
    for (long n = 1; n <= 100000; ++n) {
      hp::Real t = x * hp::Real(n);
      if (abs(t - floor(t + hp::Real(0.5))) < near) return {direction_order(n), false};
    }
    return {0, false};
  }

  Poly r = squarefree_part(product_root_poly(a.poly, a.poly.conj().reversed().monic()));
  // zeta has degree at most 2 deg(r) over Q; a primitive N-th root of unity has degree phi(N),
  // and phi(N) >= sqrt(N / 2), so N <= 2 D^2.
  const long D = 2L * r.degree();
  const long n_max = 2 * D * D;
  const long double xl = x.to_long_double();
  for (long n = 1; n <= n_max; ++n) {
    long double tl = xl * static_cast<long double>(n);
    if (std::fabs(tl - std::round(tl)) > 1e-9L) continue;
    hp::Real t = x * hp::Real(n);
    if (abs(t - floor(t + hp::Real(0.5))) >= near) continue;
    if (totient(static_cast<int>(n)) > D) continue;
    Poly g = gcd(r, cyclotomic(static_cast<int>(n)));
    if (g.degree() < 1) continue;
    // zeta is a primitive n-th root of unity iff it is a root of g.
    bool hit = false;
    for (long b = bits;; b *= 2) {
      if (b > kMaxBits) throw Error(ErrorCode::Internal, "cyclotomic test did not stabilise");
      hp::RootLocator rl(r, b);
      hp::Complex zb = zeta_at(b);
      auto iz = rl.locate(zb, approx_error(zb, b));
      if (!iz) continue;
      auto groots = hp::roots_squarefree(g, b);
      bool ok = true;
      for (const auto& gr : groots) {
        auto ig = rl.locate(gr, approx_error(gr, b));
        if (!ig) {
          ok = false;
          break;
        }
        if (*ig == *iz) hit = true;
      }
      if (ok) break;
      hit = false;
    }
    if (hit) return {direction_order(n), true};
  }
  return {0, true};
}

}  // namespace kdyn::algebraic
