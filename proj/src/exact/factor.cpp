#include "kdyn/exact/factor.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>

namespace kdyn {
namespace {

// Integer polynomials, low degree first, no trailing zeros.
using ZPoly = std::vector<mpz_class>;

void trim(ZPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

ZPoly zmul(const ZPoly& a, const ZPoly& b) {
  if (a.empty() || b.empty()) return {};
  ZPoly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  trim(out);
  return out;
}

// Exact division by a monic divisor over Z; returns false if the remainder is nonzero.
bool zdiv_monic(const ZPoly& a, const ZPoly& monic_d, ZPoly& quotient) {
  ZPoly r = a;
  const std::size_t dd = monic_d.size() - 1;
  if (r.size() < monic_d.size()) return false;
  quotient.assign(r.size() - dd, 0);
  for (std::size_t k = r.size(); k-- > dd;) {
    mpz_class c = r[k];
    quotient[k - dd] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j <= dd; ++j) r[k - dd + j] -= c * monic_d[j];
  }
  for (std::size_t k = 0; k < dd; ++k)
    if (r[k] != 0) return false;
  return true;
}

// Arithmetic over F_p with p < 2^31.
using FPoly = std::vector<std::uint64_t>;

struct Fp {
  std::uint64_t p;
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return (a + b) % p; }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return (a + p - b) % p; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return a * b % p; }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const {
    std::uint64_t r = 1;
    a %= p;
    while (e) {
      if (e & 1U) r = mul(r, a);
      a = mul(a, a);
      e >>= 1U;
    }
    return r;
  }
  std::uint64_t inv(std::uint64_t a) const { return pow(a, p - 2); }

  void trim(FPoly& a) const {
    while (!a.empty() && a.back() == 0) a.pop_back();
  }
  FPoly reduce(const ZPoly& z) const {
    FPoly out(z.size());
    mpz_class pp = static_cast<unsigned long>(p);
    for (std::size_t i = 0; i < z.size(); ++i) {
      mpz_class r;
      mpz_fdiv_r(r.get_mpz_t(), z[i].get_mpz_t(), pp.get_mpz_t());
      out[i] = r.get_ui();
    }
    trim(out);
    return out;
  }
  FPoly add(const FPoly& a, const FPoly& b) const {
    FPoly out(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] = add(out[i], b[i]);
    trim(out);
    return out;
  }
  FPoly sub(const FPoly& a, const FPoly& b) const {
    FPoly out(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] = sub(out[i], b[i]);
    trim(out);
    return out;
  }
  FPoly mul(const FPoly& a, const FPoly& b) const {
    if (a.empty() || b.empty()) return {};
    FPoly out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!a[i]) continue;
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = (out[i + j] + a[i] * b[j]) % p;
    }
    trim(out);
    return out;
  }
  void divmod(const FPoly& a, const FPoly& d, FPoly& q, FPoly& r) const {
    if (d.empty()) throw std::domain_error("polynomial division by zero mod p");
    r = a;
    trim(r);
    if (r.size() < d.size()) {
      q.clear();
      return;
    }
    q.assign(r.size() - d.size() + 1, 0);
    const std::uint64_t li = inv(d.back());
    for (std::size_t k = r.size(); k-- >= d.size();) {
      std::uint64_t c = mul(r[k], li);
      q[k - d.size() + 1] = c;
      if (!c) continue;
      for (std::size_t j = 0; j < d.size(); ++j) {
        std::size_t idx = k - d.size() + 1 + j;
        r[idx] = sub(r[idx], mul(c, d[j]));
      }
    }
    trim(q);
    trim(r);
  }
  FPoly rem(const FPoly& a, const FPoly& d) const {
    FPoly q, r;
    divmod(a, d, q, r);
    return r;
  }
  FPoly quo(const FPoly& a, const FPoly& d) const {
    FPoly q, r;
    divmod(a, d, q, r);
    return q;
  }
  FPoly monic(FPoly a) const {
    trim(a);
    if (a.empty()) return a;
    std::uint64_t li = inv(a.back());
    for (auto& c : a) c = mul(c, li);
    return a;
  }
  FPoly gcd(FPoly a, FPoly b) const {
    trim(a);
    trim(b);
    while (!b.empty()) {
      FPoly r = rem(a, b);
      a = std::move(b);
      b = std::move(r);
    }
    return monic(a);
  }
  // s*a + t*b = 1 for coprime a, b.
  void bezout(const FPoly& a, const FPoly& b, FPoly& s, FPoly& t) const {
    FPoly r0 = a, r1 = b, s0{1}, s1{}, t0{}, t1{1};
    while (!r1.empty()) {
      FPoly q, r;
      divmod(r0, r1, q, r);
      FPoly s2 = sub(s0, mul(q, s1)), t2 = sub(t0, mul(q, t1));
      r0 = std::move(r1);
      r1 = std::move(r);
      s0 = std::move(s1);
      s1 = std::move(s2);
      t0 = std::move(t1);
      t1 = std::move(t2);
    }
    if (r0.size() != 1) throw std::logic_error("bezout on non-coprime polynomials");
    std::uint64_t ci = inv(r0[0]);
    s = mul(s0, FPoly{ci});
    t = mul(t0, FPoly{ci});
  }
  FPoly derivative(const FPoly& a) const {
    if (a.size() <= 1) return {};
    FPoly out(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) out[i - 1] = mul(a[i], i % p);
    trim(out);
    return out;
  }
  FPoly powmod(FPoly base, const mpz_class& e, const FPoly& m) const {
    FPoly result{1};
    base = rem(base, m);
    const std::size_t nbits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (std::size_t bit = nbits; bit-- > 0;) {
      result = rem(mul(result, result), m);
      if (mpz_tstbit(e.get_mpz_t(), bit)) result = rem(mul(result, base), m);
    }
    return result;
  }
};

// Distinct-degree factorization of a monic squarefree polynomial.
std::vector<std::pair<FPoly, int>> distinct_degree(const Fp& F, FPoly f) {
  std::vector<std::pair<FPoly, int>> out;
  const FPoly x{0, 1};
  FPoly h = x;
  mpz_class p = static_cast<unsigned long>(F.p);
  for (int d = 1; static_cast<int>(f.size()) - 1 >= 2 * d; ++d) {
    h = F.powmod(h, p, f);
    FPoly g = F.gcd(F.sub(h, x), f);
    if (g.size() > 1) {
      out.emplace_back(g, d);
      f = F.quo(f, g);
      h = F.rem(h, f);
    }
  }
  if (f.size() > 1) out.emplace_back(f, static_cast<int>(f.size()) - 1);
  return out;
}

void equal_degree(const Fp& F, const FPoly& g, int d, std::mt19937_64& rng, std::vector<FPoly>& out) {
  const int n = static_cast<int>(g.size()) - 1;
  if (n == d) {
    out.push_back(g);
    return;
  }
  mpz_class e;
  mpz_ui_pow_ui(e.get_mpz_t(), F.p, static_cast<unsigned long>(d));
  e = (e - 1) / 2;
  std::uniform_int_distribution<std::uint64_t> dist(0, F.p - 1);
  for (;;) {
    FPoly a(static_cast<std::size_t>(n));
    for (auto& c : a) c = dist(rng);
    F.trim(a);
    if (a.size() <= 1) continue;
    FPoly b = F.sub(F.powmod(a, e, g), FPoly{1});
    FPoly h = F.gcd(b, g);
    if (h.size() > 1 && h.size() < g.size()) {
      equal_degree(F, h, d, rng, out);
      equal_degree(F, F.quo(g, h), d, rng, out);
      return;
    }
  }
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q = 2; q * q <= n; ++q)
    if (n % q == 0) return false;
  return true;
}

ZPoly lift_to_z(const FPoly& a) {
  ZPoly out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = static_cast<unsigned long>(a[i]);
  return out;
}

void reduce_mod(ZPoly& a, const mpz_class& m) {
  for (auto& c : a) mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
  trim(a);
}

// Lifts F = G0*H0 (mod p) with monic G0, H0 to F = G*H (mod p^a).
void hensel_pair(const Fp& F, const ZPoly& target, const FPoly& G0, const FPoly& H0, int a, ZPoly& G,
                 ZPoly& H) {
  FPoly s, t;
  F.bezout(G0, H0, s, t);
  G = lift_to_z(G0);
  H = lift_to_z(H0);
  mpz_class pj = static_cast<unsigned long>(F.p);
  for (int j = 1; j < a; ++j) {
    ZPoly e = target;
    ZPoly gh = zmul(G, H);
    if (e.size() < gh.size()) e.resize(gh.size(), 0);
    for (std::size_t k = 0; k < gh.size(); ++k) e[k] -= gh[k];
    for (auto& c : e) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), pj.get_mpz_t());
    trim(e);
    FPoly ef = F.reduce(e);
    FPoly dG = F.rem(F.mul(t, ef), G0);
    FPoly dH = F.quo(F.sub(ef, F.mul(dG, H0)), G0);
    if (G.size() < dG.size()) G.resize(dG.size(), 0);
    for (std::size_t k = 0; k < dG.size(); ++k) G[k] += pj * static_cast<unsigned long>(dG[k]);
    if (H.size() < dH.size()) H.resize(dH.size(), 0);
    for (std::size_t k = 0; k < dH.size(); ++k) H[k] += pj * static_cast<unsigned long>(dH[k]);
    pj *= static_cast<unsigned long>(F.p);
  }
}

void hensel_tree(const Fp& F, const ZPoly& target, const std::vector<FPoly>& mods, std::size_t begin,
                 std::size_t end, int a, const mpz_class& pa, std::vector<ZPoly>& out) {
  if (end - begin == 1) {
    ZPoly leaf = target;
    reduce_mod(leaf, pa);
    out.push_back(std::move(leaf));
    return;
  }
  const std::size_t mid = begin + (end - begin) / 2;
  FPoly G0{1}, H0{1};
  for (std::size_t i = begin; i < mid; ++i) G0 = F.mul(G0, mods[i]);
  for (std::size_t i = mid; i < end; ++i) H0 = F.mul(H0, mods[i]);
  ZPoly G, H;
  hensel_pair(F, target, G0, H0, a, G, H);
  reduce_mod(G, pa);
  reduce_mod(H, pa);
  hensel_tree(F, G, mods, begin, mid, a, pa, out);
  hensel_tree(F, H, mods, mid, end, a, pa, out);
}

ZPoly symmetric_product(const std::vector<ZPoly>& lifted, const std::vector<std::size_t>& pick,
                        const mpz_class& pa) {
  ZPoly g{1};
  for (auto i : pick) {
    g = zmul(g, lifted[i]);
    reduce_mod(g, pa);
  }
  mpz_class half = pa / 2;
  for (auto& c : g)
    if (c > half) c -= pa;
  trim(g);
  return g;
}

// Irreducible factors over Z of a monic squarefree integer polynomial.
std::vector<ZPoly> zassenhaus_monic(const ZPoly& f) {
  const int n = static_cast<int>(f.size()) - 1;
  if (n <= 1) return {f};

  // Pick the prime (among a few admissible ones) giving the fewest modular factors.
  std::uint64_t best_p = 0;
  std::size_t best_count = 0;
  int tried = 0;
  for (std::uint64_t p = 3; tried < 5 && p < (1ULL << 31); p += 2) {
    if (!is_prime(p)) continue;
    Fp F{p};
    FPoly fp = F.reduce(f);
    if (fp.size() != f.size()) continue;
    if (F.gcd(fp, F.derivative(fp)).size() != 1) continue;
    ++tried;
    std::size_t count = 0;
    for (auto& [g, d] : distinct_degree(F, fp)) count += (g.size() - 1) / static_cast<std::size_t>(d);
    if (best_p == 0 || count < best_count) {
      best_p = p;
      best_count = count;
    }
    if (count == 1) break;
  }
  if (best_p == 0) throw std::logic_error("no admissible prime for factorization");
  if (best_count == 1) return {f};

  Fp F{best_p};
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::vector<FPoly> mods;
  for (auto& [g, d] : distinct_degree(F, F.reduce(f))) equal_degree(F, g, d, rng, mods);

  // Mignotte-type bound on factor coefficients: 2^n * (||f||_2 + 1).
  mpz_class norm2 = 0;
  for (const auto& c : f) norm2 += c * c;
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), norm2.get_mpz_t());
  mpz_class bound = (root + 2) << n;
  mpz_class pa = static_cast<unsigned long>(best_p);
  int a = 1;
  while (pa <= 2 * bound) {
    pa *= static_cast<unsigned long>(best_p);
    ++a;
  }

  std::vector<ZPoly> lifted;
  hensel_tree(F, f, mods, 0, mods.size(), a, pa, lifted);

  std::vector<ZPoly> found;
  std::vector<std::size_t> remaining(lifted.size());
  std::iota(remaining.begin(), remaining.end(), 0);
  ZPoly current = f;
  std::size_t s = 1;
  while (2 * s <= remaining.size()) {
    bool hit = false;
    std::vector<std::size_t> idx(s);
    std::iota(idx.begin(), idx.end(), 0);
    for (;;) {
      std::vector<std::size_t> pick(s);
      for (std::size_t k = 0; k < s; ++k) pick[k] = remaining[idx[k]];
      ZPoly g = symmetric_product(lifted, pick, pa);
      bool plausible = true;
      if (current[0] != 0 && !g.empty()) {
        if (g[0] == 0) plausible = false;
        else plausible = mpz_divisible_p(current[0].get_mpz_t(), g[0].get_mpz_t()) != 0;
      }
      ZPoly q;
      if (plausible && zdiv_monic(current, g, q)) {
        found.push_back(g);
        current = std::move(q);
        std::vector<std::size_t> rest;
        for (std::size_t k = 0, m = 0; k < remaining.size(); ++k) {
          if (m < s && idx[m] == k) {
            ++m;
            continue;
          }
          rest.push_back(remaining[k]);
        }
        remaining = std::move(rest);
        hit = true;
        break;
      }
      // next combination
      std::size_t k = s;
      while (k > 0 && idx[k - 1] == remaining.size() - s + k - 1) --k;
      if (k == 0) break;
      ++idx[k - 1];
      for (std::size_t j = k; j < s; ++j) idx[j] = idx[j - 1] + 1;
    }
    if (!hit) ++s;
  }
  if (current.size() > 1) found.push_back(current);
  return found;
}

ZPoly primitive_integer(const Poly& f) {
  mpz_class den = 1;
  for (const auto& c : f.coeffs()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.re().get_den_mpz_t());
  ZPoly z;
  z.reserve(f.coeffs().size());
  for (const auto& c : f.coeffs()) {
    mpq_class v = c.re() * den;
    z.push_back(v.get_num());
  }
  mpz_class g = 0;
  for (const auto& c : z) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (z.back() < 0) g = -g;
  for (auto& c : z) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  return z;
}

Poly to_monic_poly(const ZPoly& z) {
  std::vector<GaussRational> c;
  c.reserve(z.size());
  for (const auto& v : z) c.emplace_back(mpq_class(v));
  return Poly(std::move(c)).monic();
}

int compare_q(const mpq_class& a, const mpq_class& b) { return cmp(a, b); }

bool poly_less(const Poly& a, const Poly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (int k = a.degree(); k >= 0; --k) {
    const auto& x = a.coeffs()[static_cast<std::size_t>(k)];
    const auto& y = b.coeffs()[static_cast<std::size_t>(k)];
    if (int c = compare_q(x.re(), y.re())) return c < 0;
    if (int c = compare_q(x.im(), y.im())) return c < 0;
  }
  return false;
}

std::vector<Poly> trager(const Poly& h) {
  if (h.degree() <= 1) return {h.monic()};
  for (long step = 0;; ++step) {
    const long s = (step + 1) / 2 * (step % 2 ? 1 : -1);
    Poly hs = h.shifted(GaussRational(0, -s));
    Poly norm = hs * hs.conj();
    if (gcd(norm, norm.derivative()).degree() > 0) continue;
    auto pieces = factor_squarefree_rational(norm);
    if (pieces.size() == 1) return {h.monic()};
    std::vector<Poly> out;
    for (const auto& q : pieces) {
      Poly g = gcd(hs, q);
      if (g.degree() > 0) out.push_back(g.shifted(GaussRational(0, s)).monic());
    }
    return out;
  }
}

}  // namespace

std::vector<Poly> factor_squarefree_rational(const Poly& f) {
  if (!f.is_real()) throw std::invalid_argument("rational factorization of a non-real polynomial");
  if (f.degree() < 1) return {};
  if (f.degree() == 1) return {f.monic()};
  ZPoly z = primitive_integer(f);
  const int n = static_cast<int>(z.size()) - 1;
  const mpz_class lc = z.back();
  // F(x) = lc^(n-1) f(x / lc) is monic with integer coefficients.
  ZPoly monic(z.size());
  mpz_class scale = 1;
  for (int j = n - 1; j >= 0; --j) {
    monic[static_cast<std::size_t>(j)] = z[static_cast<std::size_t>(j)] * scale;
    scale *= lc;
  }
  monic[static_cast<std::size_t>(n)] = 1;
  std::vector<Poly> out;
  for (const auto& g : zassenhaus_monic(monic)) {
    // Undo the substitution: pp(G(lc * x)).
    ZPoly back(g.size());
    mpz_class pw = 1;
    for (std::size_t j = 0; j < g.size(); ++j) {
      back[j] = g[j] * pw;
      pw *= lc;
    }
    out.push_back(to_monic_poly(back));
  }
  std::sort(out.begin(), out.end(), poly_less);
  return out;
}

std::vector<Poly> factor_squarefree_gaussian(const Poly& f) {
  if (f.degree() < 1) return {};
  std::vector<Poly> out;
  if (f.is_real()) {
    for (const auto& q : factor_squarefree_rational(f))
      for (auto& g : trager(q)) out.push_back(std::move(g));
  } else {
    out = trager(f.monic());
  }
  std::sort(out.begin(), out.end(), poly_less);
  return out;
}

std::vector<PolyFactor> factor(const Poly& f, bool gaussian) {
  if (!gaussian && !f.is_real())
    throw std::invalid_argument("rational factorization of a non-real polynomial");
  std::vector<PolyFactor> out;
  auto parts = squarefree_decomposition(f);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].degree() < 1) continue;
    auto irr = gaussian ? factor_squarefree_gaussian(parts[i]) : factor_squarefree_rational(parts[i]);
    for (auto& q : irr) out.push_back({std::move(q), static_cast<int>(i + 1)});
  }
  std::sort(out.begin(), out.end(), [](const PolyFactor& a, const PolyFactor& b) {
    if (poly_less(a.factor, b.factor)) return true;
    if (poly_less(b.factor, a.factor)) return false;
    return a.multiplicity < b.multiplicity;
  });
  return out;
}

}  // namespace kdyn
