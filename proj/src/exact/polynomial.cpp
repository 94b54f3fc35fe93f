#include "kdyn/exact/polynomial.hpp"

#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace kdyn {

Poly::Poly(std::vector<GaussRational> coeffs) : c_(std::move(coeffs)) { normalize(); }

Poly::Poly(GaussRational constant) {
  if (!constant.is_zero()) c_.push_back(std::move(constant));
}

Poly Poly::linear(const GaussRational& root) { return Poly(std::vector<GaussRational>{-root, 1}); }

Poly Poly::monomial(int degree, GaussRational coeff) {
  std::vector<GaussRational> c(static_cast<std::size_t>(degree) + 1);
  c.back() = std::move(coeff);
  return Poly(std::move(c));
}

void Poly::normalize() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

bool Poly::is_real() const {
  for (const auto& a : c_)
    if (!a.is_real()) return false;
  return true;
}

GaussRational Poly::coeff(int k) const {
  if (k < 0 || k > degree()) return {};
  return c_[static_cast<std::size_t>(k)];
}

Poly Poly::monic() const {
  if (c_.empty()) return *this;
  GaussRational inv = c_.back().inverse();
  std::vector<GaussRational> c = c_;
  for (auto& a : c) a *= inv;
  return Poly(std::move(c));
}

Poly Poly::conj() const {
  std::vector<GaussRational> c;
  c.reserve(c_.size());
  for (const auto& a : c_) c.push_back(a.conj());
  return Poly(std::move(c));
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<GaussRational> c(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) c[k - 1] = c_[k] * GaussRational(static_cast<long>(k));
  return Poly(std::move(c));
}

Poly Poly::reversed() const {
  std::vector<GaussRational> c(c_.rbegin(), c_.rend());
  return Poly(std::move(c));
}

Poly Poly::shifted(const GaussRational& shift) const {
  Poly result;
  Poly step(std::vector<GaussRational>{shift, 1});
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    result *= step;
    result += Poly(*it);
  }
  return result;
}

Poly Poly::scaled(const GaussRational& c) const {
  std::vector<GaussRational> out = c_;
  GaussRational power = 1;
  for (auto& a : out) {
    a *= power;
    power *= c;
  }
  return Poly(std::move(out));
}

GaussRational Poly::eval(const GaussRational& x) const {
  GaussRational acc;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc *= x;
    acc += *it;
  }
  return acc;
}

hp::Complex Poly::eval(const hp::Complex& x) const {
  hp::Complex acc(hp::Real::with_bits(x.bits()));
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + it->to_complex();
  return acc;
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
  normalize();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
  normalize();
  return *this;
}

Poly& Poly::operator*=(const Poly& o) {
  if (c_.empty() || o.c_.empty()) {
    c_.clear();
    return *this;
  }
  std::vector<GaussRational> out(c_.size() + o.c_.size() - 1);
  for (std::size_t a = 0; a < c_.size(); ++a) {
    if (c_[a].is_zero()) continue;
    for (std::size_t b = 0; b < o.c_.size(); ++b) out[a + b] += c_[a] * o.c_[b];
  }
  c_ = std::move(out);
  normalize();
  return *this;
}

Poly Poly::operator-() const {
  std::vector<GaussRational> c;
  c.reserve(c_.size());
  for (const auto& a : c_) c.push_back(-a);
  return Poly(std::move(c));
}

std::pair<Poly, Poly> Poly::divmod(const Poly& d) const {
  if (d.is_zero()) throw std::domain_error("polynomial division by zero");
  if (degree() < d.degree()) return {Poly(), *this};
  std::vector<GaussRational> rem = c_;
  std::vector<GaussRational> quo(c_.size() - d.c_.size() + 1);
  GaussRational inv = d.lead().inverse();
  const std::size_t dn = d.c_.size();
  for (std::size_t k = rem.size(); k-- >= dn;) {
    if (rem[k].is_zero()) {
      if (k == 0) break;
      continue;
    }
    GaussRational factor = rem[k] * inv;
    std::size_t shift = k - (dn - 1);
    quo[shift] = factor;
    for (std::size_t j = 0; j < dn; ++j) rem[shift + j] -= factor * d.c_[j];
    if (k == 0) break;
  }
  rem.resize(dn - 1);
  return {Poly(std::move(quo)), Poly(std::move(rem))};
}

Poly Poly::pow(unsigned n) const {
  Poly result(1), base = *this;
  while (n) {
    if (n & 1U) result *= base;
    n >>= 1U;
    if (n) base *= base;
  }
  return result;
}

std::string Poly::to_string(const std::string& var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    const GaussRational& a = c_[static_cast<std::size_t>(k)];
    if (a.is_zero()) continue;
    std::string coeff;
    bool negative = false;
    if (a.is_real()) {
      negative = sgn(a.re()) < 0;
      coeff = (negative ? mpq_class(-a.re()) : a.re()).get_str();
    } else {
      coeff = "(" + a.to_string() + ")";
    }
    if (first)
      os << (negative ? "-" : "");
    else
      os << (negative ? " - " : " + ");
    bool unit = coeff == "1";
    if (k == 0)
      os << coeff;
    else {
      if (!unit) os << coeff << "*";
      os << var;
      if (k > 1) os << "^" << k;
    }
    first = false;
  }
  return os.str();
}

Poly gcd(const Poly& a, const Poly& b) {
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = x % y;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

XGcd xgcd(const Poly& a, const Poly& b) {
  Poly r0 = a, r1 = b, s0(1), s1, t0, t1(1);
  while (!r1.is_zero()) {
    auto [q, r] = r0.divmod(r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    Poly s2 = s0 - q * s1;
    Poly t2 = t0 - q * t1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {r0, s0, t0};
  GaussRational inv = r0.lead().inverse();
  Poly scale(inv);
  return {r0 * scale, s0 * scale, t0 * scale};
}

std::vector<Poly> squarefree_decomposition(const Poly& p) {
  std::vector<Poly> out;
  if (p.degree() <= 0) return out;
  Poly f = p.monic();
  Poly fp = f.derivative();
  Poly a = gcd(f, fp);
  Poly b = f / a;
  Poly c = fp / a;
  Poly d = c - b.derivative();
  while (b.degree() > 0) {
    Poly g = gcd(b, d);
    out.push_back(g);
    b = b / g;
    c = d / g;
    d = c - b.derivative();
  }
  while (!out.empty() && out.back().degree() == 0) out.pop_back();
  return out;
}

Poly squarefree_part(const Poly& p) {
  if (p.degree() <= 0) return Poly(1);
  Poly f = p.monic();
  return (f / gcd(f, f.derivative())).monic();
}

std::vector<GaussRational> power_sums(const Poly& monic_p, int count) {
  const int n = monic_p.degree();
  // e_k from c_{n-k} = (-1)^k e_k
  std::vector<GaussRational> e(static_cast<std::size_t>(n) + 1);
  e[0] = 1;
  for (int k = 1; k <= n; ++k) {
    GaussRational c = monic_p.coeff(n - k);
    e[static_cast<std::size_t>(k)] = (k % 2 == 0) ? c : -c;
  }
  std::vector<GaussRational> p(static_cast<std::size_t>(count) + 1);
  for (int k = 1; k <= count; ++k) {
    GaussRational acc;
    for (int j = 1; j <= std::min(k - 1, n); ++j) {
      GaussRational term = e[static_cast<std::size_t>(j)] * p[static_cast<std::size_t>(k - j)];
      if (j % 2 == 1)
        acc += term;
      else
        acc -= term;
    }
    if (k <= n) {
      GaussRational term = e[static_cast<std::size_t>(k)] * GaussRational(static_cast<long>(k));
      if (k % 2 == 1)
        acc += term;
      else
        acc -= term;
    }
    p[static_cast<std::size_t>(k)] = acc;
  }
  p.erase(p.begin());
  return p;
}

Poly from_power_sums(const std::vector<GaussRational>& sums, int n) {
  std::vector<GaussRational> e(static_cast<std::size_t>(n) + 1);
  e[0] = 1;
  for (int k = 1; k <= n; ++k) {
    GaussRational acc;
    for (int j = 1; j <= k; ++j) {
      GaussRational term = e[static_cast<std::size_t>(k - j)] * sums[static_cast<std::size_t>(j - 1)];
      if (j % 2 == 1)
        acc += term;
      else
        acc -= term;
    }
    e[static_cast<std::size_t>(k)] = acc / GaussRational(static_cast<long>(k));
  }
  std::vector<GaussRational> c(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    const GaussRational& ek = e[static_cast<std::size_t>(k)];
    c[static_cast<std::size_t>(n - k)] = (k % 2 == 0) ? ek : -ek;
  }
  return Poly(std::move(c));
}

Poly product_root_poly(const Poly& a, const Poly& b) {
  Poly am = a.monic(), bm = b.monic();
  const int n = am.degree() * bm.degree();
  auto pa = power_sums(am, n);
  auto pb = power_sums(bm, n);
  std::vector<GaussRational> pc(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) pc[static_cast<std::size_t>(k)] = pa[static_cast<std::size_t>(k)] * pb[static_cast<std::size_t>(k)];
  return from_power_sums(pc, n);
}

int totient(int n) {
  int result = n;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

Poly cyclotomic(int n) {
  static std::mutex mu;
  static std::map<int, Poly> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
  }
  Poly result = Poly::monomial(n) - Poly(1);
  for (int d = 1; d < n; ++d)
    if (n % d == 0) result = result / cyclotomic(d);
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(n, result);
  return result;
}

}  // namespace kdyn
