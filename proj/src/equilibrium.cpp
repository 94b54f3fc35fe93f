#include "kdyn/equilibrium.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <tuple>

#include "kdyn/error.hpp"
#include "kdyn/jordan.hpp"
#include "kdyn/parallel.hpp"

namespace kdyn::equilibrium {
namespace {

constexpr long kEscapeCap = 100000;

using ZVec = std::vector<mpz_class>;

ZVec step(const std::vector<std::vector<long>>& b, const ZVec& x) {
  ZVec out(x.size());
  for (std::size_t r = 0; r < b.size(); ++r)
    for (std::size_t c = 0; c < x.size(); ++c)
      if (b[r][c] != 0) out[r] += b[r][c] * x[c];
  return out;
}

long sup_norm(const Frequency& f) {
  long m = 0;
  for (long v : f) m = std::max(m, std::abs(v));
  return m;
}

bool zero_freq(const Frequency& f) {
  return std::all_of(f.begin(), f.end(), [](long v) { return v == 0; });
}

double modulus(const GaussRational& z) { return std::sqrt(z.norm().get_d()); }

void check_dim(int k, const TrigPolynomial& p) {
  if (p.dim != 2 * k) throw Error(ErrorCode::DimensionMismatch, "trigonometric polynomial must live on the real 2k-torus");
  for (const auto& term : p.terms)
    if (term.freq.size() != static_cast<std::size_t>(p.dim))
      throw Error(ErrorCode::DimensionMismatch, "frequency vector has the wrong length");
}

struct PairHit {
  long n;
  std::size_t a, b;  // term indices in phi and psi
};

struct Search {
  std::vector<PairHit> hits;  // sorted by n
  long search_limit = 0;
  bool escape_certified = false;
};

// First m0 such that the escape bound puts ||B^m a|| above `bound` for all
// m >= m0, or -1 when the bound is unavailable.
long escape_index(const FrequencyLattice& lat, const Frequency& a, long bound) {
  if (!lat.hyperbolic || lat.scale <= 0) return -1;
  const hp::Real ny = hp::max_abs(lat.expanding_projector * [&] {
    hp::CVector v;
    for (long x : a) v.push_back(hp::Complex(hp::Real(x)));
    return v;
  }());
  const double y = ny.to_double();
  if (!(y > 0)) return -1;
  // y / (scale c^q) > bound (1 + 1e-9)  <=>  q > log(y / (scale bound (1 + 1e-9))) / log c
  const double ratio = y / (lat.scale * static_cast<double>(bound) * (1 + 1e-9));
  if (ratio > 1) return 0;
  const double q = std::floor(std::log(ratio) / std::log(lat.contraction)) + 1;
  if (q > 1e12) return -1;
  return static_cast<long>(q) * lat.block;
}

// Exact coincidences B^n a = -b over nonzero frequencies. Orbits of hyperbolic
// maps are followed until the escape bound excludes every later hit.
Search coincidence_search(const FrequencyLattice& lat, const TrigPolynomial& phi, const TrigPolynomial& psi, long n_hi) {
  std::vector<std::size_t> as, bs;
  for (std::size_t i = 0; i < phi.terms.size(); ++i)
    if (!zero_freq(phi.terms[i].freq)) as.push_back(i);
  long bmax = 0;
  for (std::size_t j = 0; j < psi.terms.size(); ++j)
    if (!zero_freq(psi.terms[j].freq)) {
      bs.push_back(j);
      bmax = std::max(bmax, sup_norm(psi.terms[j].freq));
    }
  std::vector<std::vector<PairHit>> hits(as.size());
  std::vector<long> limits(as.size(), n_hi);
  std::vector<char> certified(as.size(), 0);
  parallel_for(as.size(), [&](std::size_t ia) {
    const auto& a = phi.terms[as[ia]].freq;
    const long m0 = escape_index(lat, a, bmax);
    long last = n_hi;
    if (m0 >= 0 && m0 - 1 <= n_hi + kEscapeCap) {
      last = std::max(n_hi, m0 - 1);
      certified[ia] = 1;
    }
    ZVec x(a.begin(), a.end());
    for (long n = 0; n <= last; ++n) {
      for (std::size_t jb : bs) {
        const auto& b = psi.terms[jb].freq;
        bool hit = true;
        for (std::size_t c = 0; c < b.size() && hit; ++c) hit = x[c] == -b[c];
        if (hit) hits[ia].push_back({n, as[ia], jb});
      }
      if (n < last) x = step(lat.B, x);
    }
    limits[ia] = last;
  });
  Search s;
  s.escape_certified = lat.hyperbolic;
  s.search_limit = n_hi;
  for (std::size_t i = 0; i < as.size(); ++i) {
    s.search_limit = std::max(s.search_limit, limits[i]);
    if (!certified[i]) s.escape_certified = false;
    s.hits.insert(s.hits.end(), hits[i].begin(), hits[i].end());
  }
  if (as.empty() || bs.empty()) s.escape_certified = true;
  std::sort(s.hits.begin(), s.hits.end(), [](const PairHit& x, const PairHit& y) {
    return std::tie(x.n, x.a, x.b) < std::tie(y.n, y.a, y.b);
  });
  return s;
}

double centered_norm(const TrigPolynomial& p) {
  double s = 0;
  for (const auto& t : p.terms)
    if (!zero_freq(t.freq)) s += t.coeff.norm().get_d();
  return std::sqrt(s);
}

CorrelationReport correlate(const FrequencyLattice& lat, const TrigPolynomial& phi, const TrigPolynomial& psi,
                            long n_lo, long n_hi) {
  if (n_lo < 0 || n_hi < n_lo) throw Error(ErrorCode::InvalidArgument, "invalid n range");
  CorrelationReport rep;
  rep.phi_id = phi.id;
  rep.psi_id = psi.id;
  rep.hyperbolic = lat.hyperbolic;
  rep.norm_bound = centered_norm(phi) * centered_norm(psi);
  Search s = coincidence_search(lat, phi, psi, n_hi);
  rep.search_limit = s.search_limit;
  rep.escape_certified = s.escape_certified;
  std::map<long, GaussRational> by_n;
  for (const auto& h : s.hits) {
    if (h.n >= 1 && (rep.coincidences.empty() || rep.coincidences.back() != h.n)) rep.coincidences.push_back(h.n);
    by_n[h.n] += phi.terms[h.a].coeff * psi.terms[h.b].coeff;
  }
  rep.last_coincidence = rep.coincidences.empty() ? 0 : rep.coincidences.back();
  rep.decay_flag = true;
  for (long n = n_lo; n <= n_hi; ++n) {
    auto it = by_n.find(n);
    GaussRational v = it == by_n.end() ? GaussRational() : it->second;
    rep.n.push_back(n);
    rep.values.push_back(v.re().get_d());
    rep.max_imag = std::max(rep.max_imag, std::abs(v.im().get_d()));
    if (n > rep.last_coincidence && !v.is_zero()) rep.decay_flag = false;
    rep.exact.push_back(std::move(v));
  }
  if (!rep.escape_certified) rep.decay_flag = false;
  return rep;
}

}  // namespace

TrigPolynomial TrigPolynomial::character(const Frequency& m, std::string id) {
  TrigPolynomial p;
  p.dim = static_cast<int>(m.size());
  p.terms.push_back({m, GaussRational(1)});
  p.id = std::move(id);
  return p;
}

TrigPolynomial TrigPolynomial::cosine(const Frequency& m, std::string id) {
  TrigPolynomial p;
  p.dim = static_cast<int>(m.size());
  Frequency neg(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) neg[i] = -m[i];
  const GaussRational half(mpq_class(1, 2));
  p.terms.push_back({m, half});
  p.terms.push_back({neg, half});
  p.id = std::move(id);
  p.normalize();
  return p;
}

void TrigPolynomial::normalize() {
  std::map<Frequency, GaussRational> merged;
  for (auto& t : terms) merged[t.freq] += t.coeff;
  terms.clear();
  for (auto& [f, c] : merged)
    if (!c.is_zero()) terms.push_back({f, c});
}

GaussRational TrigPolynomial::mean() const {
  GaussRational out;
  for (const auto& t : terms)
    if (zero_freq(t.freq)) out += t.coeff;
  return out;
}

long TrigPolynomial::max_frequency() const {
  long m = 0;
  for (const auto& t : terms) m = std::max(m, sup_norm(t.freq));
  return m;
}

FrequencyLattice frequency_lattice(const models::TorusAutomorphism& t) {
  models::torus_action(t);  // validates A
  ExactMatrix real = models::real_lattice_matrix(t.A);
  FrequencyLattice lat;
  const std::size_t n = real.rows();
  lat.B.assign(n, std::vector<long>(n, 0));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) lat.B[r][c] = real(c, r).re().get_num().get_si();
  const ExactMatrix b = real.transpose();
  auto j = jordan::eigen_structure(b);
  const hp::Real eps = ldexp(hp::Real(1), -(j.bits / 2));
  lat.hyperbolic = true;
  for (const auto& f : j.factors)
    for (const auto& root : f.roots)
      if (abs(hp::abs(root) - hp::Real(1)) < eps) lat.hyperbolic = false;
  if (!lat.hyperbolic) return lat;

  // P onto the expanding part and W = B^-1 P; find k with ||W^k|| <= 1/2.
  // Since P y = W^m P B^m y, ||P y|| <= ||P|| K c^floor(m/k) ||B^m y||.
  const long bits = j.bits;
  hp::CMatrix P(n, n, bits);
  for (std::size_t fi = 0; fi < j.factors.size(); ++fi)
    for (std::size_t ri = 0; ri < j.factors[fi].roots.size(); ++ri)
      if (hp::abs(j.factors[fi].roots[ri]) > hp::Real(1)) P = P + jordan::spectral_projector(b, j, fi, ri, bits);
  const hp::CMatrix W = hp::CMatrix::from_exact(b.inverse(), bits) * P;
  const double pn = hp::max_norm(P).to_double();
  double K = pn;
  hp::CMatrix wk = W;
  constexpr double kSafety = 1 + 1e-12;  // absorbs the rounding in P and W
  for (long k = 1; k <= 4096; ++k) {
    const double c = hp::max_norm(wk).to_double() * kSafety;
    if (c <= 0.5) {
      lat.expanding_projector = P;
      lat.scale = pn * K * kSafety;
      lat.contraction = std::max(c, 1e-300);
      lat.block = k;
      break;
    }
    K = std::max(K, c);
    wk = W * wk;
  }
  return lat;
}

models::TorusAutomorphism inverse(const models::TorusAutomorphism& t) {
  models::torus_action(t);
  return {t.k, t.A.inverse()};
}

CorrelationReport haar_character_correlation(const models::TorusAutomorphism& t, const Frequency& m,
                                             const Frequency& m_prime, long n_lo, long n_hi) {
  const std::size_t dim = 2 * static_cast<std::size_t>(t.k);
  if (m.size() != dim || m_prime.size() != dim)
    throw Error(ErrorCode::DimensionMismatch, "frequency vectors must have length 2k");
  if (zero_freq(m) || zero_freq(m_prime)) throw Error(ErrorCode::ZeroFrequency, "zero frequency: constant character");
  return haar_character_correlation(frequency_lattice(t), m, m_prime, n_lo, n_hi);
}

CorrelationReport haar_character_correlation(const FrequencyLattice& lat, const Frequency& m, const Frequency& m_prime,
                                             long n_lo, long n_hi) {
  if (m.size() != lat.B.size() || m_prime.size() != lat.B.size())
    throw Error(ErrorCode::DimensionMismatch, "frequency vectors must match the lattice dimension");
  if (zero_freq(m) || zero_freq(m_prime)) throw Error(ErrorCode::ZeroFrequency, "zero frequency: constant character");
  return correlate(lat, TrigPolynomial::character(m, "m"), TrigPolynomial::character(m_prime, "m'"), n_lo, n_hi);
}

CorrelationReport trig_correlation(const models::TorusAutomorphism& t, const TrigPolynomial& phi,
                                   const TrigPolynomial& psi, long n_lo, long n_hi) {
  check_dim(t.k, phi);
  check_dim(t.k, psi);
  return correlate(frequency_lattice(t), phi, psi, n_lo, n_hi);
}

long default_resolution(int k) {
  const int dim = 2 * k;
  long r = 1;
  while (r < 1024 && static_cast<double>(dim) * std::log2(static_cast<double>(2 * r)) <= 20.0) r *= 2;
  return std::max(r, 2L);
}

CorrelationReport grid_correlation(const models::TorusAutomorphism& t, const TrigPolynomial& phi,
                                   const TrigPolynomial& psi, long n_lo, long n_hi, long resolution) {
  check_dim(t.k, phi);
  check_dim(t.k, psi);
  return grid_correlation(frequency_lattice(t), phi, psi, n_lo, n_hi, resolution);
}

CorrelationReport grid_correlation(const FrequencyLattice& lat, const TrigPolynomial& phi, const TrigPolynomial& psi,
                                   long n_lo, long n_hi, long resolution) {
  const int k = static_cast<int>(lat.B.size() / 2);
  check_dim(k, phi);
  check_dim(k, psi);
  CorrelationReport rep = correlate(lat, phi, psi, n_lo, n_hi);
  const long R = resolution > 0 ? resolution : default_resolution(k);
  if (R < 2 || (R & (R - 1)) != 0) throw Error(ErrorCode::InvalidArgument, "grid resolution must be a power of two");
  const std::size_t dim = lat.B.size();
  const double points_d = std::pow(static_cast<double>(R), static_cast<double>(dim));
  if (points_d > static_cast<double>(1L << 26)) throw Error(ErrorCode::InvalidArgument, "grid too large");
  const std::size_t P = static_cast<std::size_t>(points_d);
  rep.resolution = R;

  // Alias-safe range.
  const long fphi = phi.max_frequency(), fpsi = psi.max_frequency();
  {
    std::vector<std::vector<mpz_class>> pw(dim, std::vector<mpz_class>(dim, 0));
    for (std::size_t i = 0; i < dim; ++i) pw[i][i] = 1;
    rep.alias_limit = -1;
    for (long n = 0; n <= n_hi; ++n) {
      mpz_class norm = 0;
      for (const auto& row : pw) {
        mpz_class s = 0;
        for (const auto& v : row) s += abs(v);
        norm = std::max(norm, s);
      }
      if (norm * fphi + fpsi >= R) break;
      rep.alias_limit = n;
      std::vector<std::vector<mpz_class>> next(dim, std::vector<mpz_class>(dim, 0));
      for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t k = 0; k < dim; ++k)
          if (lat.B[r][k] != 0)
            for (std::size_t c = 0; c < dim; ++c) next[r][c] += lat.B[r][k] * pw[k][c];
      pw = std::move(next);
    }
  }
  const long grid_hi = std::min(n_hi, rep.alias_limit);
  if (grid_hi < n_hi)
    rep.warnings.push_back("AliasWarning: n > " + std::to_string(rep.alias_limit) + " folds frequencies past resolution " +
                           std::to_string(R) + "; grid range truncated");
  if (grid_hi < n_lo) return rep;

  // Point dynamics y = A_R x mod R, with A_R = B^T.
  auto coords = [&](std::size_t p) {
    std::vector<long> c(dim);
    for (std::size_t i = dim; i-- > 0;) {
      c[i] = static_cast<long>(p % static_cast<std::size_t>(R));
      p /= static_cast<std::size_t>(R);
    }
    return c;
  };
  auto index = [&](const std::vector<long>& c) {
    std::size_t p = 0;
    for (long v : c) p = p * static_cast<std::size_t>(R) + static_cast<std::size_t>(((v % R) + R) % R);
    return p;
  };
  std::vector<std::uint32_t> fmap(P);
  auto phases = [&](const TrigPolynomial& f) {
    std::vector<std::vector<std::uint16_t>> ph(f.terms.size(), std::vector<std::uint16_t>(P));
    return ph;
  };
  auto ph_phi = phases(phi), ph_psi = phases(psi);
  const std::size_t chunks = std::min<std::size_t>(P, 4 * thread_count());
  parallel_for(chunks, [&](std::size_t ch) {
    for (std::size_t p = P * ch / chunks; p < P * (ch + 1) / chunks; ++p) {
      auto c = coords(p);
      std::vector<long> y(dim, 0);
      for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t s = 0; s < dim; ++s) y[r] += lat.B[s][r] * c[s];
      fmap[p] = static_cast<std::uint32_t>(index(y));
      auto fill = [&](const TrigPolynomial& f, std::vector<std::vector<std::uint16_t>>& ph) {
        for (std::size_t i = 0; i < f.terms.size(); ++i) {
          long e = 0;
          for (std::size_t s = 0; s < dim; ++s) e += (f.terms[i].freq[s] % R) * c[s];
          ph[i][p] = static_cast<std::uint16_t>(((e % R) + R) % R);
        }
      };
      fill(phi, ph_phi);
      fill(psi, ph_psi);
    }
  });

  auto grid_mean = [&](const TrigPolynomial& f) {
    GaussRational m;
    for (const auto& term : f.terms)
      if (std::all_of(term.freq.begin(), term.freq.end(), [&](long v) { return v % R == 0; })) m += term.coeff;
    return m;
  };
  const GaussRational mean_product = grid_mean(phi) * grid_mean(psi);
  const std::size_t half = static_cast<std::size_t>(R / 2);
  const std::size_t na = phi.terms.size(), nb = psi.terms.size();
  std::vector<std::uint32_t> cur(P);
  for (std::size_t p = 0; p < P; ++p) cur[p] = static_cast<std::uint32_t>(p);
  rep.grid_agrees = true;
  for (long n = 0; n <= grid_hi; ++n) {
    if (n > 0)
      for (auto& c : cur) c = fmap[c];
    if (n < n_lo) continue;
    std::vector<std::vector<long>> counts(chunks, std::vector<long>(na * nb * static_cast<std::size_t>(R), 0));
    parallel_for(chunks, [&](std::size_t ch) {
      auto& cnt = counts[ch];
      for (std::size_t p = P * ch / chunks; p < P * (ch + 1) / chunks; ++p)
        for (std::size_t a = 0; a < na; ++a) {
          const long ea = ph_phi[a][cur[p]];
          for (std::size_t b = 0; b < nb; ++b)
            ++cnt[(a * nb + b) * static_cast<std::size_t>(R) + static_cast<std::size_t>((ea + ph_psi[b][p]) % R)];
        }
    });
    std::vector<GaussRational> coef(half);
    const mpq_class inv_points(1, static_cast<unsigned long>(P));
    for (std::size_t a = 0; a < na; ++a)
      for (std::size_t b = 0; b < nb; ++b) {
        const GaussRational w = phi.terms[a].coeff * psi.terms[b].coeff * GaussRational(inv_points);
        for (std::size_t e = 0; e < half; ++e) {
          long s = 0;
          for (const auto& cnt : counts) {
            const std::size_t base = (a * nb + b) * static_cast<std::size_t>(R);
            s += cnt[base + e] - cnt[base + e + half];
          }
          if (s != 0) coef[e] += w * GaussRational(s);
        }
      }
    coef[0] -= mean_product;
    std::complex<double> val = 0;
    for (std::size_t e = 0; e < half; ++e)
      if (!coef[e].is_zero())
        val += std::complex<double>(coef[e].re().get_d(), coef[e].im().get_d()) *
               std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(R));
    const GaussRational& want = rep.exact[static_cast<std::size_t>(n - n_lo)];
    bool same = coef[0] == want;
    for (std::size_t e = 1; e < half && same; ++e) same = coef[e].is_zero();
    rep.grid_agrees = rep.grid_agrees && same;
    rep.grid_n.push_back(n);
    rep.grid_values.push_back(val.real());
    rep.grid_exact.push_back(std::move(coef));
  }
  return rep;
}

ErgodicReport ergodic_average_check(const models::TorusAutomorphism& t, const TrigPolynomial& phi,
                                    const TrigPolynomial& psi, long n_max) {
  check_dim(t.k, phi);
  check_dim(t.k, psi);
  if (!phi.mean().is_zero()) throw Error(ErrorCode::InvalidArgument, "phi must have zero mean");
  if (n_max < 1) throw Error(ErrorCode::InvalidArgument, "n_max must be positive");
  const FrequencyLattice lat = frequency_lattice(t);
  Search s = coincidence_search(lat, phi, psi, n_max);
  ErgodicReport rep;
  std::map<std::pair<std::size_t, std::size_t>, long> pair_counts;
  std::map<long, GaussRational> by_n;
  for (const auto& h : s.hits) {
    if (h.n < 1) continue;
    by_n[h.n] += phi.terms[h.a].coeff * psi.terms[h.b].coeff;
    ++pair_counts[{h.a, h.b}];
    rep.last_coincidence = std::max(rep.last_coincidence, h.n);
    rep.tail_constant += phi.terms[h.a].coeff * psi.terms[h.b].coeff;
  }
  for (const auto& [pr, cnt] : pair_counts)
    rep.rate_constant += modulus(phi.terms[pr.first].coeff * psi.terms[pr.second].coeff) * static_cast<double>(cnt);
  GaussRational sum;
  for (long n = 1; n <= n_max; ++n) {
    if (auto it = by_n.find(n); it != by_n.end()) sum += it->second;
    GaussRational avg = sum / GaussRational(n);
    rep.n.push_back(n);
    rep.values.push_back(avg.re().get_d());
    if (modulus(avg) > rep.rate_constant / static_cast<double>(n) * (1 + 1e-12)) rep.rate_holds = false;
    rep.exact.push_back(std::move(avg));
  }
  rep.converges = s.escape_certified;
  return rep;
}

}  // namespace kdyn::equilibrium
