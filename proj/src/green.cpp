#include "kdyn/green.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "kdyn/error.hpp"
#include "kdyn/parallel.hpp"

namespace kdyn::green {
namespace {

using cd = std::complex<double>;
using CMat = std::vector<cd>;  // row-major square matrix of size e x e

cd to_cd(const hp::Complex& z) { return {z.re.to_double(), z.im.to_double()}; }

CMat to_cmat(const hp::CMatrix& m) {
  CMat out(m.rows() * m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out[r * m.cols() + c] = to_cd(m(r, c));
  return out;
}

// out = a * x for an e x e matrix and an e-vector starting at x.
void apply(const CMat& a, const cd* x, cd* out, std::size_t e) {
  for (std::size_t r = 0; r < e; ++r) {
    cd acc = 0;
    for (std::size_t c = 0; c < e; ++c) acc += a[r * e + c] * x[c];
    out[r] = acc;
  }
}

std::vector<std::vector<long>> int_mul(const std::vector<std::vector<long>>& a, const std::vector<std::vector<long>>& b) {
  const std::size_t n = a.size();
  std::vector<std::vector<long>> out(n, std::vector<long>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) out[i][j] += a[i][k] * b[k][j];
  return out;
}

// G^p with entries reduced mod `modulus`; enough for the induced grid map.
std::vector<std::vector<long>> int_pow_mod(const std::vector<std::vector<long>>& g, int p, long modulus) {
  std::vector<std::vector<long>> out(g.size(), std::vector<long>(g.size(), 0));
  for (std::size_t i = 0; i < g.size(); ++i) out[i][i] = 1;
  for (int i = 0; i < p; ++i) {
    out = int_mul(out, g);
    for (auto& row : out)
      for (auto& x : row) x %= modulus;
  }
  return out;
}

// Largest absolute row sum of G^p, in floating point to avoid overflow.
double power_norm(const std::vector<std::vector<long>>& g, int p) {
  const std::size_t n = g.size();
  std::vector<std::vector<double>> out(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) out[i][i] = 1;
  for (int s = 0; s < p; ++s) {
    std::vector<std::vector<double>> next(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j) next[i][j] += out[i][k] * static_cast<double>(g[k][j]);
    out = std::move(next);
  }
  double norm = 0;
  for (const auto& row : out) {
    double r = 0;
    for (double x : row) r += std::abs(x);
    norm = std::max(norm, r);
  }
  return norm;
}

double loglog_slope(const std::vector<long>& n, const std::vector<double>& dev, double floor, long from) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < n.size(); ++i)
    if (n[i] >= from && dev[i] > floor) {
      xs.push_back(std::log(static_cast<double>(n[i])));
      ys.push_back(std::log(dev[i]));
    }
  if (xs.size() < 2) return std::nan("");
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

std::vector<hp::Real> to_real(const std::vector<double>& v) {
  std::vector<hp::Real> out;
  out.reserve(v.size());
  for (double x : v) out.emplace_back(x);
  return out;
}

std::size_t chunk_count(std::size_t points) { return std::min<std::size_t>(points, 4 * thread_count()); }

double dist(const hp::CVector& a, const hp::CVector& b) {
  double out = 0;
  for (std::size_t i = 0; i < a.size(); ++i) out = std::max(out, hp::abs(a[i] - b[i]).to_double());
  return out;
}

}  // namespace

std::size_t GridFunction::points() const {
  std::size_t n = 1;
  for (int i = 0; i < dim; ++i) n *= static_cast<std::size_t>(resolution);
  return n;
}

std::vector<long> GridFunction::coordinates(std::size_t point) const {
  std::vector<long> c(static_cast<std::size_t>(dim));
  for (int i = dim - 1; i >= 0; --i) {
    c[static_cast<std::size_t>(i)] = static_cast<long>(point % static_cast<std::size_t>(resolution));
    point /= static_cast<std::size_t>(resolution);
  }
  return c;
}

std::size_t GridFunction::index(const std::vector<long>& coords) const {
  std::size_t idx = 0;
  for (long c : coords) {
    long r = c % resolution;
    if (r < 0) r += resolution;
    idx = idx * static_cast<std::size_t>(resolution) + static_cast<std::size_t>(r);
  }
  return idx;
}

GridFunction GridFunction::sample(int dim, long resolution, int components,
                                  const std::function<std::vector<cd>(const std::vector<double>&)>& f) {
  if (dim < 1 || resolution < 1 || components < 1) throw Error(ErrorCode::InvalidArgument, "invalid grid shape");
  GridFunction g;
  g.dim = dim;
  g.resolution = resolution;
  g.components = components;
  const std::size_t n = g.points();
  g.values.resize(n * static_cast<std::size_t>(components));
  for (std::size_t p = 0; p < n; ++p) {
    auto c = g.coordinates(p);
    std::vector<double> x(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) x[i] = static_cast<double>(c[i]) / static_cast<double>(resolution);
    auto val = f(x);
    if (val.size() != static_cast<std::size_t>(components))
      throw Error(ErrorCode::DimensionMismatch, "sampled function returned the wrong number of components");
    std::copy(val.begin(), val.end(), g.values.begin() + static_cast<std::ptrdiff_t>(p * static_cast<std::size_t>(components)));
  }
  return g;
}

double GridFunction::sup_norm() const {
  double out = 0;
  for (const auto& z : values) out = std::max(out, std::abs(z));
  return out;
}

double integer_max_norm(const std::vector<std::vector<long>>& g) {
  double out = 0;
  for (const auto& row : g) {
    double s = 0;
    for (long x : row) s += std::abs(static_cast<double>(x));
    out = std::max(out, s);
  }
  return out;
}

int auto_power(const IterationSetup& setup) {
  auto j = jordan::eigen_structure(setup.Lambda);
  const double loglam = log(j.spectral_radius).to_double();
  for (int n = 1; n <= 64; ++n) {
    const double m = power_norm(setup.G, n);
    if (m <= 1) return n;
    if (setup.nu < n * loglam / std::log(m)) return n;
  }
  return 0;
}

HolderIterationResult holder_iteration(const IterationSetup& setup, long n_max, long N_max) {
  const GridFunction& u = setup.u;
  const std::size_t d = static_cast<std::size_t>(u.dim);
  if (setup.G.size() != d) throw Error(ErrorCode::DimensionMismatch, "G must be dim x dim");
  for (const auto& row : setup.G)
    if (row.size() != d) throw Error(ErrorCode::DimensionMismatch, "G must be dim x dim");
  if (!setup.Lambda.is_square() || setup.Lambda.rows() != static_cast<std::size_t>(u.components))
    throw Error(ErrorCode::DimensionMismatch, "Lambda must act on the value space of u");
  if (u.values.size() != u.points() * static_cast<std::size_t>(u.components))
    throw Error(ErrorCode::DimensionMismatch, "u has the wrong number of samples");
  if (n_max < 1 || N_max < 1) throw Error(ErrorCode::InvalidArgument, "n_max and N_max must be positive");
  if (setup.power < 1) throw Error(ErrorCode::InvalidArgument, "power must be positive");

  HolderIterationResult res;
  res.power = setup.power;
  const ExactMatrix lp = setup.Lambda.pow(static_cast<unsigned long>(setup.power));
  const auto gp = int_pow_mod(setup.G, setup.power, u.resolution);
  jordan::JordanData j = jordan::eigen_structure(lp);
  res.lambda = j.spectral_radius.to_double();
  res.multiplicity = j.multiplicity;
  res.theta = j.theta_group;
  res.lipschitz = power_norm(setup.G, setup.power);
  if (j.spectral_radius <= hp::Real(1))
    throw Error(ErrorCode::HypothesisViolated, "spectral radius of Lambda must exceed 1");
  if (res.lipschitz <= 1) throw Error(ErrorCode::HypothesisViolated, "Lipschitz constant M must exceed 1");
  if (n_max < 20) res.warnings.push_back("n_max < 20: the rate fit window is truncated");

  std::vector<hp::CMatrix> projectors;
  auto [limit, averaged] = jordan::limit_operators(lp, j, &projectors);
  const std::size_t e = lp.rows();
  std::vector<CMat> parts, proj;
  std::vector<cd> mu;
  std::vector<bool> zero_theta;
  for (std::size_t k = 0; k < j.dominant.size(); ++k) {
    parts.push_back(to_cmat(projectors[k] * limit));
    proj.push_back(to_cmat(projectors[k]));
    mu.push_back(to_cd(j.dominant[k].value));
    zero_theta.push_back(j.dominant[k].theta_zero);
  }
  std::vector<double> theta;
  for (const auto& dm : j.dominant) theta.push_back(dm.theta.to_double());
  CMat step = to_cmat(hp::CMatrix::from_exact(lp, 128).scaled(hp::Complex(hp::Real(1) / j.spectral_radius)));

  // g on grid indices.
  const std::size_t pts = u.points();
  std::vector<std::size_t> gmap(pts);
  for (std::size_t p = 0; p < pts; ++p) {
    auto c = u.coordinates(p);
    std::vector<long> img(d, 0);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t s = 0; s < d; ++s) img[r] += gp[r][s] * c[s];
    gmap[p] = u.index(img);
  }

  const double lam = res.lambda;
  const std::size_t terms = static_cast<std::size_t>(std::ceil(60.0 * std::log(2.0) / std::log(lam))) + 2;
  res.series_terms = terms;
  res.v = res.w = res.v_last = res.w_last = GridFunction{u.dim, u.resolution, u.components, std::vector<cd>(u.values.size())};
  const long top = std::max(n_max, N_max);
  const std::size_t chunks = chunk_count(pts);
  std::vector<std::vector<double>> tdev(chunks, std::vector<double>(static_cast<std::size_t>(n_max), 0.0));
  std::vector<std::vector<double>> adev(chunks, std::vector<double>(static_cast<std::size_t>(N_max), 0.0));

  parallel_for(chunks, [&](std::size_t ch) {
    const std::size_t lo = pts * ch / chunks, hi = pts * (ch + 1) / chunks;
    std::vector<cd> tmp(e), tmp2(e), vn(e), tw(e), acc(e), ui(e);
    for (std::size_t p = lo; p < hi; ++p) {
      cd* vp = &res.v.values[p * e];
      cd* wp = &res.w.values[p * e];
      // Limits as truncated series over dominant eigenvalues.
      std::size_t cur = p;
      for (std::size_t i = 0; i < terms; ++i) {
        const cd* up = &u.values[cur * e];
        for (std::size_t k = 0; k < parts.size(); ++k) {
          apply(parts[k], up, tmp.data(), e);
          const cd scale = std::pow(mu[k], -static_cast<double>(i));
          for (std::size_t c = 0; c < e; ++c) {
            vp[c] += scale * tmp[c];
            if (zero_theta[k]) wp[c] += scale * tmp[c];
          }
        }
        cur = gmap[cur];
      }
      // V_{n+1} = (Lambda / lambda) (u o g^n / lambda^n + V_n).
      std::fill(acc.begin(), acc.end(), cd(0));
      std::vector<cd> big_v(e, cd(0));
      cur = p;
      double inv_pow = 1;  // lambda^-n
      for (long n = 1; n <= top; ++n) {
        const cd* up = &u.values[cur * e];
        for (std::size_t c = 0; c < e; ++c) tmp[c] = up[c] * inv_pow + big_v[c];
        apply(step, tmp.data(), big_v.data(), e);
        cur = gmap[cur];
        inv_pow /= lam;
        const double norm_n = std::pow(static_cast<double>(n), res.multiplicity - 1);
        for (std::size_t c = 0; c < e; ++c) vn[c] = big_v[c] / norm_n;
        if (n <= n_max) {
          tw = vn;
          for (std::size_t k = 0; k < proj.size(); ++k) {
            if (zero_theta[k]) continue;
            apply(proj[k], vn.data(), tmp2.data(), e);
            const cd f = std::polar(1.0, -static_cast<double>(n) * theta[k]) - cd(1);
            for (std::size_t c = 0; c < e; ++c) tw[c] += f * tmp2[c];
          }
          double dv = 0;
          for (std::size_t c = 0; c < e; ++c) dv = std::max(dv, std::abs(tw[c] - vp[c]));
          auto& slot = tdev[ch][static_cast<std::size_t>(n - 1)];
          slot = std::max(slot, dv);
          if (n == n_max) std::copy(tw.begin(), tw.end(), res.v_last.values.begin() + static_cast<std::ptrdiff_t>(p * e));
        }
        if (n <= N_max) {
          for (std::size_t c = 0; c < e; ++c) acc[c] += vn[c];
          double dw = 0;
          for (std::size_t c = 0; c < e; ++c) dw = std::max(dw, std::abs(acc[c] / static_cast<double>(n) - wp[c]));
          auto& slot = adev[ch][static_cast<std::size_t>(n - 1)];
          slot = std::max(slot, dw);
          if (n == N_max)
            for (std::size_t c = 0; c < e; ++c) res.w_last.values[p * e + c] = acc[c] / static_cast<double>(N_max);
        }
      }
    }
  });

  for (long n = 1; n <= n_max; ++n) {
    double m = 0;
    for (const auto& c : tdev) m = std::max(m, c[static_cast<std::size_t>(n - 1)]);
    res.n.push_back(n);
    res.twisted_deviation.push_back(m);
  }
  for (long n = 1; n <= N_max; ++n) {
    double m = 0;
    for (const auto& c : adev) m = std::max(m, c[static_cast<std::size_t>(n - 1)]);
    res.N.push_back(n);
    res.averaged_deviation.push_back(m);
  }
  res.floor = 1e-12 * (1 + res.v.sup_norm());
  const hp::Real floor(res.floor);
  res.twisted_rate = jordan::fit_rate(res.n, to_real(res.twisted_deviation), false, std::min<long>(20, n_max),
                                      std::min<long>(50, n_max), floor);
  res.averaged_rate = jordan::fit_rate(res.N, to_real(res.averaged_deviation), true, std::min<long>(20, N_max),
                                       std::min<long>(50, N_max), floor);
  res.twisted_slope = loglog_slope(res.n, res.twisted_deviation, res.floor, 20);
  res.averaged_slope = loglog_slope(res.N, res.averaged_deviation, res.floor, 20);
  return res;
}

HolderEstimate holder_exponent_estimate(const GridFunction& v, const std::vector<int>& levels, double admissible_bound) {
  HolderEstimate est;
  est.admissible_bound = admissible_bound;
  std::vector<int> lv = levels;
  if (lv.empty())
    for (int jl = 3; jl < 62; ++jl) {
      const long div = 1L << jl;
      if (v.resolution % div != 0 || v.resolution / div < 4) break;
      lv.push_back(jl);
    }
  std::vector<long> shifts;
  for (int jl : lv) {
    if (jl < 0 || jl > 61) throw Error(ErrorCode::InvalidArgument, "dyadic level out of range");
    const long div = 1L << jl;
    if (v.resolution % div != 0 || v.resolution / div < 1)
      throw Error(ErrorCode::InvalidArgument, "separation 2^-" + std::to_string(jl) + " is not a whole number of grid cells");
    shifts.push_back(v.resolution / div);
  }
  if (shifts.size() < 3) throw Error(ErrorCode::InvalidArgument, "need at least 3 dyadic scales");

  const std::size_t pts = v.points(), e = static_cast<std::size_t>(v.components);
  std::vector<double> osc(shifts.size(), 0.0);
  parallel_for(shifts.size(), [&](std::size_t s) {
    double best = 0;
    for (std::size_t p = 0; p < pts; ++p) {
      auto c = v.coordinates(p);
      for (int axis = 0; axis < v.dim; ++axis) {
        auto q = c;
        q[static_cast<std::size_t>(axis)] += shifts[s];
        const std::size_t qi = v.index(q);
        for (std::size_t k = 0; k < e; ++k) best = std::max(best, std::abs(v.values[qi * e + k] - v.values[p * e + k]));
      }
    }
    osc[s] = best;
  });
  est.pairs_used = pts * static_cast<std::size_t>(v.dim) * shifts.size();
  std::vector<double> xs, ys;
  for (std::size_t s = 0; s < shifts.size(); ++s) {
    const double h = static_cast<double>(shifts[s]) / static_cast<double>(v.resolution);
    est.scales.push_back(h);
    est.oscillations.push_back(osc[s]);
    if (osc[s] > 0) {
      xs.push_back(std::log(h));
      ys.push_back(std::log(osc[s]));
    }
  }
  const double top = *std::max_element(osc.begin(), osc.end());
  if (top <= 1e-14 * (1 + v.sup_norm()) || xs.size() < 2) {
    est.degenerate = true;
    est.exponent = 1;
    est.constant = 0;
    return est;
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  est.exponent = sxy / sxx;
  est.constant = std::exp(my - est.exponent * mx);
  return est;
}

std::string green_mode_name(GreenMode mode) { return mode == GreenMode::PlainLimit ? "PlainLimit" : "CesaroOnly"; }

GreenTorusReport green_limit_torus(const models::TorusAutomorphism& t, const GreenTorusOptions& opts) {
  auto act = models::torus_action(t);
  const ExactMatrix& b = act.blocks[1];
  const long bits = hp::default_bits();
  jordan::JordanData j = jordan::eigen_structure(b, bits);
  if (abs(j.spectral_radius - hp::Real(1)) < ldexp(hp::Real(1), -(bits - 16)))
    throw Error(ErrorCode::NoExpansion, "d_1 = 1: no expansion on H^{1,1}");
  GreenTorusReport rep;
  rep.degree = j.spectral_radius;
  rep.multiplicity = j.multiplicity;
  rep.theta = j.theta_group;
  rep.mode = j.theta_group.kind == jordan::ThetaKind::Trivial ? GreenMode::PlainLimit : GreenMode::CesaroOnly;

  std::vector<hp::CMatrix> projectors;
  auto [limit, averaged] = jordan::limit_operators(b, j, &projectors);
  const long work = limit.bits();
  hp::PrecisionGuard guard(work);
  hp::CVector omega;
  for (const auto& x : act.kahler_class[1]) omega.push_back(x.to_complex());
  hp::CVector plain = limit * omega, avg = averaged * omega;
  rep.limit_class = rep.mode == GreenMode::PlainLimit ? plain : avg;

  hp::Real lam = j.spectral_radius;
  lam.set_bits(work);
  hp::CMatrix bh = hp::CMatrix::from_exact(b, work);
  {
    hp::CVector fl = bh * rep.limit_class;
    for (std::size_t i = 0; i < fl.size(); ++i) fl[i] -= rep.limit_class[i] * lam;
    hp::Real ln = hp::max_abs(rep.limit_class);
    rep.eigen_residual = ln.is_zero() ? 0.0 : (hp::max_abs(fl) / ln).to_double();
  }
  rep.hermitian_eigenvalues = models::hermitian_eigenvalues(models::hermitian_coefficients(rep.limit_class, t.k));
  {
    double mx = 0;
    for (double x : rep.hermitian_eigenvalues) mx = std::max(mx, std::abs(x));
    rep.positive = mx > 0 && *std::min_element(rep.hermitian_eigenvalues.begin(), rep.hermitian_eigenvalues.end()) >= -1e-9 * mx;
  }

  hp::CMatrix step = bh.scaled(hp::Complex(hp::Real(1) / lam));
  hp::CVector w = omega, acc(omega.size(), hp::Complex(hp::Real::with_bits(work)));
  std::vector<long> ns;
  std::vector<hp::Real> pdev, cdev;
  for (long n = 1; n <= opts.N_max; ++n) {
    w = step * w;
    const hp::Real scale = hp::Real(1) / pow(hp::Real(n), j.multiplicity - 1);
    hp::CVector pn(w.size()), cn(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      pn[i] = w[i] * scale - plain[i];
      acc[i] += w[i] * scale;
      cn[i] = acc[i] / hp::Real(n) - avg[i];
    }
    ns.push_back(n);
    pdev.push_back(hp::max_abs(pn));
    cdev.push_back(hp::max_abs(cn));
  }
  const hp::Real floor = ldexp(hp::Real(1) + hp::max_abs(plain), -(bits - 24));
  const long hi = std::min<long>(50, opts.N_max), lo = std::min<long>(20, hi);
  rep.plain_rate = jordan::fit_rate(ns, pdev, false, lo, hi, floor);
  rep.cesaro_rate = jordan::fit_rate(ns, cdev, true, lo, hi, floor);

  if (rep.mode == GreenMode::CesaroOnly) {
    long double th = 0;
    for (const auto& dm : j.dominant)
      if (!dm.theta_zero) {
        th = dm.theta.to_long_double();
        break;
      }
    const long double two_pi = 2 * std::numbers::pi_v<long double>;
    for (int k = 0; k < opts.targets; ++k) {
      const long double target = two_pi * k / opts.targets;
      for (long n = opts.sample_from; n <= opts.sample_to; ++n) {
        long double a = std::fmod(static_cast<long double>(n) * th, two_pi);
        if (a < 0) a += two_pi;
        long double diff = std::fabs(a - target);
        diff = std::min(diff, two_pi - diff);
        if (diff >= opts.angle_tolerance) continue;
        SubsequenceSample smp;
        smp.n = n;
        smp.angle = static_cast<double>(a);
        smp.target = static_cast<double>(target);
        // (B / d)^n by binary powering.
        hp::CMatrix power = hp::CMatrix::identity(b.rows(), work), base = step;
        for (unsigned long e = static_cast<unsigned long>(n); e; e >>= 1) {
          if (e & 1UL) power = power * base;
          if (e > 1) base = base * base;
        }
        smp.value = power * omega;
        const hp::Real scale = hp::Real(1) / pow(hp::Real(n), j.multiplicity - 1);
        for (auto& z : smp.value) z = z * scale;
        smp.predicted = jordan::twist(limit, j, projectors, -n) * omega;
        rep.samples.push_back(std::move(smp));
        break;
      }
    }
    for (std::size_t a = 0; a < rep.samples.size(); ++a)
      for (std::size_t c = a + 1; c < rep.samples.size(); ++c)
        rep.sample_spread = std::max(rep.sample_spread, dist(rep.samples[a].value, rep.samples[c].value));
    rep.divergent = rep.sample_spread >= 1e-3;
  }
  return rep;
}

RecurrenceReport recurrence_machinery(const models::GradedCohomologyAction& action, double nu) {
  if (action.blocks.size() < 2) throw Error(ErrorCode::InvalidArgument, "the action has no degree-one block");
  const ExactMatrix& b = action.blocks[1];
  RecurrenceReport rep;
  rep.nu = nu;
  std::vector<ExactVector> krylov{action.kahler_class.at(1)};
  if (is_zero_vector(krylov.front())) throw Error(ErrorCode::InvalidArgument, "Kaehler class is zero");
  for (;;) {
    ExactVector next = b * krylov.back();
    std::vector<ExactVector> cols = krylov;
    cols.push_back(next);
    ExactMatrix aug = ExactMatrix::from_columns(cols);
    auto ech = row_reduce(aug);
    const std::size_t m = krylov.size();
    if (std::find(ech.pivot_cols.begin(), ech.pivot_cols.end(), m) == ech.pivot_cols.end()) {
      for (std::size_t i = 0; i < m; ++i) rep.coefficients.push_back(aug(i, m));
      break;
    }
    krylov.push_back(std::move(next));
  }
  rep.m = static_cast<int>(krylov.size());
  const std::size_t m = krylov.size();
  rep.companion = ExactMatrix(m, m);
  for (std::size_t i = 0; i + 1 < m; ++i) rep.companion(i + 1, i) = 1;
  for (std::size_t i = 0; i < m; ++i) rep.companion(i, m - 1) = rep.coefficients[i];
  auto jc = jordan::eigen_structure(rep.companion);
  auto jb = jordan::eigen_structure(b);
  rep.companion_radius = jc.spectral_radius;
  rep.companion_multiplicity = jc.multiplicity;
  rep.degree = jb.spectral_radius;
  rep.radius_matches = abs(jc.spectral_radius - jb.spectral_radius) <= ldexp(hp::Real(1), -(jb.bits - 24)) * jb.spectral_radius;
  rep.char_poly_matches = rep.companion.char_poly() == b.char_poly();
  return rep;
}

}  // namespace kdyn::green
