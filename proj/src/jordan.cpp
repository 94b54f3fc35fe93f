#include "kdyn/jordan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kdyn/algebraic.hpp"
#include "kdyn/error.hpp"
#include "kdyn/numeric/roots.hpp"

namespace kdyn::jordan {
namespace {

constexpr long kMaxBits = 4096;

struct RootRef {
  std::size_t f, r;
  hp::Real mod2;
};

hp::Real factorial(int k) {
  hp::Real out = 1;
  for (int i = 2; i <= k; ++i) out *= hp::Real(i);
  return out;
}

hp::CMatrix matrix_power(const hp::CMatrix& a, int k) {
  hp::CMatrix out = hp::CMatrix::identity(a.rows(), a.bits());
  for (int i = 0; i < k; ++i) out = out * a;
  return out;
}

hp::CMatrix shifted(const ExactMatrix& m, const hp::Complex& mu, long bits) {
  hp::CMatrix a = hp::CMatrix::from_exact(m, bits);
  hp::PrecisionGuard guard(bits);
  for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) -= mu;
  return a;
}

algebraic::AlgebraicNumber root_of(const JordanData& j, std::size_t f, std::size_t r) {
  return {j.factors[f].factor, j.factors[f].roots[r]};
}

JordanData eigen_structure_at(const ExactMatrix& m, long bits);

}  // namespace

std::string theta_kind_name(ThetaKind kind) {
  switch (kind) {
    case ThetaKind::Trivial: return "Trivial";
    case ThetaKind::FiniteCyclic: return "FiniteCyclic";
    case ThetaKind::PositiveDimensional: return "PositiveDimensional";
  }
  return "Trivial";
}

std::size_t JordanData::strictly_dominant_dim() const {
  std::size_t count = 0;
  for (const auto& d : dominant)
    if (d.theta_zero) count += static_cast<std::size_t>(d.blocks);
  return count;
}

Poly char_poly(const ExactMatrix& m) {
  if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "characteristic polynomial of a non-square matrix");
  return m.char_poly();
}

std::vector<PolyFactor> char_poly_factors(const ExactMatrix& m) { return factor(char_poly(m), !m.is_real()); }

JordanData eigen_structure(const ExactMatrix& m, long bits) {
  if (!m.is_square() || m.rows() == 0) throw Error(ErrorCode::DimensionMismatch, "eigen_structure needs a square matrix");
  if (m.determinant().is_zero()) throw Error(ErrorCode::NotInvertible, "matrix is singular");
  return eigen_structure_at(m, bits > 0 ? bits : hp::default_bits());
}

namespace {

JordanData eigen_structure_at(const ExactMatrix& m, long bits) {
  JordanData j;
  const std::size_t n = m.rows();
  j.dim = n;
  j.gaussian = !m.is_real();
  j.bits = bits;
  j.char_poly = m.char_poly();
  hp::PrecisionGuard guard(bits);

  for (const auto& pf : factor(j.char_poly, j.gaussian)) {
    FactorData fd;
    fd.factor = pf.factor;
    fd.exponent = pf.multiplicity;
    const std::size_t d = static_cast<std::size_t>(pf.factor.degree());
    const std::size_t full = d * static_cast<std::size_t>(pf.multiplicity);
    // dim ker q(M)^k = deg q * sum over blocks of min(size, k).
    ExactMatrix q = m.eval_poly(pf.factor);
    ExactMatrix power = q;
    std::vector<std::size_t> ker{0};
    for (int k = 1; k <= pf.multiplicity; ++k) {
      ker.push_back(n - power.rank());
      if (ker.back() == full) break;
      power = power * q;
    }
    std::vector<std::size_t> at_least;  // blocks of size >= k, per root
    for (std::size_t k = 1; k < ker.size(); ++k) at_least.push_back((ker[k] - ker[k - 1]) / d);
    at_least.push_back(0);
    for (std::size_t k = at_least.size() - 1; k-- > 0;)
      for (std::size_t c = at_least[k + 1]; c < at_least[k]; ++c) fd.block_sizes.push_back(static_cast<int>(k + 1));
    fd.roots = hp::roots_squarefree(pf.factor, bits);
    j.factors.push_back(std::move(fd));
  }

  // Group distinct roots by exact modulus; the numeric order is only trusted
  // beyond a 2^-64 relative gap.
  std::vector<RootRef> refs;
  for (std::size_t f = 0; f < j.factors.size(); ++f)
    for (std::size_t r = 0; r < j.factors[f].roots.size(); ++r) refs.push_back({f, r, hp::norm(j.factors[f].roots[r])});
  std::sort(refs.begin(), refs.end(), [](const RootRef& a, const RootRef& b) { return a.mod2 > b.mod2; });

  const hp::Real tie_window = ldexp(hp::Real(1), -64);
  const hp::Real resolution = ldexp(hp::Real(1), -(bits - 32));
  std::vector<std::vector<std::size_t>> classes;  // indices into refs
  for (std::size_t i = 0; i < refs.size(); ++i) {
    bool placed = false;
    for (auto& cls : classes) {
      const RootRef& rep = refs[cls.front()];
      hp::Real rel = abs(rep.mod2 - refs[i].mod2) / rep.mod2;
      if (rel > tie_window) continue;
      auto dec = algebraic::same_modulus(root_of(j, rep.f, rep.r), root_of(j, refs[i].f, refs[i].r), bits);
      j.exact_decisions = j.exact_decisions && dec.exact;
      if (dec.value) {
        cls.push_back(i);
        placed = true;
        break;
      }
      if (rel < resolution) {
        if (2 * bits > kMaxBits) throw Error(ErrorCode::Internal, "eigenvalue moduli not separated at maximum precision");
        return eigen_structure_at(m, 2 * bits);
      }
    }
    if (!placed) classes.push_back({i});
  }
  std::sort(classes.begin(), classes.end(), [&](const auto& a, const auto& b) { return refs[a.front()].mod2 > refs[b.front()].mod2; });

  std::vector<std::vector<std::size_t>> class_of(j.factors.size());
  for (std::size_t f = 0; f < j.factors.size(); ++f) class_of[f].assign(j.factors[f].roots.size(), 0);
  for (std::size_t c = 0; c < classes.size(); ++c)
    for (auto i : classes[c]) class_of[refs[i].f][refs[i].r] = c;

  j.spectral_radius = sqrt(refs[classes.front().front()].mod2);
  j.multiplicity = 0;
  for (auto i : classes.front()) j.multiplicity = std::max(j.multiplicity, j.factors[refs[i].f].block_sizes.front());

  // Dominant eigenvalues and the group generated by their directions.
  std::vector<long> orders;
  bool positive_dim = false, all_zero = true;
  for (auto i : classes.front()) {
    const auto& fd = j.factors[refs[i].f];
    int count = static_cast<int>(std::count(fd.block_sizes.begin(), fd.block_sizes.end(), j.multiplicity));
    if (count == 0) continue;
    DominantEigenvalue de;
    de.factor_index = refs[i].f;
    de.root_index = refs[i].r;
    de.value = fd.roots[refs[i].r];
    de.blocks = count;
    auto num = root_of(j, de.factor_index, de.root_index);
    auto real = algebraic::is_real(num, bits);
    j.exact_decisions = j.exact_decisions && real.exact;
    de.theta_zero = real.value && de.value.re.sign() > 0;
    de.theta = de.theta_zero ? hp::Real(0) : hp::wrap_angle(hp::arg(de.value));
    if (!de.theta_zero) {
      all_zero = false;
      auto ord = algebraic::unit_direction_order(num, bits);
      j.exact_decisions = j.exact_decisions && ord.exact;
      if (ord.order == 0) positive_dim = true;
      else orders.push_back(ord.order);
    }
    j.dominant.push_back(std::move(de));
  }
  std::sort(j.dominant.begin(), j.dominant.end(), [](const auto& a, const auto& b) { return a.theta < b.theta; });
  if (all_zero) j.theta_group = {ThetaKind::Trivial, 1};
  else if (positive_dim) j.theta_group = {ThetaKind::PositiveDimensional, 0};
  else j.theta_group = {ThetaKind::FiniteCyclic, std::accumulate(orders.begin(), orders.end(), 1L, [](long a, long b) { return std::lcm(a, b); })};

  // Block list in the lexicographic order of (|eigenvalue|, size), then angle.
  struct Keyed {
    JordanBlock block;
    std::size_t cls;
    hp::Real angle;
  };
  std::vector<Keyed> keyed;
  for (std::size_t f = 0; f < j.factors.size(); ++f)
    for (std::size_t r = 0; r < j.factors[f].roots.size(); ++r) {
      hp::Real angle = hp::wrap_angle(hp::arg(j.factors[f].roots[r]));
      for (const auto& dm : j.dominant)
        if (dm.factor_index == f && dm.root_index == r) angle = dm.theta;
      for (int size : j.factors[f].block_sizes)
        keyed.push_back({{j.factors[f].roots[r], size, f, r}, class_of[f][r], angle});
    }
  std::stable_sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    if (a.cls != b.cls) return a.cls < b.cls;
    if (a.block.size != b.block.size) return a.block.size > b.block.size;
    return a.angle < b.angle;
  });
  for (std::size_t i = 0; i < keyed.size(); ++i) {
    j.blocks.push_back(keyed[i].block);
    if (keyed[i].cls == 0 && keyed[i].block.size == j.multiplicity) {
      j.dominant_indices.push_back(i);
      j.theta.push_back(keyed[i].angle);
    }
  }
  return j;
}

}  // namespace

hp::CMatrix spectral_projector(const ExactMatrix& m, const JordanData& j, std::size_t f, std::size_t r, long bits) {
  const std::size_t n = m.rows();
  hp::PrecisionGuard guard(bits);
  hp::Complex mu = root_of(j, f, r).at(bits);
  const auto& fd = j.factors[f];
  const int top = fd.block_sizes.front();
  const std::size_t alg = static_cast<std::size_t>(fd.exponent);
  hp::CMatrix a = matrix_power(shifted(m, mu, bits), top);
  auto ker = hp::kernel_with_rank(a, n - alg);
  auto ran = hp::range_with_rank(a, n - alg);
  std::vector<hp::CVector> cols = ker;
  cols.insert(cols.end(), ran.begin(), ran.end());
  hp::CMatrix s = hp::CMatrix::from_columns(cols);
  hp::CMatrix sinv = hp::inverse(s);
  hp::CMatrix p(n, n, bits);
  for (std::size_t row = 0; row < n; ++row)
    for (std::size_t col = 0; col < n; ++col)
      for (std::size_t k = 0; k < alg; ++k) p(row, col) += s(row, k) * sinv(k, col);
  return p;
}

std::pair<hp::CMatrix, hp::CMatrix> limit_operators(const ExactMatrix& m, const JordanData& j,
                                                    std::vector<hp::CMatrix>* projectors) {
  const long work = j.bits + 64;
  const std::size_t n = m.rows();
  hp::PrecisionGuard guard(work);
  hp::CMatrix limit(n, n, work), averaged(n, n, work);
  const int mm = j.multiplicity;
  for (const auto& d : j.dominant) {
    hp::CMatrix p = spectral_projector(m, j, d.factor_index, d.root_index, work);
    hp::Complex mu = root_of(j, d.factor_index, d.root_index).at(work);
    // mu^(1-m) / (m-1)! * (M - mu)^(m-1) P_mu
    hp::Complex scale = hp::Complex(hp::Real(1)) / (hp::pow(mu, mm - 1) * hp::Complex(factorial(mm - 1)));
    hp::CMatrix term = (matrix_power(shifted(m, mu, work), mm - 1) * p).scaled(scale);
    limit = limit + term;
    if (d.theta_zero) averaged = averaged + term;
    if (projectors) projectors->push_back(std::move(p));
  }
  return {limit, averaged};
}

hp::CMatrix twist(const hp::CMatrix& l, const JordanData& j, const std::vector<hp::CMatrix>& projectors, long n) {
  hp::PrecisionGuard guard(l.bits());
  hp::CMatrix out = l;
  for (std::size_t k = 0; k < j.dominant.size(); ++k) {
    if (j.dominant[k].theta_zero) continue;
    hp::Complex factor = hp::polar(hp::Real(1), -j.dominant[k].theta * hp::Real(n)) - hp::Complex(hp::Real(1));
    out = out + (projectors[k] * l).scaled(factor);
  }
  return out;
}

RateCheck fit_rate(const std::vector<long>& n, const std::vector<hp::Real>& dev, bool log_form, long fit_lo,
                   long fit_hi, const hp::Real& floor) {
  RateCheck rc;
  rc.form = log_form ? "log(n)/n" : "1/n";
  rc.n = n;
  rc.deviation = dev;
  rc.fit_lo = fit_lo;
  rc.fit_hi = fit_hi;
  auto rate = [&](long k) {
    double x = static_cast<double>(k);
    return log_form ? std::log(x) / x : 1.0 / x;
  };
  rc.exact = true;
  std::vector<double> eff(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) {
    hp::Real e = dev[i] - floor;
    eff[i] = e.sign() > 0 ? e.to_double() : 0.0;
    if (eff[i] > 0) rc.exact = false;
  }
  for (std::size_t i = 0; i < n.size(); ++i)
    if (n[i] >= fit_lo && n[i] <= fit_hi) rc.constant = std::max(rc.constant, eff[i] / rate(n[i]));
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] <= fit_hi) continue;
    if (eff[i] > rc.constant * rate(n[i]) * (1 + 1e-9)) {
      rc.holds = false;
      if (rc.first_violation < 0) rc.first_violation = n[i];
    }
  }
  return rc;
}

LambdaInfinity lambda_infinity(const ExactMatrix& m, const JordanData& j, const LambdaInfinityOptions& opts) {
  LambdaInfinity out;
  if (opts.plain_limit && j.theta_group.kind == ThetaKind::PositiveDimensional)
    throw Error(ErrorCode::ThetaNotResolved,
                "plain limit requested but the closure of the dominant directions is positive dimensional");
  if (j.spectral_radius <= hp::Real(1))
    out.warnings.push_back("spectral radius <= 1: the averaged error rate is not meaningful");
  auto [limit, averaged] = limit_operators(m, j, &out.projectors);
  out.limit = limit;
  out.averaged = averaged;

  const long work = j.bits + 64;
  hp::PrecisionGuard guard(work);
  const std::size_t n = m.rows();
  hp::Real lam = j.spectral_radius;
  lam.set_bits(work);
  hp::CMatrix step = hp::CMatrix::from_exact(m, work).scaled(hp::Complex(hp::Real(1) / lam));
  hp::CMatrix power = hp::CMatrix::identity(n, work), sum(n, n, work);
  std::vector<long> ns, bigns;
  std::vector<hp::Real> dev, avg_dev;
  const long top = std::max(opts.n_max, opts.N_max);
  for (long k = 1; k <= top; ++k) {
    power = power * step;
    hp::CMatrix ln = power.scaled(hp::Complex(hp::Real(1) / pow(hp::Real(k), j.multiplicity - 1)));
    if (k <= opts.n_max) {
      ns.push_back(k);
      dev.push_back(hp::max_norm(twist(ln, j, out.projectors, k) - limit));
    }
    sum = sum + ln;
    if (k <= opts.N_max) {
      bigns.push_back(k);
      avg_dev.push_back(hp::max_norm(sum.scaled(hp::Complex(hp::Real(1) / hp::Real(k))) - averaged));
    }
  }
  hp::Real floor = ldexp(hp::Real(1) + hp::max_norm(limit), -(j.bits - 24));
  out.twisted_rate = fit_rate(ns, dev, false, 20, 50, floor);
  out.averaged_rate = fit_rate(bigns, avg_dev, true, 20, 50, floor);
  out.averaged_rank = hp::numeric_rank(averaged, ldexp(hp::Real(1), -(j.bits / 2)));
  out.strictly_dominant_dim = j.strictly_dominant_dim();
  if (opts.plain_limit) out.plain_subsequence_limit = twist(limit, j, out.projectors, -opts.plain_residue);
  return out;
}

AsymptoticReport power_asymptotics(const ExactMatrix& m, const JordanData& j, const std::vector<long>& n_values,
                                   std::size_t digit_budget) {
  if (n_values.empty()) throw Error(ErrorCode::InvalidArgument, "empty n range");
  AsymptoticReport rep;
  std::vector<long> ns = n_values;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  if (ns.front() < 1) throw Error(ErrorCode::InvalidArgument, "n values must be positive");
  const long work = j.bits + 32;
  hp::PrecisionGuard guard(work);
  hp::Real lam = j.spectral_radius;
  lam.set_bits(work);

  ExactMatrix power = m.pow(static_cast<unsigned long>(ns.front()));
  long current = ns.front();
  for (long k : ns) {
    if (k > current) {
      power = power * m.pow(static_cast<unsigned long>(k - current));
      current = k;
    }
    if (power.max_digits() > digit_budget)
      throw Error(ErrorCode::Overflow, "exact power M^" + std::to_string(k) + " exceeds the digit budget");
    hp::Real denom = pow(hp::Real(k), j.multiplicity - 1) * pow(lam, k);
    rep.n_values.push_back(k);
    rep.normalized_norms.push_back(hp::max_norm(hp::CMatrix::from_exact(power, work)) / denom);
  }

  if (j.theta_group.kind != ThetaKind::Trivial) {
    rep.rate_kind = "oscillating";
    rep.fitted_rate = std::nan("");
    rep.geometric_ratio = std::nan("");
    return rep;
  }
  auto lim = limit_operators(m, j).first;
  hp::Real limit_norm = hp::max_norm(lim);
  limit_norm.set_bits(work);
  rep.limit = limit_norm;
  const hp::Real floor = ldexp(hp::Real(1) + limit_norm, -(j.bits - 24));
  std::vector<double> xs, ls, ys;
  for (std::size_t i = 0; i < rep.n_values.size(); ++i) {
    hp::Real d = abs(rep.normalized_norms[i] - limit_norm);
    rep.deviations.push_back(d);
    if (d > floor) {
      xs.push_back(std::log(static_cast<double>(rep.n_values[i])));
      ls.push_back(static_cast<double>(rep.n_values[i]));
      ys.push_back(log(d).to_double());
    }
  }
  auto slope = [](const std::vector<double>& x, const std::vector<double>& y) {
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sxy += (x[i] - mx) * (y[i] - my);
      sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0 ? sxy / sxx : 0.0;
  };
  if (xs.size() < 2) {
    rep.rate_kind = "exact";
    rep.fitted_rate = 0;
    rep.geometric_ratio = 0;
    return rep;
  }
  rep.fitted_rate = slope(xs, ys);
  rep.geometric_ratio = std::exp(slope(ls, ys));
  rep.rate_kind = rep.fitted_rate < -3 ? "geometric" : "power";
  return rep;
}

PerronFrobeniusReport perron_frobenius_check(const ExactMatrix& m, const std::vector<ExactVector>& gens,
                                             double tolerance, long bits) {
  if (bits <= 0) bits = hp::default_bits();
  const std::size_t n = m.rows();
  if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "perron_frobenius_check needs a square matrix");
  if (gens.size() != n)
    throw Error(ErrorCode::InvalidArgument, "only simplicial cones are supported: give exactly dim generators");
  for (const auto& g : gens)
    if (g.size() != n) throw Error(ErrorCode::DimensionMismatch, "cone generator has the wrong length");
  ExactMatrix g = ExactMatrix::from_columns(gens);
  if (!m.is_real() || !g.is_real()) throw Error(ErrorCode::InvalidArgument, "cone check needs real data");
  if (g.rank() < n) throw Error(ErrorCode::InvalidArgument, "cone generators do not span the space");
  ExactMatrix ginv = g.inverse();
  ExactMatrix image = ginv * m * g;  // column i: coordinates of M g_i over the generators
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < n; ++r)
      if (image(r, c).re() < 0)
        throw Error(ErrorCode::ConeNotPreserved, "M maps generator " + std::to_string(c) + " outside the cone");

  PerronFrobeniusReport rep;
  JordanData j = eigen_structure(m, bits);
  hp::PrecisionGuard guard(bits);
  rep.eigenvalue = j.spectral_radius;
  rep.dominant_real_eigenvalue =
      std::any_of(j.dominant.begin(), j.dominant.end(), [](const DominantEigenvalue& d) { return d.theta_zero; });
  if (!rep.dominant_real_eigenvalue) return rep;

  auto averaged = limit_operators(m, j).second;
  hp::PrecisionGuard work(averaged.bits());
  hp::CVector x(n, hp::Complex(hp::Real(0)));
  for (const auto& gen : gens)
    for (std::size_t i = 0; i < n; ++i) x[i] += gen[i].to_complex();
  rep.eigenvector = averaged * x;
  hp::CVector coords = hp::CMatrix::from_exact(ginv, averaged.bits()) * rep.eigenvector;
  hp::Real scale = hp::max_abs(coords);
  rep.nonnegative = !scale.is_zero();
  const hp::Real tol(tolerance);
  for (auto& c : coords) {
    hp::Complex z = c / hp::Complex(scale);
    if (z.re < -tol || abs(z.im) > tol) rep.nonnegative = false;
    rep.cone_coordinates.push_back(z.re);
  }
  hp::CMatrix mh = hp::CMatrix::from_exact(m, averaged.bits());
  hp::CVector mv = mh * rep.eigenvector;
  hp::Real lam = j.spectral_radius;
  for (std::size_t i = 0; i < n; ++i) mv[i] -= rep.eigenvector[i] * lam;
  hp::Real vn = hp::max_abs(rep.eigenvector);
  rep.residual = vn.is_zero() ? hp::Real(0) : hp::max_abs(mv) / vn;
  return rep;
}

}  // namespace kdyn::jordan
