#include "kdyn/degrees.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "kdyn/error.hpp"
#include "kdyn/parallel.hpp"

namespace kdyn::degrees {
namespace {

long resolve_bits(long bits) { return bits > 0 ? bits : hp::default_bits(); }

std::size_t digits(const GaussRational& x) {
  auto size = [](const mpq_class& q) {
    return std::max(mpz_sizeinbase(q.get_num_mpz_t(), 10), mpz_sizeinbase(q.get_den_mpz_t(), 10));
  };
  return std::max(size(x.re()), size(x.im()));
}

hp::CVector to_hp(const ExactVector& v, long bits) {
  hp::PrecisionGuard guard(bits);
  hp::CVector out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x.to_complex());
  return out;
}

hp::CVector rounded(const hp::CVector& v, long bits) {
  hp::CVector out = v;
  for (auto& z : out) {
    z.re.set_bits(bits);
    z.im.set_bits(bits);
  }
  return out;
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}

bool close(const hp::Real& a, const hp::Real& b, double tol) {
  return abs(a - b) <= hp::Real(tol) * max(abs(a), abs(b));
}

// Matrix of alpha -> T cup alpha from H^{p,p} to H^{p+s,p+s}.
hp::CMatrix cup_matrix(const models::GradedCohomologyAction& a, const hp::CVector& t, int s, int p, long bits) {
  const std::size_t dp = a.dim(p), dr = a.dim(p + s);
  hp::PrecisionGuard guard(bits);
  hp::CMatrix c(dr, dp, bits);
  if (s == 0) {
    for (std::size_t i = 0; i < dp; ++i) c(i, i) = t.at(0);
    return c;
  }
  if (!a.cup) throw Error(ErrorCode::CupMissing, "the action carries no cup product");
  const std::size_t ds = a.dim(s);
  // Even-degree classes commute, so either table order serves.
  if (auto it = a.cup->table.find({s, p}); it != a.cup->table.end()) {
    const ExactMatrix& tab = it->second;
    for (std::size_t x = 0; x < ds; ++x) {
      if (t[x].is_zero()) continue;
      for (std::size_t y = 0; y < dp; ++y)
        for (std::size_t r = 0; r < dr; ++r) {
          const GaussRational& e = tab(r, x * dp + y);
          if (!e.is_zero()) c(r, y) += t[x] * e.to_complex();
        }
    }
    return c;
  }
  if (auto it = a.cup->table.find({p, s}); it != a.cup->table.end()) {
    const ExactMatrix& tab = it->second;
    for (std::size_t y = 0; y < dp; ++y)
      for (std::size_t x = 0; x < ds; ++x) {
        if (t[x].is_zero()) continue;
        for (std::size_t r = 0; r < dr; ++r) {
          const GaussRational& e = tab(r, y * ds + x);
          if (!e.is_zero()) c(r, y) += t[x] * e.to_complex();
        }
      }
    return c;
  }
  throw Error(ErrorCode::CupMissing, "no cup product for degrees " + std::to_string(s) + "," + std::to_string(p));
}

// Greedy independent columns: a column is kept when its residual against the
// kept ones exceeds `threshold` (defaults to tol times the largest column norm).
std::vector<std::size_t> independent_columns(const hp::CMatrix& c, const hp::Real& tol,
                                             std::optional<hp::Real> threshold = std::nullopt) {
  std::vector<hp::CVector> basis;  // orthonormal
  std::vector<std::size_t> keep;
  hp::Real largest = hp::Real::with_bits(c.bits());
  for (std::size_t j = 0; j < c.cols(); ++j) {
    hp::Real nrm = hp::Real::with_bits(c.bits());
    for (std::size_t i = 0; i < c.rows(); ++i) nrm += hp::norm(c(i, j));
    largest = max(largest, sqrt(nrm));
  }
  if (largest.is_zero()) return keep;
  const hp::Real cut = threshold ? *threshold : tol * largest;
  for (std::size_t j = 0; j < c.cols(); ++j) {
    hp::CVector v = c.column(j);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) {
        hp::Complex dot(hp::Real::with_bits(c.bits()));
        for (std::size_t i = 0; i < v.size(); ++i) dot += hp::conj(q[i]) * v[i];
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= dot * q[i];
      }
    hp::Real nrm = hp::Real::with_bits(c.bits());
    for (const auto& z : v) nrm += hp::norm(z);
    nrm = sqrt(nrm);
    if (nrm > cut) {
      for (auto& z : v) z = z / nrm;
      basis.push_back(std::move(v));
      keep.push_back(j);
    }
  }
  return keep;
}

// Size of the largest Jordan block of q at mu, or 0 when mu is not an
// eigenvalue. Ranks are measured against the scale (|mu| + ||q||)^step so that
// small quotients are not mistaken for rank-deficient ones.
int jordan_size(const hp::CMatrix& q, const hp::Complex& mu, const hp::Real& tol) {
  const std::size_t r = q.rows();
  hp::CMatrix shifted = q;
  for (std::size_t i = 0; i < r; ++i) shifted(i, i) -= mu;
  const hp::Real scale = hp::abs(mu) + hp::max_norm(q);
  hp::CMatrix power = shifted;
  std::size_t prev = r;
  int size = 0;
  for (std::size_t step = 1; step <= r; ++step) {
    std::size_t rank = independent_columns(power, tol, tol * pow(scale, static_cast<long>(step))).size();
    if (rank == prev) break;
    prev = rank;
    size = static_cast<int>(step);
    power = power * shifted;
  }
  return size;
}

}  // namespace

DegreeSequence degree_sequence(const models::GradedCohomologyAction& action, int p, const std::vector<long>& n_values,
                               long bits, std::size_t digit_budget) {
  bits = resolve_bits(bits);
  if (p < 0 || p > action.k) throw Error(ErrorCode::InvalidArgument, "degree index out of range");
  if (n_values.empty()) throw Error(ErrorCode::InvalidArgument, "empty n range");
  std::vector<long> ns = n_values;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  if (ns.front() < 1) throw Error(ErrorCode::InvalidArgument, "n values must be positive");

  const ExactMatrix& b = action.blocks[static_cast<std::size_t>(p)];
  jordan::JordanData j = jordan::eigen_structure(b, bits);
  DegreeSequence out;
  out.p = p;
  out.degree = j.spectral_radius;
  out.multiplicity = j.multiplicity;

  const long work = bits + 32;
  hp::PrecisionGuard guard(work);
  hp::Real lam = j.spectral_radius;
  lam.set_bits(work);
  ExactVector v = action.kahler_class.at(static_cast<std::size_t>(p));
  long current = 0;
  for (long n : ns) {
    while (current < n) {
      v = b * v;
      ++current;
      std::size_t d = 0;
      for (const auto& x : v) d = std::max(d, digits(x));
      if (d > digit_budget)
        throw Error(ErrorCode::Overflow, "degree sequence at n = " + std::to_string(current) + " exceeds the digit budget");
    }
    hp::Real value = hp::max_abs(to_hp(v, work));
    out.n.push_back(n);
    out.normalized.push_back(value / (pow(hp::Real(n), j.multiplicity - 1) * pow(lam, n)));
    out.values.push_back(std::move(value));
  }

  std::vector<double> xs, ys;
  auto collect = [&](bool windowed) {
    xs.clear();
    ys.clear();
    for (std::size_t i = 0; i < out.n.size(); ++i) {
      if (windowed && (out.n[i] < out.fit_lo || out.n[i] > out.fit_hi)) continue;
      if (out.values[i].is_zero()) continue;
      xs.push_back(static_cast<double>(out.n[i]));
      ys.push_back(log(out.values[i]).to_double() - (j.multiplicity - 1) * std::log(static_cast<double>(out.n[i])));
    }
  };
  collect(true);
  if (xs.size() < 2) collect(false);
  out.fitted_degree = xs.size() >= 2 ? std::exp(slope(xs, ys)) : 0.0;
  return out;
}

std::pair<int, int> find_plateau(const std::vector<hp::Real>& d) {
  if (d.empty()) return {0, 0};
  hp::Real top = *std::max_element(d.begin(), d.end());
  int first = -1, last = -1;
  for (std::size_t p = 0; p < d.size(); ++p)
    if (close(d[p], top, kPlateauTolerance)) {
      if (first < 0) first = static_cast<int>(p);
      last = static_cast<int>(p);
    }
  return {first, last};
}

DegreeProfile dynamical_degrees(const models::GradedCohomologyAction& action, long bits) {
  bits = resolve_bits(bits);
  const std::size_t n = action.blocks.size();
  std::vector<jordan::JordanData> data(n);
  parallel_for(n, [&](std::size_t p) { data[p] = jordan::eigen_structure(action.blocks[p], bits); });
  DegreeProfile prof;
  prof.tag = action.tag;
  prof.sublattice = action.sublattice;
  hp::PrecisionGuard guard(bits);
  prof.entropy = hp::Real(0);
  for (const auto& j : data) {
    prof.degrees.push_back(j.spectral_radius);
    prof.multiplicities.push_back(j.multiplicity);
    prof.theta.push_back(j.theta_group);
    prof.exact_decisions = prof.exact_decisions && j.exact_decisions;
    prof.entropy = max(prof.entropy, log(j.spectral_radius));
  }
  prof.plateau = find_plateau(prof.degrees);
  return prof;
}

ConcavityReport check_concavity(const DegreeProfile& profile) {
  ConcavityReport rep;
  const auto& d = profile.degrees;
  const int k = static_cast<int>(d.size()) - 1;
  const hp::Real eps = ldexp(hp::Real(1), -64);
  for (int p = 1; p < k; ++p) {
    const auto P = static_cast<std::size_t>(p);
    hp::Real sq = d[P] * d[P];
    hp::Real margin = sq - d[P - 1] * d[P + 1];
    if (margin < -eps * sq) {
      rep.concave = false;
      rep.violations.push_back(p);
      rep.messages.push_back("d_" + std::to_string(p) + "^2 < d_" + std::to_string(p - 1) + " d_" + std::to_string(p + 1));
    }
    rep.margins.push_back(std::move(margin));
  }
  for (int p = 1; p <= k; ++p) {
    const auto P = static_cast<std::size_t>(p);
    rep.ratios.push_back(d[P - 1] / d[P]);
    if (p > 1 && rep.ratios[P - 1] < rep.ratios[P - 2] * (hp::Real(1) - eps)) rep.ratios_increasing = false;
  }
  auto [m, m2] = find_plateau(d);
  for (int p = 0; p < k; ++p) {
    const auto P = static_cast<std::size_t>(p);
    const bool up = d[P + 1] > d[P] && !close(d[P + 1], d[P], kPlateauTolerance);
    const bool down = d[P + 1] < d[P] && !close(d[P + 1], d[P], kPlateauTolerance);
    if ((p < m && !up) || (p >= m2 && !down) || (p >= m && p < m2 && (up || down))) rep.pattern = false;
  }
  if (k >= 1 && (!close(d.front(), hp::Real(1), kPlateauTolerance) || !close(d.back(), hp::Real(1), kPlateauTolerance))) {
    rep.pattern = false;
    rep.messages.push_back("d_0 and d_k are not both 1");
  }
  if (!rep.concave || !rep.pattern) {
    if (profile.tag == models::ModelTag::Raw) {
      rep.severity = "warning";
      rep.messages.insert(rep.messages.begin(), "model inconsistency: the raw action cannot come from a Kaehler automorphism");
    } else {
      rep.severity = "error";
      rep.messages.insert(rep.messages.begin(), "log-concavity failed on a geometric model; this is a computation error");
    }
  }
  return rep;
}

RelativeDegreeProfile relative_degrees(const models::GradedCohomologyAction& action, const hp::CVector& T_class, int s,
                                       const hp::Complex& lambda_T, long bits, double eigen_tolerance) {
  bits = resolve_bits(bits);
  const int k = action.k;
  if (s < 0 || s > k) throw Error(ErrorCode::InvalidArgument, "bidegree s out of range");
  if (T_class.size() != action.dim(s)) throw Error(ErrorCode::DimensionMismatch, "[T] has the wrong length");
  if (s > 0 && !action.cup) throw Error(ErrorCode::CupMissing, "relative degrees need the cup product");
  const long work = bits + 64;
  hp::PrecisionGuard guard(work);
  hp::CVector t = rounded(T_class, work);

  RelativeDegreeProfile rel;
  rel.T_class = T_class;
  rel.s = s;
  rel.lambda_T = lambda_T;
  {
    hp::CVector ft = hp::CMatrix::from_exact(action.blocks[static_cast<std::size_t>(s)], work) * t;
    for (std::size_t i = 0; i < ft.size(); ++i) ft[i] -= lambda_T * t[i];
    hp::Real scale = hp::abs(lambda_T) * hp::max_abs(t);
    if (scale.is_zero()) throw Error(ErrorCode::NotEigenclass, "[T] or lambda_T is zero");
    rel.eigen_residual = (hp::max_abs(ft) / scale).to_double();
    if (rel.eigen_residual > eigen_tolerance)
      throw Error(ErrorCode::NotEigenclass, "f^*[T] differs from lambda_T [T] (relative residual " +
                                                std::to_string(rel.eigen_residual) + ")");
  }

  const int count = k - s;
  std::vector<hp::CMatrix> quotients(static_cast<std::size_t>(std::max(count, 0)));
  std::vector<hp::CMatrix> cups;
  for (int p = 1; p <= count; ++p) cups.push_back(cup_matrix(action, t, s, p, work));
  rel.relative_degrees.assign(quotients.size(), hp::Real(0));
  rel.relative_multiplicities.assign(quotients.size(), 0);
  rel.quotient_dims.assign(quotients.size(), 0);
  const hp::Real tol = ldexp(hp::Real(1), -(bits / 2));

  parallel_for(quotients.size(), [&](std::size_t idx) {
    hp::PrecisionGuard inner(work);
    const int p = static_cast<int>(idx) + 1;
    const ExactMatrix& bp = action.blocks[static_cast<std::size_t>(p)];
    const hp::CMatrix& c = cups[idx];
    auto piv = independent_columns(c, tol);
    const std::size_t r = piv.size();
    rel.quotient_dims[idx] = r;
    if (r == 0) return;
    // Q (C e_j) = C B_p e_j on the image of cup with [T].
    hp::CMatrix cb = c * hp::CMatrix::from_exact(bp, work);
    std::vector<hp::CVector> ycols, zcols;
    for (auto j : piv) {
      ycols.push_back(c.column(j));
      zcols.push_back(cb.column(j));
    }
    hp::CMatrix y = hp::CMatrix::from_columns(ycols), z = hp::CMatrix::from_columns(zcols);
    hp::CMatrix yh = y.conj_transpose();
    hp::CMatrix q = hp::inverse(yh * y) * (yh * z);

    // The quotient spectrum is part of the spectrum of B_p.
    jordan::JordanData j = jordan::eigen_structure(bp, work);
    struct Cand {
      hp::Complex mu;
      hp::Real mod;
    };
    std::vector<Cand> cands;
    for (const auto& f : j.factors)
      for (const auto& root : f.roots) cands.push_back({root, hp::abs(root)});
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.mod > b.mod; });
    const hp::Real tie = ldexp(hp::Real(1), -64);
    for (std::size_t i = 0; i < cands.size(); ++i) {
      int size = jordan_size(q, cands[i].mu, tol);
      if (size == 0) continue;
      rel.relative_degrees[idx] = cands[i].mod;
      int best = size;
      for (std::size_t l = i + 1; l < cands.size(); ++l) {
        if (abs(cands[l].mod - cands[i].mod) > tie * cands[i].mod) break;
        best = std::max(best, jordan_size(q, cands[l].mu, tol));
      }
      rel.relative_multiplicities[idx] = best;
      break;
    }
  });

  if (count >= 1) {
    rel.prop_lower_margin = pow(rel.relative_degrees.front(), count) - hp::Real(1) / hp::abs(lambda_T);
  } else {
    rel.prop_lower_margin = hp::Real(0);
  }
  return rel;
}

SubmultiplicativityReport submultiplicativity_check(const RelativeDegreeProfile& rel, int p1, int p2, double tolerance) {
  const int top = static_cast<int>(rel.relative_degrees.size());
  if (p1 < 1 || p2 < 1 || p1 + p2 > top) throw Error(ErrorCode::InvalidArgument, "need p1, p2 >= 1 and p1 + p2 <= k - s");
  SubmultiplicativityReport rep;
  rep.p1 = p1;
  rep.p2 = p2;
  const auto& l = rel.relative_degrees;
  hp::Real prod = l[static_cast<std::size_t>(p1 - 1)] * l[static_cast<std::size_t>(p2 - 1)];
  rep.margin = prod - l[static_cast<std::size_t>(p1 + p2 - 1)];
  rep.holds = rep.margin >= -hp::Real(tolerance) * max(hp::Real(1), prod);
  return rep;
}

CesaroClassReport cesaro_class_limit(const models::GradedCohomologyAction& action, const hp::CVector& S, int s,
                                     long N_max, long bits) {
  bits = resolve_bits(bits);
  if (s < 0 || s > action.k) throw Error(ErrorCode::InvalidArgument, "bidegree s out of range");
  if (N_max < 1) throw Error(ErrorCode::InvalidArgument, "N_max must be positive");
  const ExactMatrix& b = action.blocks[static_cast<std::size_t>(s)];
  if (S.size() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "class has the wrong length");
  jordan::JordanData j = jordan::eigen_structure(b, bits);
  auto [limit_op, averaged] = jordan::limit_operators(b, j);
  const long work = averaged.bits();
  hp::PrecisionGuard guard(work);

  CesaroClassReport rep;
  rep.s = s;
  rep.degree = j.spectral_radius;
  rep.multiplicity = j.multiplicity;
  hp::CVector x = rounded(S, work);
  rep.limit = averaged * x;

  hp::Real lam = j.spectral_radius;
  lam.set_bits(work);
  hp::CMatrix step = hp::CMatrix::from_exact(b, work).scaled(hp::Complex(hp::Real(1) / lam));
  hp::CVector w = x, acc(x.size(), hp::Complex(hp::Real::with_bits(work)));
  for (long n = 1; n <= N_max; ++n) {
    w = step * w;
    hp::Real scale = hp::Real(1) / pow(hp::Real(n), j.multiplicity - 1);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w[i] * scale;
    hp::CVector diff(acc.size());
    const hp::Real inv = hp::Real(1) / hp::Real(n);
    for (std::size_t i = 0; i < acc.size(); ++i) diff[i] = acc[i] * inv - rep.limit[i];
    rep.N.push_back(n);
    rep.deviation.push_back(hp::max_abs(diff));
  }
  const hp::Real limit_norm = hp::max_abs(rep.limit);
  const hp::Real floor = ldexp(hp::Real(1) + limit_norm, -(bits - 24));
  const long hi = std::min<long>(50, N_max);
  rep.rate = jordan::fit_rate(rep.N, rep.deviation, true, std::min<long>(20, hi), hi, floor);

  hp::CVector fl = hp::CMatrix::from_exact(b, work) * rep.limit;
  for (std::size_t i = 0; i < fl.size(); ++i) fl[i] -= rep.limit[i] * lam;
  rep.eigen_residual = (hp::max_abs(fl) / (hp::Real(1) + limit_norm)).to_double();

  const hp::Real tol = ldexp(hp::Real(1), -(bits / 2));
  const std::size_t rank = hp::numeric_rank(averaged, tol);
  auto ker = hp::kernel_with_rank(averaged, rank);
  rep.kernel_dim = ker.size();
  const hp::Real target = hp::Real(1) + hp::max_abs(x);
  double worst = 0;
  for (const auto& v : ker) {
    hp::Real vn = hp::max_abs(v);
    if (vn.is_zero()) continue;
    hp::CVector y = x;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += v[i] * (target / vn);
    hp::CVector ly = averaged * y;
    for (std::size_t i = 0; i < ly.size(); ++i) ly[i] -= rep.limit[i];
    worst = std::max(worst, hp::max_abs(ly).to_double());
  }
  rep.kernel_invariance = worst;
  return rep;
}

DegreeChainReport degree_chain_check(const DegreeProfile& profile) {
  DegreeChainReport rep;
  const auto& d = profile.degrees;
  const int k = static_cast<int>(d.size()) - 1;
  if (k < 2) {
    rep.reason = "NotApplicable: no intermediate degrees";
    return rep;
  }
  const hp::Real one(1);
  for (int p = 1; p < k; ++p) {
    if (d[static_cast<std::size_t>(p)] <= one || close(d[static_cast<std::size_t>(p)], one, kPlateauTolerance)) {
      rep.reason = "NotApplicable: d_" + std::to_string(p) + " = 1";
      return rep;
    }
    for (int q = 1; q < p; ++q)
      if (close(d[static_cast<std::size_t>(p)], d[static_cast<std::size_t>(q)], kPlateauTolerance)) {
        rep.reason = "NotApplicable: d_" + std::to_string(q) + " = d_" + std::to_string(p);
        return rep;
      }
  }
  rep.applicable = true;
  rep.m = 1;
  for (int p = 2; p < k; ++p)
    if (d[static_cast<std::size_t>(p)] > d[static_cast<std::size_t>(rep.m)]) rep.m = p;
  rep.chain = close(d.back(), one, kPlateauTolerance);
  for (int p = 0; p < k; ++p) {
    const auto P = static_cast<std::size_t>(p);
    if (p < rep.m ? !(d[P + 1] > d[P]) : !(d[P + 1] < d[P])) rep.chain = false;
  }
  rep.verified = rep.chain;
  for (int s = rep.m; s < k; ++s) {
    DegreeChainStep st;
    st.s = s;
    st.bound = d[static_cast<std::size_t>(rep.m)] / d[static_cast<std::size_t>(k - s + rep.m)];
    st.holds = st.bound > one && !close(st.bound, one, kPlateauTolerance);
    rep.verified = rep.verified && st.holds;
    rep.steps.push_back(std::move(st));
  }
  return rep;
}

DualityReport duality_check(const models::GradedCohomologyAction& action, const DegreeProfile& profile, long bits) {
  bits = resolve_bits(bits);
  if (action.pushforward_blocks.size() != action.blocks.size())
    throw Error(ErrorCode::InvalidArgument, "duality check needs the pushforward blocks");
  const int k = action.k;
  DualityReport rep;
  rep.pushforward_radius.resize(static_cast<std::size_t>(k + 1));
  rep.relative_error.resize(static_cast<std::size_t>(k + 1));
  parallel_for(static_cast<std::size_t>(k + 1), [&](std::size_t p) {
    auto j = jordan::eigen_structure(action.pushforward_blocks[static_cast<std::size_t>(k) - p], bits);
    rep.pushforward_radius[p] = j.spectral_radius;
    rep.relative_error[p] = (abs(j.spectral_radius - profile.degrees[p]) / profile.degrees[p]).to_double();
  });
  rep.max_error = *std::max_element(rep.relative_error.begin(), rep.relative_error.end());
  return rep;
}

}  // namespace kdyn::degrees
