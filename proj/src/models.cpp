#include "kdyn/models.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <complex>

#include "kdyn/error.hpp"

namespace kdyn::models {
namespace {

bool is_gaussian_integer(const GaussRational& a) {
  return a.re().get_den() == 1 && a.im().get_den() == 1;
}

// Sign of the permutation sorting the concatenation of two disjoint sorted
// index lists; 0 when they overlap.
int merge_sign(const std::vector<int>& a, const std::vector<int>& b) {
  int inversions = 0;
  for (int x : a)
    for (int y : b) {
      if (x == y) return 0;
      if (x > y) ++inversions;
    }
  return inversions % 2 ? -1 : 1;
}

std::vector<int> merged(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out = a;
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t index_of(const std::vector<std::vector<int>>& list, const std::vector<int>& s) {
  return static_cast<std::size_t>(std::lower_bound(list.begin(), list.end(), s) - list.begin());
}

std::string subset_label(const std::vector<int>& s) {
  std::string out;
  for (int i : s) out += std::to_string(i + 1);
  return out.empty() ? "0" : out;
}

ExactMatrix select(const ExactMatrix& m, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
  ExactMatrix out(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) out(r, c) = m(rows[r], cols[c]);
  return out;
}

void fill_pushforwards(GradedCohomologyAction& a) {
  a.pushforward_blocks.clear();
  for (const auto& b : a.blocks) a.pushforward_blocks.push_back(b.inverse());
}

}  // namespace

std::string model_tag_name(ModelTag tag) {
  switch (tag) {
    case ModelTag::Torus: return "torus";
    case ModelTag::Mazur: return "mazur";
    case ModelTag::Raw: return "raw";
  }
  return "raw";
}

bool CupProduct::has(int p, int q) const { return p == 0 || q == 0 || table.count({p, q}) > 0; }

ExactVector CupProduct::multiply(int p, const ExactVector& a, int q, const ExactVector& b) const {
  if (p == 0) {
    ExactVector out = b;
    for (auto& x : out) x *= a.at(0);
    return out;
  }
  if (q == 0) {
    ExactVector out = a;
    for (auto& x : out) x *= b.at(0);
    return out;
  }
  auto it = table.find({p, q});
  if (it == table.end()) throw Error(ErrorCode::CupMissing, "no cup product for degrees " + std::to_string(p) + "," + std::to_string(q));
  const ExactMatrix& t = it->second;
  ExactVector out(t.rows());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (b[j].is_zero()) continue;
      GaussRational w = a[i] * b[j];
      const std::size_t col = i * b.size() + j;
      for (std::size_t r = 0; r < t.rows(); ++r)
        if (!t(r, col).is_zero()) out[r] += w * t(r, col);
    }
  }
  return out;
}

GradedCohomologyAction GradedCohomologyAction::inverse() const {
  if (pushforward_blocks.size() != blocks.size())
    throw Error(ErrorCode::NotInvertible, "inverse action needs the pushforward blocks");
  GradedCohomologyAction inv = *this;
  std::swap(inv.blocks, inv.pushforward_blocks);
  return inv;
}

std::vector<std::vector<int>> subsets(int n, int p) {
  std::vector<std::vector<int>> out;
  if (p < 0 || p > n) return out;
  std::vector<int> cur(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) cur[static_cast<std::size_t>(i)] = i;
  for (;;) {
    out.push_back(cur);
    int i = p - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - p + i) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < p; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

ExactMatrix exterior_power(const ExactMatrix& b, int p) {
  const int n = static_cast<int>(b.rows());
  auto idx = subsets(n, p);
  ExactMatrix out(idx.size(), idx.size());
  for (std::size_t r = 0; r < idx.size(); ++r)
    for (std::size_t c = 0; c < idx.size(); ++c) {
      if (p == 0) {
        out(r, c) = 1;
        continue;
      }
      std::vector<std::size_t> rows(idx[r].begin(), idx[r].end()), cols(idx[c].begin(), idx[c].end());
      out(r, c) = select(b, rows, cols).determinant();
    }
  return out;
}

GradedCohomologyAction torus_action(const TorusAutomorphism& t) {
  const int k = t.k;
  if (k < 1 || t.A.rows() != static_cast<std::size_t>(k) || !t.A.is_square())
    throw Error(ErrorCode::DimensionMismatch, "torus matrix must be k x k");
  for (std::size_t r = 0; r < t.A.rows(); ++r)
    for (std::size_t c = 0; c < t.A.cols(); ++c)
      if (!is_gaussian_integer(t.A(r, c)))
        throw Error(ErrorCode::InvalidArgument, "torus matrix entries must be Gaussian integers");
  GaussRational det = t.A.determinant();
  if (det.norm() != 1) throw Error(ErrorCode::NotUnitDeterminant, "det A = " + det.to_string() + " is not a unit of Z[i]");

  GradedCohomologyAction a;
  a.k = k;
  a.tag = ModelTag::Torus;
  const ExactMatrix b = t.A.transpose();
  std::vector<std::vector<std::vector<int>>> idx;
  for (int p = 0; p <= k; ++p) {
    idx.push_back(subsets(k, p));
    ExactMatrix ext = exterior_power(b, p);
    a.blocks.push_back(kronecker(ext, ext.conj()));
    std::vector<std::string> labels;
    for (const auto& i : idx.back())
      for (const auto& j : idx.back()) labels.push_back(subset_label(i) + "|" + subset_label(j));
    a.basis_labels.push_back(std::move(labels));
  }

  // Basis dz_I ^ dzbar_I' with index I * C(k,p) + I'.
  CupProduct cup;
  for (int p = 1; p <= k; ++p)
    for (int q = 1; p + q <= k; ++q) {
      const auto &ip = idx[static_cast<std::size_t>(p)], &iq = idx[static_cast<std::size_t>(q)],
                 &ir = idx[static_cast<std::size_t>(p + q)];
      const std::size_t np = ip.size(), nq = iq.size(), nr = ir.size();
      ExactMatrix tab(nr * nr, np * np * nq * nq);
      for (std::size_t I = 0; I < np; ++I)
        for (std::size_t Ib = 0; Ib < np; ++Ib)
          for (std::size_t J = 0; J < nq; ++J)
            for (std::size_t Jb = 0; Jb < nq; ++Jb) {
              int s1 = merge_sign(ip[I], iq[J]);
              int s2 = merge_sign(ip[Ib], iq[Jb]);
              if (!s1 || !s2) continue;
              // Moving dz_J across dzbar_I' contributes (-1)^(|I'| |J|).
              int sign = s1 * s2 * (((p * q) % 2) ? -1 : 1);
              std::size_t row = index_of(ir, merged(ip[I], iq[J])) * nr + index_of(ir, merged(ip[Ib], iq[Jb]));
              std::size_t col = (I * np + Ib) * (nq * nq) + (J * nq + Jb);
              tab(row, col) = sign;
            }
      cup.table.emplace(std::make_pair(p, q), std::move(tab));
    }
  a.cup = std::move(cup);

  // omega = (i/2) sum_j dz_j ^ dzbar_j and its cup powers.
  a.kahler_class.push_back({1});
  ExactVector omega(static_cast<std::size_t>(k * k));
  for (int j = 0; j < k; ++j) omega[static_cast<std::size_t>(j * k + j)] = GaussRational(0, mpq_class(1, 2));
  a.kahler_class.push_back(omega);
  for (int p = 2; p <= k; ++p) a.kahler_class.push_back(a.cup->multiply(p - 1, a.kahler_class.back(), 1, omega));
  fill_pushforwards(a);
  return a;
}

hp::CMatrix hermitian_coefficients(const hp::CVector& c, int k) {
  if (c.size() != static_cast<std::size_t>(k * k)) throw Error(ErrorCode::DimensionMismatch, "(1,1) class has the wrong size");
  long bits = 64;
  for (const auto& z : c) bits = std::max(bits, z.bits());
  hp::CMatrix h(static_cast<std::size_t>(k), static_cast<std::size_t>(k), bits);
  for (int j = 0; j < k; ++j)
    for (int l = 0; l < k; ++l) {
      const hp::Complex& z = c[static_cast<std::size_t>(j * k + l)];
      h(static_cast<std::size_t>(j), static_cast<std::size_t>(l)) = hp::Complex(z.im, -z.re);  // -i z
    }
  return h;
}

std::vector<double> hermitian_eigenvalues(const hp::CMatrix& h) {
  using Mat = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;
  const auto n = static_cast<Eigen::Index>(h.rows());
  Mat m(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) {
      const auto& z = h(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
      m(r, c) = {z.re.to_long_double(), z.im.to_long_double()};
    }
  Mat sym = (m + m.adjoint()) / 2.0L;
  Eigen::SelfAdjointEigenSolver<Mat> es(sym, Eigen::EigenvaluesOnly);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < n; ++i) out.push_back(static_cast<double>(es.eigenvalues()(i)));
  return out;
}

ExactMatrix real_lattice_matrix(const ExactMatrix& a) {
  const std::size_t k = a.rows();
  ExactMatrix out(2 * k, 2 * k);
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t c = 0; c < k; ++c) {
      GaussRational p = a(r, c).re(), q = a(r, c).im();
      out(r, c) = p;
      out(r, k + c) = -q;
      out(k + r, c) = q;
      out(k + r, k + c) = p;
    }
  return out;
}

int MazurModel::intersection_number(const std::vector<int>& indices) const {
  if (static_cast<int>(indices.size()) != k) throw Error(ErrorCode::InvalidArgument, "intersection needs k classes");
  std::vector<int> s = indices;
  std::sort(s.begin(), s.end());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 0 || s[i] > k) throw Error(ErrorCode::InvalidArgument, "class index out of range");
    if (i > 0 && s[i] == s[i - 1]) return 0;
  }
  return 2;
}

ExactMatrix MazurModel::invariant_form() const {
  const std::size_t n = static_cast<std::size_t>(k + 1);
  ExactMatrix g(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) g(r, c) = r == c ? GaussRational(2 - k) : GaussRational(1);
  return g;
}

MazurModel mazur_involutions(int k) {
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "Mazur models need k >= 2");
  MazurModel model;
  model.k = k;
  const int n = k + 1;
  for (int i = 0; i < n; ++i) {
    // Closed form: tau_i^* h_i = -h_i + 2 sum_{j != i} h_j, tau_i^* h_j = h_j.
    ExactMatrix t = ExactMatrix::identity(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) t(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = j == i ? -1 : 2;
    model.involutions.push_back(t);

    // Push-pull: pi_{i*} D = sum_{j != i} c_j H_j with c_j = int_X D . prod_{l not in {i,j}} h_l,
    // then tau_i^* D = pi_i^* pi_{i*} D - D.
    ExactMatrix pp(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d) {
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        std::vector<int> classes{d};
        for (int l = 0; l < n; ++l)
          if (l != i && l != j) classes.push_back(l);
        pp(static_cast<std::size_t>(j), static_cast<std::size_t>(d)) = model.intersection_number(classes);
      }
      pp(static_cast<std::size_t>(d), static_cast<std::size_t>(d)) -= 1;
    }
    model.push_pull.push_back(pp);
  }
  return model;
}

GradedCohomologyAction mazur_action(const MazurModel& model) {
  if (model.word.empty()) throw Error(ErrorCode::EmptyWord, "Mazur word is empty");
  const int k = model.k, n = k + 1;
  for (int w : model.word)
    if (w < 1 || w > n) throw Error(ErrorCode::InvalidArgument, "word index " + std::to_string(w) + " out of range");

  GradedCohomologyAction a;
  a.k = k;
  a.tag = ModelTag::Mazur;
  a.sublattice = true;

  ExactMatrix b = ExactMatrix::identity(static_cast<std::size_t>(n));
  for (int w : model.word) b = b * model.involutions[static_cast<std::size_t>(w - 1)];

  // Top degree is spanned by the point class, fixed by any automorphism.
  mpz_class fact = 1;
  for (int i = 2; i <= k; ++i) fact *= i;
  const GaussRational volume(mpq_class(fact * 2 * n));  // int (sum h_j)^k

  a.blocks.push_back(ExactMatrix::identity(1));
  a.kahler_class.push_back({1});
  a.basis_labels.push_back({"1"});
  for (int p = 1; p < k; ++p) {
    a.blocks.push_back(exterior_power(b, p));
    const auto idx = subsets(n, p);
    a.kahler_class.push_back(ExactVector(idx.size(), GaussRational(1)));
    std::vector<std::string> labels;
    for (const auto& s : idx) {
      std::string l;
      for (int i : s) l += (l.empty() ? "h" : "^h") + std::to_string(i + 1);
      labels.push_back(l);
    }
    a.basis_labels.push_back(std::move(labels));
  }
  a.blocks.push_back(ExactMatrix::identity(1));
  a.kahler_class.push_back({volume});
  a.basis_labels.push_back({"pt"});

  if (k == 2) {
    // On a surface h_i h_j = 2 [pt] for i != j and h_i^2 = 0.
    CupProduct cup;
    ExactMatrix tab(1, static_cast<std::size_t>(n * n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) tab(0, static_cast<std::size_t>(i * n + j)) = 2;
    cup.table.emplace(std::make_pair(1, 1), std::move(tab));
    a.cup = std::move(cup);
  } else {
    a.warnings.push_back("degrees 2.." + std::to_string(k - 1) +
                         " use exterior powers of the divisor sublattice; no cup product is available");
  }
  fill_pushforwards(a);
  return a;
}

bool cup_compatible(const GradedCohomologyAction& a, std::string* failure) {
  if (!a.cup) return true;
  for (const auto& [pq, tab] : a.cup->table) {
    const auto [p, q] = pq;
    const std::size_t dp = a.dim(p), dq = a.dim(q);
    const ExactMatrix &fp = a.blocks[static_cast<std::size_t>(p)], &fq = a.blocks[static_cast<std::size_t>(q)],
                      &fr = a.blocks[static_cast<std::size_t>(p + q)];
    for (std::size_t x = 0; x < dp; ++x)
      for (std::size_t y = 0; y < dq; ++y) {
        ExactVector ex(dp), ey(dq);
        ex[x] = 1;
        ey[y] = 1;
        ExactVector lhs = fr * a.cup->multiply(p, ex, q, ey);
        ExactVector rhs = a.cup->multiply(p, fp.column(x), q, fq.column(y));
        if (lhs != rhs) {
          if (failure)
            *failure = "f^*(e_" + std::to_string(x) + " cup e_" + std::to_string(y) + ") differs in degrees " +
                       std::to_string(p) + "," + std::to_string(q);
          return false;
        }
      }
  }
  return true;
}

GradedCohomologyAction raw_action(const RawActionInput& in) {
  const int k = in.k;
  if (k < 1) throw Error(ErrorCode::DimensionMismatch, "k must be positive");
  if (in.blocks.size() != static_cast<std::size_t>(k + 1))
    throw Error(ErrorCode::DimensionMismatch, "expected k + 1 blocks");
  if (in.kahler_class.size() != in.blocks.size())
    throw Error(ErrorCode::DimensionMismatch, "expected one Kaehler class vector per degree");
  GradedCohomologyAction a;
  a.k = k;
  a.tag = ModelTag::Raw;
  for (int p = 0; p <= k; ++p) {
    const auto& b = in.blocks[static_cast<std::size_t>(p)];
    if (!b.is_square() || b.rows() == 0) throw Error(ErrorCode::DimensionMismatch, "block " + std::to_string(p) + " is not square");
    if (in.kahler_class[static_cast<std::size_t>(p)].size() != b.rows())
      throw Error(ErrorCode::DimensionMismatch, "Kaehler class " + std::to_string(p) + " has the wrong length");
    if (b.determinant().is_zero()) throw Error(ErrorCode::NotInvertible, "block " + std::to_string(p) + " is singular");
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < b.rows(); ++i) labels.push_back("e" + std::to_string(i + 1));
    a.basis_labels.push_back(std::move(labels));
  }
  for (int p : {0, k}) {
    const auto& b = in.blocks[static_cast<std::size_t>(p)];
    if (b.rows() != 1) throw Error(ErrorCode::DimensionMismatch, "blocks 0 and k must be 1 x 1");
    if (b(0, 0).norm() != 1)
      a.warnings.push_back("block " + std::to_string(p) + " entry " + b(0, 0).to_string() +
                           " does not have modulus 1; not the action of an automorphism");
  }
  a.blocks = in.blocks;
  a.kahler_class = in.kahler_class;
  if (!in.pushforward_blocks.empty()) {
    if (in.pushforward_blocks.size() != in.blocks.size())
      throw Error(ErrorCode::DimensionMismatch, "expected k + 1 pushforward blocks");
    for (std::size_t p = 0; p < in.blocks.size(); ++p) {
      const auto& f = in.pushforward_blocks[p];
      if (f.rows() != in.blocks[p].rows() || !f.is_square())
        throw Error(ErrorCode::DimensionMismatch, "pushforward block " + std::to_string(p) + " has the wrong shape");
      if (f * in.blocks[p] != ExactMatrix::identity(f.rows()))
        a.warnings.push_back("pushforward block " + std::to_string(p) + " is not the inverse of the pullback");
    }
    a.pushforward_blocks = in.pushforward_blocks;
  } else {
    fill_pushforwards(a);
  }
  if (in.cup) {
    for (const auto& [pq, tab] : in.cup->table) {
      const auto [p, q] = pq;
      if (p < 1 || q < 1 || p + q > k) throw Error(ErrorCode::DimensionMismatch, "cup table degrees out of range");
      if (tab.rows() != a.dim(p + q) || tab.cols() != a.dim(p) * a.dim(q))
        throw Error(ErrorCode::DimensionMismatch, "cup table " + std::to_string(p) + "," + std::to_string(q) + " has the wrong shape");
    }
    a.cup = in.cup;
    std::string why;
    if (!cup_compatible(a, &why)) throw Error(ErrorCode::CupIncompatible, why);
    for (int p = 2; p <= k; ++p) {
      if (!a.cup->has(p - 1, 1)) continue;
      ExactVector pw = a.cup->multiply(p - 1, a.kahler_class[static_cast<std::size_t>(p - 1)], 1, a.kahler_class[1]);
      if (pw != a.kahler_class[static_cast<std::size_t>(p)])
        throw Error(ErrorCode::CupIncompatible, "Kaehler class in degree " + std::to_string(p) + " is not the cup power");
    }
  }
  return a;
}

}  // namespace kdyn::models
