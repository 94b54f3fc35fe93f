#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kdyn/exact/factor.hpp"
#include "kdyn/exact/matrix.hpp"
#include "kdyn/numeric/linalg.hpp"

namespace kdyn::jordan {

enum class ThetaKind { Trivial, FiniteCyclic, PositiveDimensional };

struct ThetaGroup {
  ThetaKind kind = ThetaKind::Trivial;
  long order = 1;  // meaningful for FiniteCyclic
};

std::string theta_kind_name(ThetaKind kind);

/// Jordan data attached to one irreducible factor q of the characteristic
/// polynomial. Every root of q carries the same block sizes.
struct FactorData {
  Poly factor;
  int exponent = 1;              // power of q in the characteristic polynomial
  std::vector<int> block_sizes;  // per root, descending
  std::vector<hp::Complex> roots;
};

struct JordanBlock {
  hp::Complex eigenvalue;
  int size = 1;
  std::size_t factor_index = 0;
  std::size_t root_index = 0;
};

/// A distinct dominant eigenvalue mu = lambda * exp(i theta).
struct DominantEigenvalue {
  std::size_t factor_index = 0;
  std::size_t root_index = 0;
  hp::Complex value;
  hp::Real theta;
  bool theta_zero = false;
  int blocks = 0;  // number of Jordan blocks of size m for this eigenvalue
};

struct JordanData {
  std::size_t dim = 0;
  bool gaussian = false;  // base field Q(i) rather than Q
  long bits = 128;
  Poly char_poly;
  std::vector<FactorData> factors;
  /// Sorted by decreasing (|eigenvalue|, size), then by angle in [0, 2 pi).
  std::vector<JordanBlock> blocks;
  hp::Real spectral_radius;
  int multiplicity = 1;
  std::vector<std::size_t> dominant_indices;
  std::vector<hp::Real> theta;  // one per dominant block
  ThetaGroup theta_group;
  std::vector<DominantEigenvalue> dominant;
  /// False when a modulus tie or root-of-unity test fell back to numerics
  /// because the auxiliary polynomials were too large.
  bool exact_decisions = true;

  /// dim F': number of dominant blocks with theta = 0.
  std::size_t strictly_dominant_dim() const;
};

/// det(xI - M), exact.
Poly char_poly(const ExactMatrix& m);

/// Irreducible factorization of the characteristic polynomial over Q when M
/// is real and over Q(i) otherwise.
std::vector<PolyFactor> char_poly_factors(const ExactMatrix& m);

/// Throws Error(NotInvertible) when det M = 0. `bits` <= 0 selects the
/// thread's default precision.
JordanData eigen_structure(const ExactMatrix& m, long bits = 0);

struct AsymptoticReport {
  std::vector<long> n_values;
  std::vector<hp::Real> normalized_norms;  // ||M^n|| / (n^(m-1) lambda^n)
  std::optional<hp::Real> limit;           // ||Lambda_infinity|| when Theta is trivial
  std::vector<hp::Real> deviations;        // |normalized - limit|
  double fitted_rate = 0;                  // log-log slope of the deviations
  double geometric_ratio = 0;              // exp of the slope of log deviation against n
  std::string rate_kind;                   // exact | geometric | power | oscillating
};

/// Exact powering; throws Error(Overflow) once an entry of M^n needs more than
/// `digit_budget` decimal digits.
AsymptoticReport power_asymptotics(const ExactMatrix& m, const JordanData& j, const std::vector<long>& n_values,
                                   std::size_t digit_budget = 20000);

/// Rate protocol: C fitted as the largest scaled deviation on [fit_lo, fit_hi],
/// then checked on [fit_hi + 1, n_max].
struct RateCheck {
  std::string form;  // "1/n" or "log(n)/n"
  std::vector<long> n;
  std::vector<hp::Real> deviation;
  double constant = 0;
  bool holds = true;
  long first_violation = -1;
  bool exact = false;  // every deviation is below the rounding floor
  long fit_lo = 20, fit_hi = 50;
};

/// C = max over the fit window of dev_n / rate(n); holds when dev_n <= C rate(n) (1 + 1e-9)
/// on the remaining range. Deviations below `floor` count as zero.
RateCheck fit_rate(const std::vector<long>& n, const std::vector<hp::Real>& dev, bool log_form, long fit_lo,
                   long fit_hi, const hp::Real& floor);

struct LambdaInfinityOptions {
  long n_max = 200;
  long N_max = 200;
  /// Also return the untwisted limit of Lambda_n along n = residue (mod |Theta|).
  bool plain_limit = false;
  long plain_residue = 0;
};

struct LambdaInfinity {
  hp::CMatrix limit;     // Lambda_infinity
  hp::CMatrix averaged;  // pi o Lambda_infinity
  std::optional<hp::CMatrix> plain_subsequence_limit;
  std::vector<hp::CMatrix> projectors;  // spectral projector per distinct dominant eigenvalue
  RateCheck twisted_rate;
  RateCheck averaged_rate;
  std::size_t averaged_rank = 0;
  std::size_t strictly_dominant_dim = 0;
  std::vector<std::string> warnings;
};

/// Projector onto the generalized eigenspace of one root along the others.
hp::CMatrix spectral_projector(const ExactMatrix& m, const JordanData& j, std::size_t factor_index,
                               std::size_t root_index, long bits);

/// Lambda_infinity and pi o Lambda_infinity in closed form from the spectral
/// projectors (no rates).
std::pair<hp::CMatrix, hp::CMatrix> limit_operators(const ExactMatrix& m, const JordanData& j,
                                                    std::vector<hp::CMatrix>* projectors = nullptr);

/// Applies exp(-i n theta) on the dominant generalized eigenspaces.
hp::CMatrix twist(const hp::CMatrix& l, const JordanData& j, const std::vector<hp::CMatrix>& projectors, long n);

/// Throws Error(ThetaNotResolved) when a plain limit is requested and Theta is
/// positive dimensional.
LambdaInfinity lambda_infinity(const ExactMatrix& m, const JordanData& j, const LambdaInfinityOptions& opts = {});

struct PerronFrobeniusReport {
  bool dominant_real_eigenvalue = false;  // falsification flag when false
  hp::Real eigenvalue;
  hp::CVector eigenvector;
  std::vector<hp::Real> cone_coordinates;  // eigenvector over the generators, max coordinate 1
  bool nonnegative = false;
  hp::Real residual;  // ||M v - lambda v|| / ||v||
};

/// Simplicial cones only (as many generators as the dimension). Throws
/// Error(ConeNotPreserved) when some M g_i leaves the cone.
PerronFrobeniusReport perron_frobenius_check(const ExactMatrix& m, const std::vector<ExactVector>& cone_generators,
                                             double tolerance = 1e-9, long bits = 0);

}  // namespace kdyn::jordan
