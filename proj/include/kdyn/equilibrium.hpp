#pragma once

#include <string>
#include <vector>

#include "kdyn/models.hpp"

namespace kdyn::equilibrium {

/// Integer frequency vector on the real 2k-dimensional lattice Z[i]^k = Z^2k
/// (real parts first, then imaginary parts).
using Frequency = std::vector<long>;

struct TrigTerm {
  Frequency freq;
  GaussRational coeff;
};

/// Finite sum of characters x -> coeff * exp(2 pi i freq . x) on R^dim / Z^dim.
struct TrigPolynomial {
  int dim = 0;
  std::vector<TrigTerm> terms;  // distinct frequencies, nonzero coefficients
  std::string id;

  static TrigPolynomial character(const Frequency& m, std::string id = {});
  /// cos(2 pi m . x) = (e_m + e_-m) / 2.
  static TrigPolynomial cosine(const Frequency& m, std::string id = {});

  /// Merges repeated frequencies and drops zero coefficients.
  void normalize();
  GaussRational mean() const;  // coefficient of the zero frequency
  long max_frequency() const;  // largest |freq_j| over all terms
  bool is_zero() const { return terms.empty(); }
};

/// The frequency map B = (real lattice matrix of A)^T with e_m o f = e_{Bm},
/// together with its spectral type.
struct FrequencyLattice {
  std::vector<std::vector<long>> B;
  bool hyperbolic = false;  // no eigenvalue of modulus 1
  /// Escape bound for hyperbolic maps, in sup norms:
  /// ||B^m a|| >= ||P a|| / (scale * contraction^floor(m / block)) with P the
  /// projector onto the expanding generalized eigenspaces. scale = 0 when unavailable.
  hp::CMatrix expanding_projector;
  double scale = 0;
  double contraction = 1;
  long block = 1;
};

FrequencyLattice frequency_lattice(const models::TorusAutomorphism& t);

/// The automorphism induced by A^-1.
models::TorusAutomorphism inverse(const models::TorusAutomorphism& t);

struct CorrelationReport {
  std::string phi_id, psi_id;
  std::vector<long> n;
  std::vector<GaussRational> exact;  // C_n from the frequency lattice
  std::vector<double> values;        // real part of C_n
  double max_imag = 0;
  std::vector<long> coincidences;    // n >= 1 with some B^n a = -b, up to search_limit
  long last_coincidence = 0;         // 0 when there is none
  long search_limit = 0;             // every n <= search_limit was checked exactly
  bool hyperbolic = false;
  /// The escape bound rules out ||B^n a|| <= ||b|| for every n > search_limit.
  bool escape_certified = false;
  bool decay_flag = false;           // C_n = 0 for every reported n > last_coincidence
  double norm_bound = 0;             // ||phi||_2 ||psi||_2 (Haar)

  // Grid path (grid_correlation only).
  long resolution = 0;
  long alias_limit = -1;  // largest n with ||B^n|| F_phi + F_psi < resolution
  std::vector<long> grid_n;
  /// Grid averages in Q(i)(zeta), zeta = exp(2 pi i / resolution), as
  /// coefficients of 1, zeta, ..., zeta^(resolution/2 - 1).
  std::vector<std::vector<GaussRational>> grid_exact;
  std::vector<double> grid_values;
  bool grid_agrees = false;  // grid_exact equals exact at every grid_n
  std::vector<std::string> warnings;
};

/// C_n = 1 when (A^T)^n m = -m' on the real lattice, else 0. Throws ZeroFrequency
/// for a zero vector and DimensionMismatch for vectors not of length 2k.
CorrelationReport haar_character_correlation(const models::TorusAutomorphism& t, const Frequency& m,
                                             const Frequency& m_prime, long n_lo, long n_hi);

/// The same on a precomputed lattice (frequency vectors of length B.size()).
CorrelationReport haar_character_correlation(const FrequencyLattice& lat, const Frequency& m, const Frequency& m_prime,
                                             long n_lo, long n_hi);

/// Exact Haar correlations <(phi o f^n) psi> - <phi><psi> of trigonometric
/// polynomials through frequency coincidences.
CorrelationReport trig_correlation(const models::TorusAutomorphism& t, const TrigPolynomial& phi,
                                   const TrigPolynomial& psi, long n_lo, long n_hi);

/// Largest power of two R <= 2^10 with R^(2k) <= 2^20.
long default_resolution(int k);

/// trig_correlation plus the grid path: phi and psi sampled exactly on the grid
/// (Z / R)^2k, points moved by x -> A x mod 1 and averaged in Q(i)(zeta_R).
/// R must be a power of two (0 selects default_resolution). The grid range is
/// truncated at the alias limit with an AliasWarning.
CorrelationReport grid_correlation(const models::TorusAutomorphism& t, const TrigPolynomial& phi,
                                   const TrigPolynomial& psi, long n_lo, long n_hi, long resolution = 0);
CorrelationReport grid_correlation(const FrequencyLattice& lat, const TrigPolynomial& phi, const TrigPolynomial& psi,
                                   long n_lo, long n_hi, long resolution = 0);

struct ErgodicReport {
  std::vector<long> n;
  std::vector<GaussRational> exact;  // (1/n) sum_{j=1}^n C_j
  std::vector<double> values;
  long last_coincidence = 0;
  GaussRational tail_constant;  // n * average for n > last_coincidence
  double rate_constant = 0;     // sum over frequency pairs of |c_a d_b| times their coincidence count
  bool rate_holds = true;       // |average_n| <= rate_constant / n for every n
  bool converges = false;       // average_n -> 0 (finitely many coincidences)
};

/// Averages of <(phi o f^j) psi> over j = 1..n for n = 1..n_max. Throws
/// InvalidArgument when phi has nonzero mean.
ErgodicReport ergodic_average_check(const models::TorusAutomorphism& t, const TrigPolynomial& phi,
                                    const TrigPolynomial& psi, long n_max);

}  // namespace kdyn::equilibrium
