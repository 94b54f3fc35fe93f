#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kdyn/jordan.hpp"
#include "kdyn/models.hpp"

namespace kdyn::degrees {

struct DegreeSequence {
  int p = 0;
  std::vector<long> n;
  std::vector<hp::Real> values;      // d_{p,n} = ||(f^n)^* omega^p||, max-norm
  std::vector<hp::Real> normalized;  // d_{p,n} / (n^(l_p - 1) d_p^n)
  hp::Real degree;                   // d_p
  int multiplicity = 1;              // l_p
  /// exp of the slope of log d_{p,n} - (l_p - 1) log n against n, fitted on
  /// the values with n in [fit_lo, fit_hi].
  double fitted_degree = 0;
  long fit_lo = 100, fit_hi = 200;
};

/// Exact powering of blocks[p] applied to kahler_class[p]. Throws Overflow
/// when an entry needs more than `digit_budget` decimal digits.
DegreeSequence degree_sequence(const models::GradedCohomologyAction& action, int p, const std::vector<long>& n_values,
                               long bits = 0, std::size_t digit_budget = 20000);

struct DegreeProfile {
  std::vector<hp::Real> degrees;  // d_0..d_k
  std::vector<int> multiplicities;
  hp::Real entropy;
  std::pair<int, int> plateau{0, 0};  // (m, m')
  models::ModelTag tag = models::ModelTag::Raw;
  bool sublattice = false;
  bool exact_decisions = true;
  std::vector<jordan::ThetaGroup> theta;
};

/// Degrees within this relative distance count as equal when locating the plateau.
inline constexpr double kPlateauTolerance = 1e-9;

/// Spectral radius and multiplicity of every block, computed in parallel.
DegreeProfile dynamical_degrees(const models::GradedCohomologyAction& action, long bits = 0);

/// Plateau (m, m') of a degree list: first and last index within
/// kPlateauTolerance of the maximum.
std::pair<int, int> find_plateau(const std::vector<hp::Real>& degrees);

struct ConcavityReport {
  std::vector<hp::Real> margins;  // d_p^2 - d_{p-1} d_{p+1}, p = 1..k-1
  std::vector<hp::Real> ratios;   // d_{p-1} / d_p, p = 1..k
  bool concave = true;
  bool ratios_increasing = true;
  /// Unimodal shape 1 <= d_1 < ... < d_m = ... = d_m' > ... > d_k with the detected plateau.
  bool pattern = true;
  std::vector<int> violations;
  /// "none", "warning" (Raw models) or "error" (Torus, Mazur).
  std::string severity = "none";
  std::vector<std::string> messages;
};

/// Violations tolerated up to 2^-64 relative to d_p^2.
ConcavityReport check_concavity(const DegreeProfile& profile);

struct RelativeDegreeProfile {
  hp::CVector T_class;
  int s = 0;
  hp::Complex lambda_T;
  std::vector<hp::Real> relative_degrees;  // lambda_p(T), p = 1..k-s
  std::vector<int> relative_multiplicities;
  std::vector<std::size_t> quotient_dims;  // dim H^{p,p}(T)
  double eigen_residual = 0;               // ||f^*T - lambda_T T|| / (|lambda_T| ||T||)
  hp::Real prop_lower_margin;              // lambda_1(T)^(k-s) - |lambda_T|^-1
};

/// N^{p,p}(T) is the kernel of cup with [T]; the induced action on
/// H^{p,p}/N^{p,p}(T) is realized on the image of cup with [T]. Ranks use a
/// relative tolerance of 2^(-bits/2). Throws CupMissing, NotEigenclass
/// (relative residual above `eigen_tolerance`), DimensionMismatch.
RelativeDegreeProfile relative_degrees(const models::GradedCohomologyAction& action, const hp::CVector& T_class, int s,
                                       const hp::Complex& lambda_T, long bits = 0, double eigen_tolerance = 1e-9);

struct SubmultiplicativityReport {
  int p1 = 0, p2 = 0;
  hp::Real margin;  // lambda_{p1} lambda_{p2} - lambda_{p1+p2}
  bool holds = true;
};

/// Holds when margin >= -tolerance * max(1, lambda_{p1} lambda_{p2}).
SubmultiplicativityReport submultiplicativity_check(const RelativeDegreeProfile& rel, int p1, int p2,
                                                    double tolerance = 1e-9);

struct CesaroClassReport {
  int s = 0;
  hp::Real degree;
  int multiplicity = 1;
  hp::CVector limit;  // pi o Lambda_infinity applied to S
  std::vector<long> N;
  std::vector<hp::Real> deviation;  // ||S_N - limit||
  jordan::RateCheck rate;
  double eigen_residual = 0;      // ||f^* limit - d_s limit|| / (1 + ||limit||)
  double kernel_invariance = 0;   // largest change of the limit under kernel perturbations
  std::size_t kernel_dim = 0;
};

/// S_N = (1/N) sum_{n=1}^N (f^n)^* S / (n^(l_s - 1) d_s^n) for N = 1..N_max.
CesaroClassReport cesaro_class_limit(const models::GradedCohomologyAction& action, const hp::CVector& S, int s,
                                     long N_max = 200, long bits = 0);

struct DegreeChainStep {
  int s = 0;
  hp::Real bound;  // d_m / d_{k-s+m}, a lower bound for c_s
  bool holds = false;
};

struct DegreeChainReport {
  bool applicable = false;
  std::string reason;
  int m = 0;
  bool chain = false;  // 1 < d_1 < ... < d_m > ... > d_k = 1
  std::vector<DegreeChainStep> steps;  // s = m..k-1
  bool verified = false;
};

/// NotApplicable (applicable = false) unless d_1..d_{k-1} are pairwise distinct
/// and exceed 1 by more than kPlateauTolerance.
DegreeChainReport degree_chain_check(const DegreeProfile& profile);

struct DualityReport {
  std::vector<hp::Real> pushforward_radius;  // spectral radius of f_* on H^{k-p,k-p}
  std::vector<double> relative_error;        // against d_p
  double max_error = 0;
};

/// Throws InvalidArgument when the pushforward blocks are missing.
DualityReport duality_check(const models::GradedCohomologyAction& action, const DegreeProfile& profile, long bits = 0);

}  // namespace kdyn::degrees
