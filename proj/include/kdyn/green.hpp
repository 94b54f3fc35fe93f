#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "kdyn/jordan.hpp"
#include "kdyn/models.hpp"

namespace kdyn::green {

/// Samples of a vector-valued function on the uniform grid (Z / resolution)^dim
/// of the real torus R^dim / Z^dim. Point index i_0 * r^(dim-1) + ... + i_{dim-1};
/// component c of point x at values[x * components + c].
struct GridFunction {
  int dim = 1;
  long resolution = 0;
  int components = 1;
  std::vector<std::complex<double>> values;

  std::size_t points() const;
  std::vector<long> coordinates(std::size_t point) const;
  std::size_t index(const std::vector<long>& coords) const;  // coordinates taken mod resolution

  static GridFunction sample(int dim, long resolution, int components,
                             const std::function<std::vector<std::complex<double>>(const std::vector<double>&)>& f);
  double sup_norm() const;
};

/// Largest absolute row sum of an integer matrix.
double integer_max_norm(const std::vector<std::vector<long>>& g);

struct IterationSetup {
  std::vector<std::vector<long>> G;  // g(x) = G x mod 1
  GridFunction u;                    // values in E, one component per dimension of E
  double nu = 1;                     // Hoelder exponent of u
  ExactMatrix Lambda;                // linear map on E
  int power = 1;                     // iterate (g^power, Lambda^power) instead
};

/// Smallest n in [1, 64] with nu < n log(lambda) / log ||G^n||, or 0 when none.
int auto_power(const IterationSetup& setup);

struct HolderIterationResult {
  double lambda = 0;
  int multiplicity = 1;
  double lipschitz = 0;  // M = ||G^power||
  int power = 1;
  jordan::ThetaGroup theta;
  std::vector<long> n;
  std::vector<double> twisted_deviation;  // ||exp(-i n theta) v_n - v||
  std::vector<long> N;
  std::vector<double> averaged_deviation;  // ||w_N - w||
  GridFunction v, w;
  GridFunction v_last, w_last;  // exp(-i n_max theta) v_{n_max} and w_{N_max}
  jordan::RateCheck twisted_rate, averaged_rate;
  double twisted_slope = 0;   // log-log slope of the twisted deviations above the floor, n >= 20
  double averaged_slope = 0;  // the same for the averaged deviations
  std::size_t series_terms = 0;
  double floor = 0;
  std::vector<std::string> warnings;
};

/// Runs R_{n+1} = Lambda (u o g^n + R_n), v_n = R_n / (n^(m-1) lambda^n) on the
/// grid, with w_N the Cesaro means of v_n. The limits are the series
/// v = sum_i sum_mu mu^-i L_mu u o g^i over dominant eigenvalues mu (L_mu the
/// part of Lambda_infinity at mu), truncated once lambda^-i drops below 2^-60,
/// and w the same sum over the dominant eigenvalues with theta = 0.
/// Throws HypothesisViolated when lambda <= 1 or M <= 1; InvalidArgument or
/// DimensionMismatch for malformed setups.
HolderIterationResult holder_iteration(const IterationSetup& setup, long n_max, long N_max);

struct HolderEstimate {
  double exponent = 1;
  double constant = 0;
  std::size_t pairs_used = 0;
  double admissible_bound = 1;  // min(nu, log lambda / log M)
  std::vector<double> scales;   // separations h
  std::vector<double> oscillations;  // sup_{|x-y| = h} |v(x) - v(y)| along grid axes
  bool degenerate = false;      // constant function: exponent reported as 1
};

/// Regression of log oscillation against log h over h = 2^-j, j in `levels`.
/// Empty `levels` selects every j >= 3 with resolution / 2^j an integer >= 4.
/// Throws InvalidArgument when fewer than 3 scales are usable.
HolderEstimate holder_exponent_estimate(const GridFunction& v, const std::vector<int>& levels, double admissible_bound);

enum class GreenMode { PlainLimit, CesaroOnly };
std::string green_mode_name(GreenMode mode);

struct SubsequenceSample {
  long n = 0;
  double angle = 0;      // n theta_1 reduced to [0, 2 pi)
  double target = 0;
  hp::CVector value;     // (f^n)^* omega / (n^(m-1) d_1^n)
  hp::CVector predicted; // closed-form subsequential limit at this angle
};

struct GreenTorusReport {
  GreenMode mode = GreenMode::PlainLimit;
  hp::Real degree;
  int multiplicity = 1;
  jordan::ThetaGroup theta;
  hp::CVector limit_class;
  double eigen_residual = 0;  // ||f^* L - d_1 L|| / ||L||
  std::vector<double> hermitian_eigenvalues;
  bool positive = false;
  jordan::RateCheck plain_rate;   // meaningful in PlainLimit mode
  jordan::RateCheck cesaro_rate;
  std::vector<SubsequenceSample> samples;
  double sample_spread = 0;  // largest distance between sampled values
  bool divergent = false;    // spread >= 1e-3
};

struct GreenTorusOptions {
  long N_max = 200;
  long sample_from = 200;     // smallest n considered for subsequence samples
  long sample_to = 2000000;   // search limit
  double angle_tolerance = 1e-3;
  int targets = 8;
};

/// Throws NoExpansion when d_1 = 1.
GreenTorusReport green_limit_torus(const models::TorusAutomorphism& t, const GreenTorusOptions& opts = {});

struct RecurrenceReport {
  int m = 0;
  std::vector<GaussRational> coefficients;  // a_0..a_{m-1}
  ExactMatrix companion;
  hp::Real companion_radius;
  int companion_multiplicity = 1;
  hp::Real degree;  // d_1 of the action
  bool radius_matches = false;
  bool char_poly_matches = false;  // companion char poly equals that of blocks[1]
  double nu = 0;
};

/// Exact Krylov relation of [omega], f^*[omega], ... in H^{1,1} and its companion matrix.
RecurrenceReport recurrence_machinery(const models::GradedCohomologyAction& action, double nu);

}  // namespace kdyn::green
