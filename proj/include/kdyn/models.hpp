#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kdyn/exact/matrix.hpp"
#include "kdyn/numeric/linalg.hpp"

namespace kdyn::models {

enum class ModelTag { Torus, Mazur, Raw };
std::string model_tag_name(ModelTag tag);

/// Structure constants of the cup product between graded pieces. table[(p, q)]
/// has shape dim H^{p+q} x (dim H^p * dim H^q); column a * dim H^q + b holds
/// e_a cup e_b. Degree-0 products are the scalar action and are not stored.
struct CupProduct {
  std::map<std::pair<int, int>, ExactMatrix> table;

  bool has(int p, int q) const;
  ExactVector multiply(int p, const ExactVector& a, int q, const ExactVector& b) const;
};

struct GradedCohomologyAction {
  int k = 0;
  std::vector<ExactMatrix> blocks;        // f^* on H^{p,p}, p = 0..k
  std::vector<ExactVector> kahler_class;  // [omega^p]
  std::vector<ExactMatrix> pushforward_blocks;  // f_* on H^{p,p}; empty when unavailable
  std::optional<CupProduct> cup;
  ModelTag tag = ModelTag::Raw;
  /// Mazur models act on an invariant sublattice; their degrees are sublattice values.
  bool sublattice = false;
  std::vector<std::vector<std::string>> basis_labels;
  std::vector<std::string> warnings;

  std::size_t dim(int p) const { return blocks.at(static_cast<std::size_t>(p)).rows(); }
  /// Action of f^{-1}: the pushforward blocks with the same Kaehler data.
  GradedCohomologyAction inverse() const;
};

/// Lexicographically ordered p-subsets of {0..n-1}.
std::vector<std::vector<int>> subsets(int n, int p);

/// Lambda^p(B) with entries det(B[J, I]) for p-subsets J (row) and I (column).
ExactMatrix exterior_power(const ExactMatrix& b, int p);

struct TorusAutomorphism {
  int k = 0;
  ExactMatrix A;  // acts on C^k, preserving Z[i]^k
};

/// Throws NotUnitDeterminant unless det A is in {1, -1, i, -i}; InvalidArgument
/// when an entry is not a Gaussian integer.
GradedCohomologyAction torus_action(const TorusAutomorphism& t);

/// Hermitian coefficient matrix h = -i c of the real (1,1)-form with
/// coefficient vector c in the basis dz_j ^ dzbar_l (row-major in j, l).
hp::CMatrix hermitian_coefficients(const hp::CVector& c, int k);

/// Eigenvalues of a Hermitian matrix, ascending.
std::vector<double> hermitian_eigenvalues(const hp::CMatrix& h);

/// Real 2k x 2k matrix of A on Z[i]^k = Z^{2k} (real parts first, then imaginary parts).
ExactMatrix real_lattice_matrix(const ExactMatrix& a);

struct MazurModel {
  int k = 0;
  std::vector<ExactMatrix> involutions;  // closed form tau_i^* on span(h_1..h_{k+1})
  std::vector<ExactMatrix> push_pull;    // the same maps from pi_i^* pi_{i*} - Id
  std::vector<int> word;                 // 1-based indices, listed in application order

  /// Intersection number of h_{i_1} ... h_{i_k} on X (indices 0-based).
  int intersection_number(const std::vector<int>& indices) const;
  /// Symmetric form preserved by every tau_i^*: J - (k - 1) I.
  ExactMatrix invariant_form() const;
};

/// Throws InvalidArgument for k < 2.
MazurModel mazur_involutions(int k);

/// Throws EmptyWord when the word is empty; InvalidArgument for indices out of range.
GradedCohomologyAction mazur_action(const MazurModel& model);

struct RawActionInput {
  int k = 0;
  std::vector<ExactMatrix> blocks;
  std::vector<ExactVector> kahler_class;
  std::vector<ExactMatrix> pushforward_blocks;
  std::optional<CupProduct> cup;
};

/// Errors: DimensionMismatch, NotInvertible, CupIncompatible.
GradedCohomologyAction raw_action(const RawActionInput& in);

/// Exact check of f^*(a cup b) = f^*a cup f^*b on all basis pairs.
bool cup_compatible(const GradedCohomologyAction& action, std::string* failure = nullptr);

}  // namespace kdyn::models
