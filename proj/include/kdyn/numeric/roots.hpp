#pragma once

#include <optional>
#include <vector>

#include "kdyn/exact/polynomial.hpp"
#include "kdyn/numeric/real.hpp"

namespace kdyn::hp {

/// All roots of a squarefree polynomial, accurate to roughly `bits` bits
/// relative to max(1, |root|). Aberth iteration in long double, then Newton
/// refinement at the working precision; falls back to Aberth at full
/// precision when the refined roots are not distinct.
std::vector<Complex> roots_squarefree(const Poly& p, long bits);

/// Roots of a squarefree polynomial together with their minimum pairwise
/// distance, used to identify an approximation with a unique exact root.
class RootLocator {
 public:
  RootLocator(const Poly& squarefree, long bits);

  /// Index of the unique root within `err` of z, provided the disc of radius
  /// err around z cannot contain a second root. Empty when ambiguous.
  std::optional<std::size_t> locate(const Complex& z, const Real& err) const;

  const std::vector<Complex>& roots() const { return roots_; }
  const Real& separation() const { return separation_; }
  long bits() const { return bits_; }

 private:
  std::vector<Complex> roots_;
  Real separation_;
  Real root_err_;
  long bits_;
};

}  // namespace kdyn::hp
