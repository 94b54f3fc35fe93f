#pragma once

#include <functional>

#include "kdyn/exact/polynomial.hpp"
#include "kdyn/numeric/real.hpp"

namespace kdyn::algebraic {

/// A root of a squarefree polynomial over Q(i), pinned by an approximation
/// that is closer to it than to any other root.
struct AlgebraicNumber {
  Poly poly;
  hp::Complex approx;

  /// The root recomputed at `bits` precision.
  hp::Complex at(long bits) const;
};

/// Above this degree for the auxiliary polynomials the exact tests are skipped
/// and the decision is taken numerically at quadruple working precision.
inline constexpr int kMaxAuxDegree = 600;

struct Decision {
  bool value = false;
  bool exact = true;
};

/// a == b, decided exactly.
Decision same_number(const AlgebraicNumber& a, const AlgebraicNumber& b, long bits);

/// a is real, decided exactly.
Decision is_real(const AlgebraicNumber& a, long bits);

/// |a| == |b|, decided exactly through the polynomials of |a|^2 and |b|^2.
Decision same_modulus(const AlgebraicNumber& a, const AlgebraicNumber& b, long bits);

/// Order of a/|a| in the circle group, or 0 when it is not a root of unity.
/// The square (a/|a|)^2 = a/conj(a) is tested against cyclotomic polynomials.
struct UnitOrder {
  long order = 0;
  bool exact = true;
};
UnitOrder unit_direction_order(const AlgebraicNumber& a, long bits);

/// Decides whether two exact roots of the squarefree polynomial `p`, given by
/// precision-indexed approximations, are the same root. Raises precision until
/// both approximations are unambiguous.
bool same_root(const Poly& squarefree_p, const std::function<hp::Complex(long)>& x,
               const std::function<hp::Complex(long)>& y, long bits);

}  // namespace kdyn::algebraic
