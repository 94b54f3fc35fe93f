#pragma once

#include <vector>

#include "kdyn/exact/polynomial.hpp"

namespace kdyn {

struct PolyFactor {
  Poly factor;  // monic irreducible over the chosen base field
  int multiplicity = 1;
};

/// Irreducible factors over Q of a squarefree polynomial with rational
/// coefficients (Zassenhaus: Cantor-Zassenhaus mod p, Hensel lifting,
/// subset recombination). Factors are monic, sorted by degree then coefficients.
std::vector<Poly> factor_squarefree_rational(const Poly& f);

/// Irreducible factors over Q(i) of a squarefree polynomial (Trager's norm method).
std::vector<Poly> factor_squarefree_gaussian(const Poly& f);

/// Complete factorization with multiplicities. When `gaussian` is false the
/// input must have rational coefficients and factors are irreducible over Q.
std::vector<PolyFactor> factor(const Poly& f, bool gaussian);

}  // namespace kdyn
