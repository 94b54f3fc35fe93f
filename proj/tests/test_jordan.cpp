#include <doctest.h>

#include <random>

#include "kdyn/error.hpp"
#include "kdyn/jordan.hpp"
#include "kdyn/numeric/roots.hpp"

using namespace kdyn;
using namespace kdyn::jordan;

namespace {

ExactMatrix mat(const std::vector<std::vector<std::string>>& rows) { return ExactMatrix::parse(rows); }

hp::Real golden_square() { return (hp::Real(3) + sqrt(hp::Real(5))) / hp::Real(2); }

// Unimodular integer matrix as a product of random elementary operations.
ExactMatrix random_unimodular(std::mt19937_64& rng, std::size_t n) {
  ExactMatrix s = ExactMatrix::identity(n);
  std::uniform_int_distribution<int> coef(-2, 2);
  std::uniform_int_distribution<std::size_t> idx(0, n - 1);
  for (int k = 0; k < 3 * static_cast<int>(n); ++k) {
    std::size_t i = idx(rng), j = idx(rng);
    if (i == j) continue;
    ExactMatrix e = ExactMatrix::identity(n);
    e(i, j) = coef(rng);
    s = s * e;
  }
  return s;
}

// Block diagonal Jordan matrix from (eigenvalue, size) pairs.
ExactMatrix jordan_matrix(const std::vector<std::pair<GaussRational, int>>& blocks) {
  std::size_t n = 0;
  for (auto& b : blocks) n += static_cast<std::size_t>(b.second);
  ExactMatrix j(n, n);
  std::size_t off = 0;
  for (auto& [ev, size] : blocks) {
    for (int k = 0; k < size; ++k) {
      j(off + k, off + k) = ev;
      if (k + 1 < size) j(off + k, off + k + 1) = 1;
    }
    off += static_cast<std::size_t>(size);
  }
  return j;
}

}  // namespace

TEST_CASE("eigen_structure on the reference matrices") {
  SUBCASE("Jordan block J_{2,2}") {
    auto j = eigen_structure(mat({{"2", "1"}, {"0", "2"}}));
    CHECK(j.spectral_radius == hp::Real(2));
    CHECK(j.multiplicity == 2);
    CHECK(j.blocks.size() == 1);
    REQUIRE(j.theta.size() == 1);
    CHECK(j.theta[0].is_zero());
    CHECK(j.theta_group.kind == ThetaKind::Trivial);
  }
  SUBCASE("cat map") {
    auto j = eigen_structure(mat({{"2", "1"}, {"1", "1"}}));
    CHECK(abs(j.spectral_radius - golden_square()) < ldexp(hp::Real(1), -120));
    CHECK(j.multiplicity == 1);
    CHECK(j.dominant_indices.size() == 1);
    CHECK(j.theta_group.kind == ThetaKind::Trivial);
  }
  SUBCASE("rotation by a quarter turn scaled by 2") {
    auto j = eigen_structure(mat({{"0", "-2"}, {"2", "0"}}));
    CHECK(j.spectral_radius == hp::Real(2));
    CHECK(j.multiplicity == 1);
    CHECK(j.dominant_indices.size() == 2);
    REQUIRE(j.theta.size() == 2);
    hp::Real half_pi = hp::Real::pi() / hp::Real(2);
    CHECK(abs(j.theta[0] - half_pi) < ldexp(hp::Real(1), -120));
    CHECK(abs(j.theta[1] - hp::Real(3) * half_pi) < ldexp(hp::Real(1), -120));
    CHECK(j.theta_group.kind == ThetaKind::FiniteCyclic);
    CHECK(j.theta_group.order == 4);
  }
  SUBCASE("singular input") {
    CHECK_THROWS_AS(eigen_structure(mat({{"1", "2"}, {"2", "4"}})), Error);
  }
}

TEST_CASE("block sizes agree with numeric ranks at 256 bits") {
  std::mt19937_64 rng(21);
  const std::vector<std::vector<std::pair<GaussRational, int>>> shapes = {
      {{2, 2}, {2, 1}, {-1, 1}},
      {{3, 3}, {-3, 1}, {1, 2}},
      {{GaussRational(1, 1), 2}, {GaussRational(1, -1), 2}, {2, 1}},
      {{2, 2}, {2, 2}, {mpq_class(1, 2), 2}},
      {{GaussRational(0, 2), 3}, {-2, 1}, {1, 1}, {1, 1}},
      {{5, 1}, {-5, 1}, {GaussRational(3, 4), 1}, {1, 3}},
  };
  for (const auto& shape : shapes) {
    ExactMatrix s = random_unimodular(rng, [&] {
      std::size_t n = 0;
      for (auto& b : shape) n += static_cast<std::size_t>(b.second);
      return n;
    }());
    ExactMatrix m = s * jordan_matrix(shape) * s.inverse();
    auto j = eigen_structure(m, 128);
    int total = 0;
    for (const auto& b : j.blocks) total += b.size;
    CHECK(total == static_cast<int>(m.rows()));
    const long bits = 256;
    hp::PrecisionGuard guard(bits);
    for (const auto& fd : j.factors) {
      auto roots = hp::roots_squarefree(fd.factor, bits);
      for (const auto& mu : roots) {
        hp::CMatrix a = hp::CMatrix::from_exact(m, bits);
        for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) -= mu;
        hp::CMatrix p = hp::CMatrix::identity(a.rows(), bits);
        for (int k = 1; k <= fd.block_sizes.front() + 1; ++k) {
          p = p * a;
          std::size_t expected_kernel = 0;
          for (int size : fd.block_sizes) expected_kernel += static_cast<std::size_t>(std::min(size, k));
          CHECK(hp::numeric_rank(p, ldexp(hp::Real(1), -100)) == m.rows() - expected_kernel);
        }
      }
    }
  }
}

TEST_CASE("dominant selection is lexicographic in modulus then size") {
  // Eigenvalues 2 (size 1), -2 (size 2), 2i (size 2): dominant are -2 and 2i, m = 2.
  auto j = eigen_structure(jordan_matrix({{2, 1}, {-2, 2}, {GaussRational(0, 2), 2}}));
  CHECK(j.multiplicity == 2);
  CHECK(j.dominant_indices.size() == 2);
  CHECK(j.theta_group.kind == ThetaKind::FiniteCyclic);
  CHECK(j.theta_group.order == 4);  // angles pi/2 and pi generate Z/4
  CHECK(j.strictly_dominant_dim() == 0);
}

TEST_CASE("power asymptotics") {
  auto m = mat({{"2", "1"}, {"0", "2"}});
  auto j = eigen_structure(m);
  for (unsigned long n : {1UL, 5UL, 17UL, 60UL}) {
    ExactMatrix p = m.pow(n);
    mpz_class expected = mpz_class(n) << (n - 1);
    CHECK(p(0, 1) == GaussRational(mpq_class(expected)));
  }
  std::vector<long> ns;
  for (long n = 20; n <= 200; ++n) ns.push_back(n);
  auto rep = power_asymptotics(m, j, ns);
  // ||J^n|| / (n 2^n) = 1/2 + 1/n in the max-row-sum norm.
  for (std::size_t i = 0; i < ns.size(); ++i) {
    hp::Real expected = hp::Real(1) / hp::Real(2) + hp::Real(1) / hp::Real(ns[i]);
    CHECK(abs(rep.normalized_norms[i] - expected) < ldexp(hp::Real(1), -100));
  }
  CHECK(rep.rate_kind == "power");
  CHECK(rep.fitted_rate == doctest::Approx(-1.0).epsilon(0.01));

  auto id = ExactMatrix::identity(3);
  auto rid = power_asymptotics(id, eigen_structure(id), {1, 10, 100});
  for (const auto& v : rid.normalized_norms) CHECK(v == hp::Real(1));
  CHECK(rid.rate_kind == "exact");

  auto cat = mat({{"2", "1"}, {"1", "1"}});
  std::vector<long> cn;
  for (long n = 10; n <= 60; ++n) cn.push_back(n);
  auto rc = power_asymptotics(cat, eigen_structure(cat), cn);
  CHECK(rc.rate_kind == "geometric");
  // Deviation decays like (lambda_2 / lambda_1)^n = lambda^-2n.
  double ratio = 1.0 / std::pow(golden_square().to_double(), 2);
  CHECK(rc.geometric_ratio == doctest::Approx(ratio).epsilon(0.05));

  CHECK_THROWS_AS(power_asymptotics(cat, eigen_structure(cat), {5000}, 100), Error);
}

TEST_CASE("lambda_infinity closed forms and rates") {
  SUBCASE("J_{2,2}") {
    auto m = mat({{"2", "1"}, {"0", "2"}});
    auto j = eigen_structure(m);
    auto li = lambda_infinity(m, j);
    hp::CMatrix expected(2, 2, li.limit.bits());
    expected(0, 1) = hp::Complex(hp::Real(1) / hp::Real(2));
    CHECK(hp::max_norm(li.limit - expected) < ldexp(hp::Real(1), -100));
    CHECK(li.twisted_rate.holds);
    CHECK(li.averaged_rate.holds);
    CHECK(li.averaged_rank == 1);
    CHECK(li.strictly_dominant_dim == 1);
  }
  SUBCASE("rotation: averaged limit vanishes") {
    auto m = mat({{"0", "-2"}, {"2", "0"}});
    auto j = eigen_structure(m);
    auto li = lambda_infinity(m, j);
    CHECK(hp::max_norm(li.averaged) < ldexp(hp::Real(1), -100));
    CHECK(hp::max_norm(li.limit - hp::CMatrix::identity(2, li.limit.bits())) < ldexp(hp::Real(1), -100));
    CHECK(li.averaged_rank == 0);
    CHECK(li.strictly_dominant_dim == 0);
    CHECK(li.twisted_rate.holds);
    CHECK(li.averaged_rate.holds);
    LambdaInfinityOptions o;
    o.plain_limit = true;
    o.plain_residue = 1;
    auto lp = lambda_infinity(m, j, o);
    REQUIRE(lp.plain_subsequence_limit);
    // Lambda_n along n = 1 mod 4 is M / 2.
    hp::CMatrix half = hp::CMatrix::from_exact(m, lp.limit.bits()).scaled(hp::Complex(hp::Real(0.5)));
    CHECK(hp::max_norm(*lp.plain_subsequence_limit - half) < ldexp(hp::Real(1), -100));
  }
  SUBCASE("scalar map") {
    auto m = ExactMatrix::identity(3).scaled(2);
    auto li = lambda_infinity(m, eigen_structure(m));
    CHECK(hp::max_norm(li.limit - hp::CMatrix::identity(3, li.limit.bits())) < ldexp(hp::Real(1), -100));
    CHECK(li.twisted_rate.exact);
    CHECK(li.averaged_rank == 3);
  }
  SUBCASE("positive dimensional Theta refuses a plain limit") {
    // Companion of x^2 - 2x + 5: roots 1 +- 2i, argument not a rational multiple of pi.
    auto m = mat({{"0", "-5"}, {"1", "2"}});
    auto j = eigen_structure(m);
    CHECK(j.theta_group.kind == ThetaKind::PositiveDimensional);
    LambdaInfinityOptions o;
    o.plain_limit = true;
    CHECK_THROWS_AS(lambda_infinity(m, j, o), Error);
    auto li = lambda_infinity(m, j);
    CHECK(li.twisted_rate.holds);
  }
}

TEST_CASE("theta trivial implies the plain sequence converges along both parities") {
  std::mt19937_64 rng(8);
  ExactMatrix s = random_unimodular(rng, 4);
  ExactMatrix m = s * jordan_matrix({{3, 2}, {-2, 1}, {1, 1}}) * s.inverse();
  auto j = eigen_structure(m);
  REQUIRE(j.theta_group.kind == ThetaKind::Trivial);
  const long bits = j.bits + 64;
  hp::PrecisionGuard guard(bits);
  auto lim = limit_operators(m, j).first;
  hp::Real lam = j.spectral_radius;
  auto at = [&](long n) {
    hp::CMatrix p = hp::CMatrix::from_exact(m.pow(static_cast<unsigned long>(n)), bits);
    return p.scaled(hp::Complex(hp::Real(1) / (hp::Real(n) * pow(lam, n))));
  };
  hp::Real even = hp::max_norm(at(400) - lim), odd = hp::max_norm(at(401) - lim);
  CHECK(even < hp::Real(0.02));
  CHECK(odd < hp::Real(0.02));
  CHECK(hp::max_norm(at(400) - at(401)) < hp::Real(0.02));
}

TEST_CASE("Perron-Frobenius on cones") {
  std::vector<ExactVector> quadrant = {{1, 0}, {0, 1}};
  auto cat = mat({{"2", "1"}, {"1", "1"}});
  auto rep = perron_frobenius_check(cat, quadrant);
  CHECK(rep.dominant_real_eigenvalue);
  CHECK(rep.nonnegative);
  // Eigenvector ((1 + sqrt 5)/2, 1) normalised to max coordinate 1.
  hp::Real phi = (hp::Real(1) + sqrt(hp::Real(5))) / hp::Real(2);
  CHECK(abs(rep.cone_coordinates[0] - hp::Real(1)) < hp::Real(1e-30));
  CHECK(abs(rep.cone_coordinates[1] - hp::Real(1) / phi) < hp::Real(1e-30));
  CHECK(rep.residual < hp::Real(1e-30));

  auto id = perron_frobenius_check(ExactMatrix::identity(2), {{1, 1}, {0, 1}});
  CHECK(id.eigenvalue == hp::Real(1));
  CHECK(id.nonnegative);

  CHECK_THROWS_AS(perron_frobenius_check(mat({{"0", "-1"}, {"1", "0"}}), quadrant), Error);
  try {
    perron_frobenius_check(mat({{"0", "-1"}, {"1", "0"}}), quadrant);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConeNotPreserved);
  }
}
