#include <doctest.h>

#include <random>

#include "kdyn/equilibrium.hpp"
#include "kdyn/error.hpp"

using namespace kdyn;
using namespace kdyn::equilibrium;
using models::TorusAutomorphism;

namespace {

ExactMatrix mat(const std::vector<std::vector<std::string>>& rows) { return ExactMatrix::parse(rows); }

TorusAutomorphism cat_map() { return {2, mat({{"2", "1"}, {"1", "1"}})}; }

// Transpose of the real 2k x 2k matrix of A, built directly from the entries.
std::vector<std::vector<__int128>> freq_matrix(const ExactMatrix& a) {
  const std::size_t k = a.rows();
  std::vector<std::vector<__int128>> real(2 * k, std::vector<__int128>(2 * k, 0));
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t c = 0; c < k; ++c) {
      const long p = a(r, c).re().get_num().get_si(), q = a(r, c).im().get_num().get_si();
      real[r][c] = p;
      real[r][k + c] = -q;
      real[k + r][c] = q;
      real[k + r][k + c] = p;
    }
  auto t = real;
  for (std::size_t r = 0; r < 2 * k; ++r)
    for (std::size_t c = 0; c < 2 * k; ++c) t[r][c] = real[c][r];
  return t;
}

// Coincidence indices n in [1, n_max] of B^n a = -b, brute force.
std::vector<long> brute_coincidences(const ExactMatrix& a, const Frequency& m, const Frequency& mp, long n_max) {
  auto b = freq_matrix(a);
  std::vector<__int128> x(m.begin(), m.end());
  std::vector<long> out;
  for (long n = 1; n <= n_max; ++n) {
    std::vector<__int128> y(x.size(), 0);
    for (std::size_t r = 0; r < x.size(); ++r)
      for (std::size_t c = 0; c < x.size(); ++c) y[r] += b[r][c] * x[c];
    x = y;
    bool hit = true;
    for (std::size_t i = 0; i < x.size(); ++i) hit = hit && x[i] == -static_cast<__int128>(mp[i]);
    if (hit) out.push_back(n);
  }
  return out;
}

Frequency image(const ExactMatrix& a, const Frequency& m, int times) {
  auto b = freq_matrix(a);
  std::vector<__int128> x(m.begin(), m.end());
  for (int t = 0; t < times; ++t) {
    std::vector<__int128> y(x.size(), 0);
    for (std::size_t r = 0; r < x.size(); ++r)
      for (std::size_t c = 0; c < x.size(); ++c) y[r] += b[r][c] * x[c];
    x = y;
  }
  return Frequency(x.begin(), x.end());
}

Frequency neg(Frequency f) {
  for (auto& v : f) v = -v;
  return f;
}

// Random unimodular Gaussian-integer 2x2 matrices from shears, kept when hyperbolic.
std::vector<TorusAutomorphism> random_hyperbolic(int count, unsigned seed) {
  std::mt19937 rng(seed);
  const std::vector<std::string> units = {"1", "-1", "i", "-i", "1+i", "1-i", "2", "-2"};
  std::uniform_int_distribution<std::size_t> pick(0, units.size() - 1);
  std::vector<TorusAutomorphism> out;
  while (static_cast<int>(out.size()) < count) {
    ExactMatrix a = ExactMatrix::identity(2);
    for (int s = 0; s < 3; ++s) {
      ExactMatrix e = ExactMatrix::identity(2);
      e(s % 2, 1 - s % 2) = GaussRational::parse(units[pick(rng)]);
      a = a * e;
    }
    TorusAutomorphism t{2, a};
    if (frequency_lattice(t).hyperbolic) out.push_back(t);
  }
  return out;
}

}  // namespace

TEST_CASE("trigonometric polynomials") {
  auto c = TrigPolynomial::cosine({1, 0, 2, 0});
  CHECK(c.terms.size() == 2);
  CHECK(c.mean().is_zero());
  CHECK(c.max_frequency() == 2);
  TrigPolynomial p{2, {{{0, 0}, GaussRational(3)}, {{1, 1}, GaussRational(1)}, {{1, 1}, GaussRational(-1)}}, "p"};
  p.normalize();
  CHECK(p.terms.size() == 1);
  CHECK(p.mean() == GaussRational(3));
  CHECK(default_resolution(1) == 1024);
  CHECK(default_resolution(2) == 32);
  CHECK(default_resolution(3) == 8);
}

TEST_CASE("cat map: no coincidence for independent characters") {
  auto rep = haar_character_correlation(cat_map(), {1, 0, 0, 0}, {0, 1, 0, 0}, 1, 100);
  CHECK(rep.hyperbolic);
  CHECK(rep.escape_certified);
  CHECK(rep.coincidences.empty());
  CHECK(rep.decay_flag);
  for (const auto& v : rep.exact) CHECK(v.is_zero());
  CHECK(brute_coincidences(cat_map().A, {1, 0, 0, 0}, {0, 1, 0, 0}, 60).empty());
}

TEST_CASE("constructed coincidence at n = 1 and escape afterwards") {
  const Frequency m{1, 0, 0, 0};
  const Frequency mp = neg(image(cat_map().A, m, 1));
  auto rep = haar_character_correlation(cat_map(), m, mp, 1, 100);
  CHECK(rep.exact[0] == GaussRational(1));
  for (std::size_t i = 1; i < rep.exact.size(); ++i) CHECK(rep.exact[i].is_zero());
  CHECK(rep.last_coincidence == 1);
  CHECK(rep.decay_flag);
  CHECK(rep.values[0] == 1.0);
}

TEST_CASE("zero frequencies and malformed vectors") {
  CHECK_THROWS_AS(haar_character_correlation(cat_map(), {0, 0, 0, 0}, {1, 0, 0, 0}, 1, 10), Error);
  try {
    haar_character_correlation(cat_map(), {1, 0, 0, 0}, {0, 0, 0, 0}, 1, 10);
    FAIL("expected ZeroFrequency");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroFrequency);
  }
  CHECK_THROWS_AS(haar_character_correlation(cat_map(), {1, 0}, {1, 0, 0, 0}, 1, 10), Error);
}

TEST_CASE("non-hyperbolic maps: recurrence is reported, decay is not claimed") {
  // rotation by i has order 4 on the 2-torus
  TorusAutomorphism rot{1, mat({{"i"}})};
  auto rep = haar_character_correlation(rot, {1, 0}, {1, 0}, 1, 12);
  CHECK_FALSE(rep.hyperbolic);
  CHECK(rep.coincidences == std::vector<long>{2, 6, 10});
  CHECK_FALSE(rep.decay_flag);
  // parabolic shear
  TorusAutomorphism shear{2, mat({{"1", "1"}, {"0", "1"}})};
  const Frequency m{1, 0, 0, 0};
  auto r2 = haar_character_correlation(shear, m, neg(image(shear.A, m, 5)), 1, 20);
  CHECK_FALSE(r2.hyperbolic);
  CHECK(r2.coincidences == std::vector<long>{5});
}

TEST_CASE("correlation symmetry under the inverse") {
  for (const auto& t : random_hyperbolic(4, 11)) {
    const auto inv = inverse(t);
    CHECK(inv.A * t.A == ExactMatrix::identity(2));
    const Frequency m{1, 0, 0, 1};
    for (int shift : {1, 2, 3}) {
      const Frequency mp = neg(image(t.A, m, shift));
      auto fwd = haar_character_correlation(t, m, mp, 1, 10);
      auto bwd = haar_character_correlation(inv, mp, m, 1, 10);
      CHECK(fwd.exact == bwd.exact);
      CHECK(fwd.last_coincidence == shift);
    }
  }
}

TEST_CASE("grid path agrees exactly with characters in the alias-safe range") {
  const auto cos1 = TrigPolynomial::cosine({1, 0, 0, 0}, "cos");
  auto rep = grid_correlation(cat_map(), cos1, cos1, 0, 6);
  CHECK(rep.resolution == 32);
  CHECK(rep.alias_limit == 3);  // ||B^3|| = 21, ||B^4|| = 55
  CHECK(rep.grid_n == std::vector<long>{0, 1, 2, 3});
  CHECK(rep.grid_agrees);
  CHECK(rep.exact[0] == GaussRational(mpq_class(1, 2)));
  CHECK(rep.grid_values[0] == doctest::Approx(0.5));
  CHECK(rep.warnings.size() == 1);

  const Frequency m{1, 0, 0, 0};
  auto hit = grid_correlation(cat_map(), TrigPolynomial::character(m), TrigPolynomial::character(neg(image(cat_map().A, m, 1))), 1, 3);
  CHECK(hit.grid_agrees);
  CHECK(hit.grid_exact[0][0] == GaussRational(1));

  // orthogonal characters
  auto orth = grid_correlation(cat_map(), TrigPolynomial::character({1, 0, 0, 0}), TrigPolynomial::character({0, 0, 1, 0}), 0, 3);
  CHECK(orth.grid_agrees);
  for (const auto& v : orth.exact) CHECK(v.is_zero());
}

TEST_CASE("grid path sees aliasing beyond the safe range") {
  // On an 8-grid the cat map orbit of (1,0) folds back: B^n m + b = 0 mod 8 without equality.
  const Frequency m{1, 0, 0, 0};
  const auto phi = TrigPolynomial::character(m);
  bool differs = false;
  for (long n = 1; n <= 12 && !differs; ++n) {
    const Frequency alias = image(cat_map().A, m, static_cast<int>(n));
    Frequency b(4);
    for (std::size_t i = 0; i < 4; ++i) b[i] = -(((alias[i] % 8) + 8) % 8);
    if (b == neg(alias)) continue;
    auto rep = grid_correlation(cat_map(), phi, TrigPolynomial::character(b), 0, n, 8);
    CHECK(rep.alias_limit < n);
    CHECK_FALSE(rep.warnings.empty());
    differs = true;
  }
  CHECK(differs);
}

TEST_CASE("random hyperbolic maps and trig polynomials: exact last coincidence") {
  std::mt19937 rng(29);
  std::uniform_int_distribution<long> f(-2, 2);
  std::uniform_int_distribution<int> cf(-3, 3);
  for (const auto& t : random_hyperbolic(5, 3)) {
    TrigPolynomial phi{4, {}, "phi"}, psi{4, {}, "psi"};
    for (int i = 0; i < 3; ++i) {
      Frequency a{f(rng), f(rng), f(rng), f(rng)};
      phi.terms.push_back({a, GaussRational(cf(rng))});
    }
    // plant coincidences at n = 1 and n = 2
    psi.terms.push_back({neg(image(t.A, phi.terms[0].freq, 1)), GaussRational(2)});
    psi.terms.push_back({neg(image(t.A, phi.terms[1].freq, 2)), GaussRational(1)});
    psi.terms.push_back({{f(rng), f(rng), f(rng), f(rng)}, GaussRational(cf(rng))});
    phi.normalize();
    psi.normalize();
    auto rep = trig_correlation(t, phi, psi, 1, 30);
    // oracle: exhaustive pair search up to n = 30
    long last = 0;
    for (const auto& a : phi.terms)
      for (const auto& b : psi.terms) {
        if (a.freq == Frequency(4, 0) || b.freq == Frequency(4, 0)) continue;
        auto hits = brute_coincidences(t.A, a.freq, b.freq, 30);
        if (!hits.empty()) last = std::max(last, hits.back());
      }
    CHECK(rep.last_coincidence == last);
    CHECK(rep.escape_certified);
    CHECK(rep.decay_flag);
    for (std::size_t i = 0; i < rep.n.size(); ++i)
      if (rep.n[i] > rep.last_coincidence) CHECK(rep.exact[i].is_zero());
  }
}

TEST_CASE("ergodic averages") {
  const Frequency m{1, 0, 0, 0};
  auto one = ergodic_average_check(cat_map(), TrigPolynomial::character(m), TrigPolynomial::character(neg(image(cat_map().A, m, 1))), 50);
  for (std::size_t i = 0; i < one.n.size(); ++i) CHECK(one.exact[i] == GaussRational(1) / GaussRational(one.n[i]));
  CHECK(one.tail_constant == GaussRational(1));
  CHECK(one.rate_constant == 1);
  CHECK(one.rate_holds);
  CHECK(one.converges);

  TrigPolynomial zero{4, {}, "zero"};
  auto z = ergodic_average_check(cat_map(), zero, TrigPolynomial::cosine(m), 20);
  for (const auto& v : z.exact) CHECK(v.is_zero());

  std::mt19937 rng(8);
  std::uniform_int_distribution<long> f(-2, 2);
  TrigPolynomial phi{4, {}, "phi"}, psi{4, {}, "psi"};
  for (int i = 0; i < 4; ++i) {
    Frequency a{f(rng), f(rng), 0, 0};
    if (a == Frequency(4, 0)) continue;
    phi.terms.push_back({a, GaussRational(1 + i)});
    psi.terms.push_back({neg(a), GaussRational(1)});
    psi.terms.push_back({neg(image(cat_map().A, a, 2)), GaussRational(1)});
  }
  phi.normalize();
  psi.normalize();
  auto r = ergodic_average_check(cat_map(), phi, psi, 100);
  CHECK(r.rate_holds);
  CHECK(r.converges);
  CHECK(std::abs(r.values.back()) <= r.rate_constant / 100 + 1e-15);

  TrigPolynomial biased{4, {{{0, 0, 0, 0}, GaussRational(1)}}, "c"};
  CHECK_THROWS_AS(ergodic_average_check(cat_map(), biased, psi, 10), Error);
}
