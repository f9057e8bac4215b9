#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <vector>

#include "octspec/cdnum.hpp"
#include "octspec/rng.hpp"

using namespace octspec;

namespace {

// Independent oracle: full-vector Cayley-Dickson product by direct
// recursion on (a,b)(c,d) = (ac - conj(d)b, da + b conj(c)), working on
// raw coefficient slices.  Untied to the table-based implementation.
std::vector<double> oracle_conj(std::vector<double> a) {
  for (std::size_t i = 1; i < a.size(); ++i) a[i] = -a[i];
  return a;
}

std::vector<double> oracle_mul(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t d = a.size();
  if (d == 1) return {a[0] * b[0]};
  const std::size_t h = d / 2;
  const std::vector<double> a1(a.begin(), a.begin() + h), a2(a.begin() + h, a.end());
  const std::vector<double> b1(b.begin(), b.begin() + h), b2(b.begin() + h, b.end());
  const auto x1 = oracle_mul(a1, b1);                  // ac
  const auto x2 = oracle_mul(oracle_conj(b2), a2);     // conj(d) b
  const auto y1 = oracle_mul(b2, a1);                  // da
  const auto y2 = oracle_mul(a2, oracle_conj(b1));     // b conj(c)
  std::vector<double> out(d);
  for (std::size_t i = 0; i < h; ++i) {
    out[i] = x1[i] - x2[i];
    out[h + i] = y1[i] + y2[i];
  }
  return out;
}

CdNumber oracle_product(const CdNumber& a, const CdNumber& b) {
  return CdNumber(a.level(), oracle_mul(a.coeffs(), b.coeffs()));
}

}  // namespace

TEST_CASE("basis_mul fixed examples") {
  // identity generator
  auto p = basis_mul(0, 5, 3);
  CHECK(p.sign == 1);
  CHECK(p.index == 5);
  // imaginary unit square
  p = basis_mul(1, 1, 2);
  CHECK(p.sign == -1);
  CHECK(p.index == 0);
  // frozen from the doubling-recursion oracle at v=2
  p = basis_mul(1, 2, 2);
  CHECK(p.sign == 1);
  CHECK(p.index == 3);
}

TEST_CASE("basis_mul agrees with the vector oracle exhaustively up to v=4") {
  for (int v = 0; v <= 4; ++v) {
    const int d = dim_of_level(v);
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        const BasisProduct p = basis_mul(j, k, v);
        const CdNumber prod = oracle_product(CdNumber::basis(v, j), CdNumber::basis(v, k));
        CHECK(prod[p.index] == doctest::Approx(double(p.sign)));
        CHECK(prod.norm() == doctest::Approx(1.0));
      }
  }
}

TEST_CASE("basis_mul rejects out-of-range input") {
  CHECK_THROWS_AS(basis_mul(4, 0, 2), std::invalid_argument);
  CHECK_THROWS_AS(basis_mul(0, 0, 99), std::invalid_argument);
}

TEST_CASE("kappa rule") {
  CHECK(kappa(0, 3) == 0);
  CHECK(kappa(2, 2) == 0);
  CHECK(kappa(1, 2) == 1);
  CHECK(kappa(7, 3) == 1);
}

TEST_CASE("kappa commutation exhaustively for v <= 4") {
  for (int v = 2; v <= 4; ++v) {
    const int d = dim_of_level(v);
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        const BasisProduct jk = basis_mul(j, k, v);
        const BasisProduct kj = basis_mul(k, j, v);
        REQUIRE(jk.index == kj.index);
        const int expected = (kappa(j, k) == 0) ? kj.sign : -kj.sign;
        REQUIRE(jk.sign == expected);
      }
  }
}

TEST_CASE("mul fixed examples") {
  // (1 + i1)(1 - i1) = 2 in A_2
  CdNumber a(2, {1, 1, 0, 0});
  CdNumber b(2, {1, -1, 0, 0});
  CHECK(distance(a * b, CdNumber::real(2, 2.0)) < 1e-15);

  // i1 * i2 = i3
  CHECK(distance(CdNumber::basis(2, 1) * CdNumber::basis(2, 2), CdNumber::basis(2, 3)) == 0.0);
}

TEST_CASE("mul matches the recursive vector oracle on random pairs") {
  Rng rng(42);
  for (int v = 0; v <= 4; ++v)
    for (int rep = 0; rep < 50; ++rep) {
      const CdNumber a = rng.cd(v);
      const CdNumber b = rng.cd(v);
      REQUIRE(distance(a * b, oracle_product(a, b)) < 1e-12);
    }
}

TEST_CASE("mul rejects level mismatch") {
  CHECK_THROWS_AS(CdNumber::mul(CdNumber(2), CdNumber(3)), std::invalid_argument);
}

TEST_CASE("squared norm equals Re(a * conj(a)) at every level") {
  Rng rng(37);
  for (int v = 0; v <= 5; ++v) {
    const CdNumber a = rng.cd(v);
    CHECK((a * a.conjugate()).real_part() == doctest::Approx(a.norm_sq()).epsilon(1e-12));
    CHECK((a.conjugate() * a).real_part() == doctest::Approx(a.norm_sq()).epsilon(1e-12));
  }
}

TEST_CASE("conjugate, norm, inverse, real part") {
  CHECK(distance(CdNumber::basis(3, 2).conjugate(), CdNumber::basis(3, 2, -1.0)) == 0.0);
  CHECK(CdNumber(2, {1, 1, 1, 1}).norm() == doctest::Approx(2.0));
  // inverse(2 i1) = -i1/2
  CHECK(distance(CdNumber::basis(2, 1, 2.0).inverse(), CdNumber::basis(2, 1, -0.5)) < 1e-15);
  CHECK(CdNumber(2, {7, 1, 2, 3}).real_part() == 7.0);
  CHECK_THROWS_AS(CdNumber(2).inverse(), std::domain_error);
}

TEST_CASE("a * a^{-1} = 1 for random nonzero octonions") {
  Rng rng(7);
  const CdNumber one = CdNumber::real(3, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    const CdNumber a = rng.cd(3);
    if (a.norm() < 1e-3) continue;
    CHECK(distance(a * a.inverse(), one) < 1e-12);
    CHECK(distance(a.inverse() * a, one) < 1e-12);
  }
}

TEST_CASE("quaternion associativity on random triples") {
  Rng rng(13);
  for (int rep = 0; rep < 1000; ++rep) {
    const CdNumber a = rng.cd(2), b = rng.cd(2), c = rng.cd(2);
    REQUIRE(distance((a * b) * c, a * (b * c)) < 1e-12);
  }
}

TEST_CASE("octonion alternativity and trace associativity") {
  Rng rng(17);
  for (int rep = 0; rep < 1000; ++rep) {
    const CdNumber a = rng.cd(3), b = rng.cd(3), c = rng.cd(3);
    CHECK(distance((a * a) * b, a * (a * b)) < 1e-12);
    CHECK(distance((a * b) * b, a * (b * b)) < 1e-12);
    CHECK(((a * b) * c).real_part() == doctest::Approx((a * (b * c)).real_part()).epsilon(1e-12));
  }
}

TEST_CASE("norm multiplicativity holds up to v=3 and fails at v=4") {
  Rng rng(23);
  for (int v = 0; v <= 3; ++v)
    for (int rep = 0; rep < 200; ++rep) {
      const CdNumber a = rng.cd(v), b = rng.cd(v);
      REQUIRE((a * b).norm() == doctest::Approx(a.norm() * b.norm()).epsilon(1e-12));
    }
  const auto zd = find_zero_divisor(4);
  REQUIRE(zd.has_value());
  CHECK(zd->a.norm() > 0.0);
  CHECK(zd->b.norm() > 0.0);
  CHECK((zd->a * zd->b).norm() == 0.0);  // exact integer cancellation
}

TEST_CASE("zero divisor search rejects v <= 3 and works at v=5") {
  CHECK_THROWS_AS(find_zero_divisor(3), std::invalid_argument);
  const auto zd = find_zero_divisor(5);
  REQUIRE(zd.has_value());
  CHECK((zd->a * zd->b).is_zero());
}

TEST_CASE("trace associativity holds at sedenion level and above") {
  // Re((ab)c) == Re(a(bc)) backs the transpose rule for left actions.
  Rng rng(29);
  for (int v = 4; v <= 5; ++v)
    for (int rep = 0; rep < 100; ++rep) {
      const CdNumber a = rng.cd(v), b = rng.cd(v), c = rng.cd(v);
      REQUIRE(((a * b) * c).real_part() ==
              doctest::Approx((a * (b * c)).real_part()).epsilon(1e-12));
    }
}

TEST_CASE("cd json round trip") {
  Rng rng(31);
  const CdNumber a = rng.cd(3);
  const CdNumber back = cd_from_json(cd_to_json(a));
  REQUIRE(back.level() == a.level());
  REQUIRE(back.coeffs() == a.coeffs());
}
