#include "doctest.h"

#include "sasano/alg_field.hpp"
#include "sasano/errors.hpp"

#include <cmath>
#include <random>

using namespace sasano;

namespace {

AlgNum gen(const TowerPtr& t, const char* name) { return AlgNum::generator(t, name); }

AlgNum random_element(const TowerPtr& t, std::mt19937_64& rng, int density) {
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 7);
  std::uniform_int_distribution<int> pick(0, 99);
  std::vector<Rational> c(t->dimension());
  for (auto& q : c) {
    if (pick(rng) < density) q = Rational(num(rng), den(rng));
  }
  c[0] += 1;
  return AlgNum(t, std::move(c));
}

// Independent numeric oracle for the canonical generators.
std::complex<long double> oracle_value(const AlgNum& a) {
  const auto& t = *a.tower();
  const long double gamma = std::pow(5.0L / 64.0L, 1.0L / 12.0L);
  const long double beta = std::sqrt(6.0L * std::sqrt(5.0L) - 10.0L);
  std::complex<long double> acc = 0;
  auto c = a.coeffs();
  for (std::size_t idx = 0; idx < c.size(); ++idx) {
    if (sgn(c[idx]) == 0) continue;
    std::size_t e0 = idx % 12, e1 = (idx / 12) % 2, e2 = idx / 24;
    std::complex<long double> term = static_cast<long double>(c[idx].get_d());
    term *= std::pow(gamma, static_cast<long double>(e0));
    if (e1) term *= std::complex<long double>(0, 1);
    if (e2) term *= beta;
    acc += term;
  }
  (void)t;
  return acc;
}

}  // namespace

TEST_CASE("canonical tower constants") {
  auto t = canonical_tower();
  CHECK(t->dimension() == 48);
  AlgNum g = gen(t, "gamma");
  AlgNum i = gen(t, "i");
  AlgNum b = gen(t, "beta");
  AlgNum s5 = g.pow(6) * Rational(8);
  CHECK(s5 * s5 == AlgNum(t, 5));
  CHECK(i * i == AlgNum(t, -1));
  CHECK(g.pow(12) == AlgNum(t, Rational(5, 64)));
  AlgNum bp = s5 * Rational(4) / b;
  CHECK((s5 * 6 - Rational(10)) * (s5 * 6 + Rational(10)) == AlgNum(t, 80));
  CHECK(bp * bp == s5 * 6 + Rational(10));
  CHECK(std::abs(g.approx().real() - 0.80859770158337) < 1e-13);
  CHECK(std::abs(bp.approx().real() / 2 - 2.41952515305) < 1e-10);
  CHECK(std::abs(b.approx().real() / 2 - 0.924177) < 1e-6);
}

TEST_CASE("tower self-check") {
  for (auto t : {canonical_tower(), wasow_tower()}) {
    auto report = t->self_check();
    REQUIRE(report.ok());
    for (const auto& lv : report.levels) {
      CHECK(lv.irreducible.has_value());
      CHECK(lv.separation > 1e-3);
    }
  }
}

TEST_CASE("reducible level is detected") {
  auto q = TowerSpec::rationals();
  auto t = q->extend("r", {AlgNum(q, -4), AlgNum(q, 0)}, {2.0, 0.0});
  auto report = t->self_check();
  REQUIRE(report.levels.size() == 1);
  CHECK(report.levels[0].irreducible == false);
  CHECK_FALSE(report.ok());
}

TEST_CASE("inverse and rational recognition") {
  auto t = canonical_tower();
  std::mt19937_64 rng(7);
  for (int k = 0; k < 30; ++k) {
    AlgNum a = random_element(t, rng, 25);
    CHECK(a * a.inverse() == AlgNum(t, 1));
  }
  AlgNum b = gen(t, "beta");
  AlgNum i = gen(t, "i");
  AlgNum l1 = -i * b / Rational(2);
  AlgNum l2 = i * b / Rational(2);
  CHECK(rational_recognize(l1 + l2) == Rational(0));
  CHECK(l1 * l2 == b * b / Rational(4));
  CHECK_FALSE(rational_recognize(b).has_value());
  CHECK_THROWS_AS(AlgNum(t, 0).inverse(), DivisionByZero);
  CHECK_THROWS_AS(AlgNum(t, 1) + AlgNum(wasow_tower(), 1), TowerMismatch);
}

TEST_CASE("square roots in the tower") {
  auto t = canonical_tower();
  AlgNum g = gen(t, "gamma");
  AlgNum i = gen(t, "i");
  AlgNum b = gen(t, "beta");
  AlgNum s5 = g.pow(6) * Rational(8);
  auto r = try_sqrt(AlgNum(t, 5));
  REQUIRE(r.has_value());
  CHECK((*r == s5 || *r == -s5));
  CHECK(principal_sqrt(AlgNum(t, -1)) == i);
  CHECK(principal_sqrt(s5 * 6 - Rational(10)) == b);
  CHECK(principal_sqrt(AlgNum(t, Rational(5, 64))) == g.pow(6));
  CHECK(principal_sqrt(g * g) == g);
  CHECK(principal_sqrt(-g * g) == i * g);
  CHECK_FALSE(try_sqrt(AlgNum(t, 3)).has_value());
  CHECK_FALSE(try_sqrt(b).has_value());
  std::mt19937_64 rng(11);
  for (int k = 0; k < 20; ++k) {
    AlgNum a = random_element(t, rng, 8);
    auto s = try_sqrt(a * a);
    REQUIRE(s.has_value());
    CHECK((*s == a || *s == -a));
  }
  // kappa for the eigenvalue pair (lambda1, lambda2): kappa^2 = 1/4.
  AlgNum l1 = -i * b / Rational(2), l2 = i * b / Rational(2);
  AlgNum A = -l1 * l2 / Rational(36);
  AlgNum B = -(l2 - l1) / Rational(12);
  AlgNum kappa2 = B * B / (A * Rational(4));
  CHECK(rational_recognize(kappa2) == Rational(1, 4));
}

TEST_CASE("wasow tower square roots") {
  auto t = wasow_tower();
  AlgNum d = gen(t, "delta");
  AlgNum s5 = gen(t, "s5");
  CHECK(principal_sqrt(AlgNum(t, 5)) == s5);
  CHECK(principal_sqrt(d * d * Rational(9)) == d * Rational(3));
  auto r = try_sqrt(d);
  REQUIRE(r.has_value());
  CHECK(*r * *r == d);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 10; ++k) {
    AlgNum a = random_element(t, rng, 6);
    auto s = try_sqrt(a * a);
    REQUIRE(s.has_value());
    CHECK((*s == a || *s == -a));
  }
  CHECK(std::abs(d.approx().real() - 0.820335356007638) < 1e-12);
}

TEST_CASE("embedding is a ring homomorphism") {
  auto t = canonical_tower();
  std::mt19937_64 rng(2024);
  int failures = 0;
  for (int k = 0; k < 1000; ++k) {
    AlgNum a = random_element(t, rng, 10);
    AlgNum b = random_element(t, rng, 10);
    BigComplex ea = numeric_embed(a, 20);
    BigComplex eb = numeric_embed(b, 20);
    auto check = [&](const AlgNum& exact, const BigComplex& expect) {
      BigComplex diff = numeric_embed(exact, 20) - expect;
      mpf_class scale = expect.abs();
      if (scale < 1) scale = 1;
      if (diff.abs() > 1e-12 * scale) ++failures;
    };
    check(a + b, ea + eb);
    check(a * b, ea * eb);
    if (k % 50 == 0) check(a / b, ea / eb);
  }
  CHECK(failures == 0);
}

TEST_CASE("embedding matches an independent evaluation") {
  auto t = canonical_tower();
  std::mt19937_64 rng(99);
  for (int k = 0; k < 50; ++k) {
    AlgNum a = random_element(t, rng, 20);
    auto got = a.approx();
    auto expect = oracle_value(a);
    CHECK(std::abs(std::complex<long double>(got.real(), got.imag()) - expect) <
          1e-10L * std::max(1.0L, std::abs(expect)));
  }
  CHECK_THROWS_AS(numeric_embed(AlgNum(t, 1), 10), InputError);
}
