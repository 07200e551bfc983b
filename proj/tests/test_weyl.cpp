#include "sasano/weyl_orbit.hpp"

#include <doctest.h>

#include <random>

using namespace sasano;

namespace {

ParamTriple P(long n0, long d0, long n1, long d1, long n2, long d2) {
  return {Rational(n0, d0), Rational(n1, d1), Rational(n2, d2)};
}

}  // namespace

TEST_CASE("generators on parameters") {
  ParamTriple seed = seed_params();
  CHECK(act_on_params(0, seed) == P(-2, 5, 3, 5, 1, 10));
  CHECK(act_on_params(2, seed) == P(2, 5, 2, 5, -1, 10));
  CHECK(act_on_params(1, seed) == P(4, 5, -1, 5, 3, 10));
  ParamTriple fixed{Rational(1, 3), Rational(0), Rational(1, 3)};
  CHECK(act_on_params(1, fixed) == fixed);

  std::mt19937 rng(7);
  std::uniform_int_distribution<long> d(-50, 50);
  for (int k = 0; k < 200; ++k) {
    ParamTriple p{Rational(d(rng), 7), Rational(d(rng), 3), Rational(0)};
    p.a0.canonicalize();
    p.a1.canonicalize();
    p.a2 = (1 - p.a0 - 2 * p.a1) / 2;
    for (int g = 0; g < 3; ++g) {
      CHECK(act_on_params(g, p).normalized());
      CHECK(act_on_params(g, act_on_params(g, p)) == p);
    }
  }
}

TEST_CASE("generators on the seed solution") {
  RationalSolution seed = seed_solution();
  RationalSolution s0 = act_on_state(0, seed);
  CHECK(s0.xyzw[2] == parse_ratfunc("-1/t"));
  CHECK(s0.xyzw[0] == seed.xyzw[0]);
  CHECK(s0.xyzw[1] == seed.xyzw[1]);
  CHECK(s0.xyzw[3] == seed.xyzw[3]);

  RationalSolution s1 = act_on_state(1, seed);
  CHECK(s1.xyzw[1] == parse_ratfunc("1/(2*t)"));
  CHECK(s1.xyzw[3] == seed.xyzw[3]);

  for (int g = 0; g < 3; ++g) {
    RationalSolution back = act_on_state(g, act_on_state(g, seed));
    CHECK(back.xyzw == seed.xyzw);
    CHECK(back.params == seed.params);
  }
}

TEST_CASE("invariant divisors") {
  // f2 = x + y^2 + w + t = -7 + 4 + 1 + 2 = 0 with alpha2 = 0.
  PhasePoint p{{Rational(-7), Rational(2), Rational(1), Rational(1)}, Rational(2),
               ParamTriple{Rational(1, 3), Rational(1, 3), Rational(0)}};
  CHECK(act_on_point(2, p) == PhasePoint{p.xyzw, p.t, act_on_params(2, p.params)});
  PhasePoint bad = p;
  bad.params = {Rational(1, 3), Rational(0), Rational(1, 3)};
  CHECK_THROWS_AS(act_on_point(2, bad), DivisorVanishes);

  RationalSolution zero_w = seed_solution();
  zero_w.xyzw[3] = RatFunc();
  CHECK_THROWS_AS(act_on_state(0, zero_w), DivisorVanishes);
}

TEST_CASE("relations at a fixed point") {
  PhasePoint p{{Rational(1), Rational(2), Rational(3), Rational(4)}, Rational(5), seed_params()};
  PhasePoint q = p;
  for (int g : {2, 0, 2, 0}) q = act_on_point(g, q);
  CHECK(q == p);
}

TEST_CASE("group relations hold on parameters and at random points") {
  RelationReport rep = verify_group_relations(60);
  CHECK(rep.relations.size() == 9);
  for (const auto& r : rep.relations) {
    CHECK_MESSAGE(r.params_ok, r.relation);
    CHECK_MESSAGE(r.points_checked >= 50, r.relation);
    CHECK_MESSAGE(!r.witness, r.relation);
  }
  CHECK(rep.ok());
}

TEST_CASE("a false relation is caught with a witness") {
  // (s0 s1)^2 is not the identity.
  PhasePoint p{{Rational(1), Rational(2), Rational(3), Rational(4)}, Rational(5), seed_params()};
  PhasePoint q = p;
  for (int g : {1, 0, 1, 0}) q = act_on_point(g, q);
  CHECK_FALSE(q == p);
  Matrix<Rational> m = param_matrix(0) * param_matrix(1) * param_matrix(0) * param_matrix(1);
  CHECK(m != Matrix<Rational>::identity(3, Rational(0), Rational(1)));
}

TEST_CASE("congruence rows") {
  auto seed = matsuda_check(seed_params());
  CHECK(seed.row == 1);
  CHECK(*seed.a == 0);
  CHECK(*seed.b == 0);
  auto s2 = matsuda_check(P(2, 5, 2, 5, -1, 10));
  CHECK(*s2.a == 4);
  CHECK(*s2.b == 1);
  CHECK(s2.row == 4);
  CHECK_FALSE(matsuda_check(P(1, 3, 0, 1, 1, 3)).row);
  CHECK_FALSE(matsuda_check(P(1, 3, 0, 1, 1, 3)).a);
}

TEST_CASE("orbit of the seed") {
  RationalSolution seed = seed_solution();
  CHECK(enumerate_orbit(seed, 0).nodes.size() == 1);
  OrbitReport one = enumerate_orbit(seed, 1);
  CHECK(one.nodes.size() == 4);
  CHECK(one.all_verified());

  OrbitReport rep = enumerate_orbit(seed, 4);
  CHECK(rep.all_verified());
  CHECK(rep.all_normalized());
  CHECK(rep.all_matched());
  CHECK(rep.discrepancies.empty());
  CHECK(rep.collisions_checked > 0);
  std::size_t total = 0;
  for (auto n : rep.nodes_at_depth) total += n;
  CHECK(total == rep.nodes.size());

  std::string jsonl = orbit_to_jsonl(one);
  CHECK(std::count(jsonl.begin(), jsonl.end(), '\n') == 4);
  auto first = nlohmann::json::parse(jsonl.substr(0, jsonl.find('\n')));
  CHECK(first.at("matsuda_row") == 1);
  CHECK(first.at("word").empty());
}
