#include "sasano/errors.hpp"
#include "sasano/reference_data.hpp"
#include "sasano/sasano_model.hpp"

#include <doctest.h>

using namespace sasano;

namespace {

PolyExpr V(Var v) { return PolyExpr::var(v); }
RatFunc T() { return RatFunc::variable(); }

}  // namespace

TEST_CASE("rational functions: normalization and arithmetic") {
  RatFunc f = parse_ratfunc("(t^2 - 1)/(2*t - 2)");
  CHECK(f == parse_ratfunc("t/2 + 1/2"));
  CHECK(f.den() == QPoly(Rational(1)));
  RatFunc g = parse_ratfunc("1/(t^2 + 1)");
  CHECK(g.den().lead() == 1);
  CHECK((g * parse_ratfunc("t^2 + 1")) == RatFunc(Rational(1)));
  CHECK(g.derivative() == parse_ratfunc("-2*t/(t^2+1)^2"));
  CHECK(parse_ratfunc(f.to_string()) == f);
  CHECK(parse_ratfunc(g.to_string()) == g);
  CHECK(g.evaluate(Rational(2)) == Rational(1, 5));
  CHECK_THROWS_AS(parse_ratfunc("1/t").evaluate(Rational(0)), DivisionByZero);
  CHECK_THROWS_AS(parse_ratfunc("t +"), InputError);
  CHECK_THROWS_AS(parse_ratfunc("u"), InputError);
}

TEST_CASE("rational antiderivatives") {
  // Differentiating back is the oracle.
  for (const char* s : {"t", "-4/5*t", "1/t^2", "(3*t^2 + 1)/(t^3 + t + 1)^2", "t^3 - 2/t^3", "1/(t-1)^2 - 1/(t+2)^3"}) {
    RatFunc f = parse_ratfunc(s);
    auto F = f.antiderivative();
    REQUIRE_MESSAGE(F, s);
    CHECK_MESSAGE(F->derivative() == f, s);
  }
  CHECK_FALSE(parse_ratfunc("1/t").antiderivative());
  CHECK_FALSE(parse_ratfunc("1/(t^2+1)").antiderivative());
  CHECK_FALSE(parse_ratfunc("1/t^2 + 1/(t-3)").antiderivative());
}

TEST_CASE("extended system reproduces the four Sasano equations") {
  HamiltonianSystem sys = build_extended_system();
  auto ref = reference_sasano_field();
  for (std::size_t k = 0; k < 4; ++k) CHECK(sys.field[k] == ref[k]);
  CHECK(sys.field[1] == -2 * V(Var::y) * V(Var::y) - 4 * V(Var::x) - 2 * V(Var::t) - V(Var::w));
  CHECK(sys.field[4] == PolyExpr(1));
  CHECK(sys.field[5] == -2 * V(Var::x));
  CHECK(sys.extended_hamiltonian.derivative(Var::F) == PolyExpr(1));

  HamiltonianSystem no_a1 = build_extended_system(ParamTriple{Rational(1), Rational(0), Rational(0)});
  CHECK(no_a1.field[0] == 4 * V(Var::x) * V(Var::y) + 2 * V(Var::z) * V(Var::w));
  CHECK_THROWS_AS(build_extended_system(ParamTriple{Rational(1), Rational(1), Rational(1)}), InputError);
}

TEST_CASE("Hamiltonian splits into two Painleve II pieces plus coupling") {
  PolyExpr H = sasano_hamiltonian();
  PolyExpr split = 2 * painleve2_hamiltonian(Var::x, Var::y, Var::t, Var::a1) +
                   painleve2_autonomous_hamiltonian(Var::z, Var::w, Var::a0) + V(Var::x) * V(Var::w) +
                   2 * V(Var::y) * V(Var::z) * V(Var::w);
  CHECK(H == split);
  CHECK(H.total_degree() <= 4);
}

TEST_CASE("seed solution and its corruptions") {
  HamiltonianSystem sys = build_extended_system(seed_params());
  RationalSolution seed = seed_solution();
  ResidualReport rep = verify_solution(sys, seed);
  CHECK(rep.verified());
  CHECK(rep.F_supplied);

  RationalSolution bad = seed;
  bad.xyzw[0] = T();
  ResidualReport bad_rep = verify_solution(sys, bad);
  CHECK_FALSE(bad_rep.verified());
  CHECK_FALSE(bad_rep.residuals[0].is_zero());

  // s0 image: z = -1/t with parameters (-2/5, 3/5, 1/10).
  RationalSolution image = seed;
  image.params = {Rational(-2, 5), Rational(3, 5), Rational(1, 10)};
  image.xyzw[2] = parse_ratfunc("-1/t");
  image.F.reset();
  ResidualReport img = verify_solution(build_extended_system(image.params), image);
  CHECK(img.verified());
  CHECK(img.F_reconstructed);

  // Wrong parameters for the seed functions.
  ParamTriple other{Rational(1, 2), Rational(1, 8), Rational(1, 8)};
  CHECK_FALSE(verify_solution(build_extended_system(other), RationalSolution{other, seed.xyzw, seed.F}).verified());
}

TEST_CASE("H + F is constant along verified solutions") {
  HamiltonianSystem sys = build_extended_system(seed_params());
  RatFunc h = hamiltonian_along(sys, seed_solution());
  CHECK(h.derivative().is_zero());
}

TEST_CASE("variational matrix along the seed") {
  HamiltonianSystem sys = build_extended_system(seed_params());
  Matrix<RatFunc> J = variational_matrix(sys, seed_solution());
  // Row of dy/dt: -4 dx - dw - 2 dt.
  CHECK(J(1, 0) == RatFunc(Rational(-4)));
  CHECK(J(1, 3) == RatFunc(Rational(-1)));
  CHECK(J(1, 4) == RatFunc(Rational(-2)));
  CHECK(J(0, 1) == parse_ratfunc("-8/5*t"));
  for (std::size_t j = 0; j < 6; ++j) CHECK(J(4, j).is_zero());

  RationalSolution bad = seed_solution();
  bad.xyzw[1] = T();
  CHECK_THROWS_AS(variational_matrix(sys, bad), VerificationError);
}

TEST_CASE("NVE along the seed equals the reference system") {
  TowerPtr tower = canonical_tower();
  HamiltonianSystem sys = build_extended_system(seed_params());
  DiffSystem nve = extract_nve(variational_matrix(sys, seed_solution()), tower);
  DiffSystem ref = ReferenceData::builtin().system("nve", standard_context(tower, "t"));
  CHECK(nve == ref);
  // A(t) = M/t has a nilpotent value at infinity.
  LeadingTerm lead = leading_matrix(nve);
  CHECK(lead.rank == 1);
  auto cp = char_poly(lead.L);
  for (std::size_t k = 0; k < 4; ++k) CHECK(cp[k].is_zero());

  Matrix<RatFunc> corrupted = variational_matrix(sys, seed_solution());
  corrupted(4, 0) = RatFunc(Rational(1));
  CHECK_THROWS_AS(extract_nve(corrupted, tower), VerificationError);
  Matrix<RatFunc> non_laurent = variational_matrix(sys, seed_solution());
  non_laurent(0, 0) = parse_ratfunc("1/(t-1)");
  CHECK_THROWS_AS(extract_nve(non_laurent, tower), InputError);
}

TEST_CASE("solution JSON round trip") {
  RationalSolution s = seed_solution();
  s.xyzw[2] = parse_ratfunc("(t^2-3)/(t^3+1)");
  RationalSolution back = solution_from_json(solution_to_json(s));
  CHECK(back.params == s.params);
  CHECK(back.xyzw == s.xyzw);
  CHECK(back.F == s.F);
  CHECK_THROWS_AS(solution_from_json(nlohmann::json{{"params", {"1"}}}), InputError);
  CHECK_THROWS_AS(parse_params("1/2,1/4"), InputError);
  CHECK(parse_params("2/5, 1/5, 1/10") == seed_params());
}
