#include "sasano/errors.hpp"
#include "sasano/galois_classifier.hpp"
#include "sasano/reduction_pipeline.hpp"

#include <doctest.h>

#include <random>

using namespace sasano;

namespace {

struct Reduced {
  TowerPtr tower;
  ReductionTrace trace;
  DiffSystem eta;
  std::vector<DiffSystem> blocks;
};

const Reduced& reduced() {
  static const Reduced r = [] {
    TowerPtr tower = canonical_tower();
    ReductionTrace trace =
        run_canonical_chain(ReferenceData::builtin().system("nve", standard_context(tower, "t")));
    DiffSystem eta = pullback_sixth_root(trace.final_system());
    auto blocks = block_split(eta, {{0, 1}, {2, 3}});
    return Reduced{tower, trace, eta, blocks};
  }();
  return r;
}

ExprContext lambda_context(const std::string& variable) {
  const Reduced& r = reduced();
  ExprContext ctx = standard_context(r.tower, variable);
  for (std::size_t k = 0; k < 4; ++k) ctx.bind("lambda" + std::to_string(k + 1), r.trace.eigenvalues[k]);
  return ctx;
}

AlgNum Q(const TowerPtr& tower, long n, long d = 1) { return AlgNum(tower, Rational(n, d)); }

PuiseuxPoly bracket(const AlgNum& A, const AlgNum& B, const AlgNum& C) {
  return PuiseuxPoly(A) + PuiseuxPoly(B, Rational(-1)) + PuiseuxPoly(C, Rational(-2));
}

ScalarODE2 whittaker_type(const std::string& v, const PuiseuxPoly& br) {
  return ScalarODE2{v, PuiseuxPoly(br.tower()), -br};
}

// Coefficient of x^(rho+n) in x^2 u'' + x (x c1) u' + (x^2 c0) u for the truncated series.
AlgNum frobenius_residual(const ScalarODE2& ode, const FrobeniusSeries& s, long n) {
  const TowerPtr tower = s.rho.tower();
  AlgNum total(tower);
  for (long k = 0; k <= n && k < static_cast<long>(s.coeffs.size()); ++k) {
    AlgNum e = s.rho + Rational(k);
    AlgNum term(tower);
    if (k == n) term += e * (e - Rational(1));
    term += e * ode.c1.coefficient(Rational(n - k - 1)) + ode.c0.coefficient(Rational(n - k - 2));
    total += term * s.coeffs[static_cast<std::size_t>(k)];
  }
  return total;
}

}  // namespace

TEST_CASE("scalar elimination of u'' = 0 and of a coupled system") {
  TowerPtr tower = canonical_tower();
  PuiseuxPoly zero(tower);
  PuiseuxPoly one(Q(tower, 1));
  DiffSystem flat{"x", PuiseuxMatrix{{zero, one}, {zero, zero}}, SingularPoint::Zero};
  ScalarODE2 s = system_to_scalar(flat);
  CHECK(s.c1.is_zero());
  CHECK(s.c0.is_zero());

  DiffSystem none{"x", PuiseuxMatrix{{one, zero}, {one, one}}, SingularPoint::Zero};
  CHECK_THROWS_AS(system_to_scalar(none), InputError);
  DiffSystem two_terms{"x", PuiseuxMatrix{{zero, one + PuiseuxPoly(Q(tower, 1), Rational(1))}, {zero, zero}},
                       SingularPoint::Zero};
  CHECK_THROWS_AS(system_to_scalar(two_terms), InputError);
}

TEST_CASE("sixth-root pullback reproduces the eta system") {
  const Reduced& r = reduced();
  DiffSystem ref = ReferenceData::builtin().system("eta_system", lambda_context("eta"));
  CHECK(r.eta == ref);
  REQUIRE(r.blocks.size() == 2);
  try {
    block_split(r.trace.stages.at(4).after, {{0, 1}, {2, 3}});
    FAIL("expected a block_split failure");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("(4,1)") != std::string::npos);
  }
}

TEST_CASE("scalar forms of both blocks match the reference bracket") {
  const Reduced& r = reduced();
  const auto& ev = r.trace.eigenvalues;
  std::vector<std::pair<std::size_t, std::size_t>> pairs = {{0, 1}, {2, 3}};
  for (std::size_t b = 0; b < 2; ++b) {
    ScalarODE2 ode = system_to_scalar(r.blocks[b]);
    ExprContext ctx = lambda_context("eta");
    ctx.bind("li", ev[pairs[b].first]).bind("lj", ev[pairs[b].second]);
    PuiseuxPoly expected = ReferenceData::builtin().bracket("scalar_bracket", ctx);
    CHECK(ode.c1.is_zero());
    CHECK(-ode.c0 == expected);
  }
}

TEST_CASE("indicial exponents, Frobenius series and the apparent singularity") {
  const Reduced& r = reduced();
  auto expected = ReferenceData::builtin().values("indicial_exponents", lambda_context("eta"));
  std::vector<std::pair<AlgNum, AlgNum>> exps;
  std::vector<FrobeniusSeries> series;
  for (const auto& block : r.blocks) {
    ScalarODE2 ode = system_to_scalar(block);
    IndicialData id = indicial_exponents(ode);
    CHECK(id.rho1 == expected[0]);
    CHECK(id.rho2 == expected[1]);
    CHECK(id.fuchs_relation);
    exps.emplace_back(id.rho1, id.rho2);
    for (const AlgNum& rho : {id.rho1, id.rho2}) {
      FrobeniusSeries s = frobenius_series(ode, rho, 8);
      CHECK(s.resonance_free);
      CHECK(s.coeffs.size() == 9);
      for (long n = 0; n <= 8; ++n) CHECK(frobenius_residual(ode, s, n).is_zero());
      series.push_back(std::move(s));
    }
  }
  ApparentCertificate cert = certify_apparent(exps, 6, series);
  CHECK(cert.certified());
  auto j1 = ReferenceData::builtin().values("J1", lambda_context("eta"));
  REQUIRE(cert.J1.size() == j1.size());
  for (std::size_t k = 0; k < j1.size(); ++k) CHECK(AlgNum(r.tower, cert.J1[k]) == j1[k]);
  CHECK(cert.frobenius_order == 8);

  TowerPtr t = r.tower;
  ApparentCertificate integral = certify_apparent({{Q(t, 1), Q(t, 0)}}, 6);
  CHECK_FALSE(integral.certified());
  CHECK_FALSE(integral.non_integer_difference);
  ApparentCertificate five = certify_apparent({{Q(t, 2, 3), Q(t, 1, 3)}}, 5);
  CHECK_FALSE(five.certified());
  CHECK_FALSE(five.single_valued);
  CHECK_FALSE(five.failures.empty());

  // An irregular point is rejected.
  ScalarODE2 irregular{"x", PuiseuxPoly(t), PuiseuxPoly(Q(t, 1), Rational(-3))};
  CHECK_THROWS_AS(indicial_exponents(irregular), InputError);
}

TEST_CASE("Whittaker parameters of the two blocks") {
  const Reduced& r = reduced();
  auto expected = ReferenceData::builtin().values("whittaker_12", lambda_context("eta"));
  AlgNum beta = parse_constant("beta", standard_context(r.tower, "x"));
  AlgNum beta_plus = parse_constant("beta_plus", standard_context(r.tower, "x"));
  AlgNum i = parse_constant("i", standard_context(r.tower, "x"));
  std::vector<AlgNum> scales = {-(i * Rational(6)) / beta, AlgNum(r.tower, Rational(6)) / beta_plus};
  for (std::size_t b = 0; b < 2; ++b) {
    WhittakerParams w = normalize_whittaker(system_to_scalar(r.blocks[b]));
    CHECK(w.kappa == expected[0]);
    CHECK(w.mu == expected[1]);
    CHECK(w.scale == scales[b]);
    CHECK(w.original_bracket() == bracket(w.A, w.B, w.C));
    BlockVerdict v = classify_block(w, "b");
    CHECK(v.stokes.both_nontrivial());
    CHECK(v.component == Component::SL2);
  }
}

TEST_CASE("Whittaker normalization of the cross bracket") {
  TowerPtr tower = canonical_tower();
  const auto& ref = ReferenceData::builtin();
  ExprContext ctx = standard_context(tower, "zeta");
  PuiseuxPoly br = ref.bracket("cross_scaled_bracket", ctx);
  WhittakerParams w = normalize_whittaker(whittaker_type("zeta", br), "omega");
  CHECK(w.scale * w.scale == ref.values("cross_scale_squared", ctx)[0]);
  CHECK(w.whittaker_bracket() == ref.bracket("cross_whittaker_bracket", ctx.with_variable("omega")));
  CHECK(w.kappa == -parse_constant("i", ctx) / Rational(2));
  CHECK(w.scale == (AlgNum(tower, Rational(3)) - parse_constant("sqrt5", ctx)) / Rational(2));
  CHECK(w.original_bracket() == br);
  CHECK(stokes_triviality(w.kappa, w.mu).both_nontrivial());
}

TEST_CASE("Whittaker normalization round trip on random rational data") {
  TowerPtr tower = canonical_tower();
  std::mt19937 rng(11);
  std::uniform_int_distribution<long> num(-20, 20);
  std::uniform_int_distribution<long> den(1, 9);
  auto rq = [&] {
    Rational q(num(rng), den(rng));
    q.canonicalize();
    return q;
  };
  for (int k = 0; k < 200; ++k) {
    Rational s = rq();
    if (sgn(s) == 0) continue;
    Rational kappa = rq();
    Rational mu = rq();
    AlgNum A(tower, 1 / (4 * s * s));
    AlgNum B(tower, Rational(-kappa / s));
    AlgNum C(tower, (4 * mu * mu - 1) / 4);
    PuiseuxPoly br = bracket(A, B, C);
    WhittakerParams w = normalize_whittaker(whittaker_type("x", br));
    CHECK(w.original_bracket() == br);
    CHECK(w.scale.approx().real() > 0);
    CHECK(w.scale * w.scale == AlgNum(tower, s * s));
    CHECK((w.kappa == AlgNum(tower, kappa) || w.kappa == AlgNum(tower, Rational(-kappa))));
    CHECK((w.mu == AlgNum(tower, mu) || w.mu == AlgNum(tower, Rational(-mu))));
  }
  CHECK_THROWS_AS(normalize_whittaker(whittaker_type("x", bracket(Q(tower, 0), Q(tower, 1), Q(tower, 1)))),
                  InputError);
  ScalarODE2 damped{"x", PuiseuxPoly(Q(tower, 1)), PuiseuxPoly(Q(tower, 1))};
  CHECK_THROWS_AS(normalize_whittaker(damped), InputError);
  // sqrt(1/(4 * 3)) is not in the tower.
  CHECK_THROWS_AS(normalize_whittaker(whittaker_type("x", bracket(Q(tower, 3), Q(tower, 0), Q(tower, 0)))),
                  std::domain_error);
}

TEST_CASE("Stokes triviality rule") {
  TowerPtr t = canonical_tower();
  StokesFlags f = stokes_triviality(Q(t, 2, 3), Q(t, 1, 6));
  CHECK(f.mu1_trivial);
  CHECK_FALSE(f.mu2_trivial);
  CHECK_FALSE(stokes_triviality(Q(t, 2, 3), Q(t, 1, 6), NaturalConvention::WithoutZero).mu1_trivial);
  CHECK(stokes_triviality(Q(t, -2, 3), Q(t, 1, 6)).mu2_trivial);
  CHECK(stokes_triviality(Q(t, 1, 2), Q(t, 1, 6)).both_nontrivial());
  CHECK(stokes_triviality(Q(t, 3), Q(t, 1, 2)).mu1_trivial);
  AlgNum i = AlgNum::generator(t, "i");
  CHECK(stokes_triviality(i / Rational(2), Q(t, 1, 6)).both_nontrivial());

  // Branch choices: the flags ignore the sign of mu and swap under kappa -> -kappa.
  std::mt19937 rng(5);
  std::uniform_int_distribution<long> num(-24, 24);
  std::uniform_int_distribution<long> den(1, 6);
  for (int k = 0; k < 200; ++k) {
    Rational kq(num(rng), den(rng));
    Rational mq(num(rng), den(rng));
    kq.canonicalize();
    mq.canonicalize();
    AlgNum kappa(t, kq);
    AlgNum mu(t, mq);
    for (auto conv : {NaturalConvention::WithZero, NaturalConvention::WithoutZero}) {
      StokesFlags a = stokes_triviality(kappa, mu, conv);
      StokesFlags b = stokes_triviality(kappa, -mu, conv);
      StokesFlags c = stokes_triviality(-kappa, mu, conv);
      CHECK(a.mu1_trivial == b.mu1_trivial);
      CHECK(a.mu2_trivial == b.mu2_trivial);
      CHECK(a.mu1_trivial == c.mu2_trivial);
      CHECK(a.mu2_trivial == c.mu1_trivial);
    }
  }
}

TEST_CASE("natural-number convention does not change the block verdicts") {
  const Reduced& r = reduced();
  for (const auto& block : r.blocks) {
    WhittakerParams w = normalize_whittaker(system_to_scalar(block));
    CHECK(classify_block(w, "b", NaturalConvention::WithZero).component ==
          classify_block(w, "b", NaturalConvention::WithoutZero).component);
  }
}

TEST_CASE("aggregate verdict") {
  const Reduced& r = reduced();
  std::vector<BlockVerdict> blocks;
  std::vector<std::pair<AlgNum, AlgNum>> exps;
  for (std::size_t b = 0; b < 2; ++b) {
    ScalarODE2 ode = system_to_scalar(r.blocks[b]);
    blocks.push_back(classify_block(normalize_whittaker(ode), b == 0 ? "12" : "34"));
    IndicialData id = indicial_exponents(ode);
    exps.emplace_back(id.rho1, id.rho2);
  }
  ApparentCertificate apparent = certify_apparent(exps, 6);
  GaloisVerdict v = morales_ramis_verdict(blocks, apparent);
  CHECK(v.aggregate == Aggregate::NotIntegrable);
  CHECK(v.identity_component == "SL2 x SL2");
  CHECK(v.certificate.size() == 8);
  CHECK(v.certificate.back().anchor == "morales-ramis");

  std::vector<BlockVerdict> weak = blocks;
  weak[1].whittaker.kappa = AlgNum(r.tower, Rational(2, 3));
  weak[1] = classify_block(weak[1].whittaker, "34");
  CHECK(weak[1].component == Component::Undetermined);
  GaloisVerdict w = morales_ramis_verdict(weak, apparent);
  CHECK(w.aggregate == Aggregate::Inconclusive);
  CHECK(w.identity_component == "undetermined");

  GaloisVerdict one = morales_ramis_verdict({blocks[0]}, apparent);
  CHECK(one.aggregate == Aggregate::Inconclusive);
  ApparentCertificate bad = certify_apparent(exps, 5);
  CHECK(morales_ramis_verdict(blocks, bad).aggregate == Aggregate::Inconclusive);
}
