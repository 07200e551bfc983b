// One PASS/FAIL line per acceptance criterion; exit status 0 iff all pass.

#include "sasano/galois_classifier.hpp"
#include "sasano/reduction_pipeline.hpp"
#include "sasano/sasano_model.hpp"
#include "sasano/weyl_orbit.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace sasano;

namespace {

struct Outcome {
  bool ok = true;
  std::vector<std::string> notes;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back(what);
    }
  }
};

const ReferenceData& ref() { return ReferenceData::builtin(); }

DiffSystem seed_nve(const TowerPtr& tower) {
  HamiltonianSystem sys = build_extended_system(seed_params());
  return extract_nve(variational_matrix(sys, seed_solution()), tower);
}

ExprContext lambda_context(const TowerPtr& tower, const std::vector<AlgNum>& ev, const std::string& variable) {
  ExprContext ctx = standard_context(tower, variable);
  for (std::size_t k = 0; k < ev.size(); ++k) ctx.bind("lambda" + std::to_string(k + 1), ev[k]);
  return ctx;
}

// det(v I - L) by cofactor expansion.
AlgNum det_cofactor(const AlgMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 1) return m(0, 0);
  AlgNum total(m(0, 0).tower());
  for (std::size_t j = 0; j < n; ++j) {
    AlgMatrix minor(n - 1, n - 1, AlgNum(m(0, 0).tower()));
    for (std::size_t r = 1; r < n; ++r) {
      for (std::size_t c = 0, cc = 0; c < n; ++c) {
        if (c != j) minor(r - 1, cc++) = m(r, c);
      }
    }
    AlgNum term = m(0, j) * det_cofactor(minor);
    total = j % 2 ? total - term : total + term;
  }
  return total;
}

struct Pipeline {
  TowerPtr tower;
  ReductionTrace trace;
  std::vector<DiffSystem> blocks;
};

Pipeline reduce() {
  Pipeline p;
  p.tower = canonical_tower();
  p.trace = run_canonical_chain(seed_nve(p.tower));
  p.blocks = block_split(pullback_sixth_root(p.trace.final_system()), {{0, 1}, {2, 3}});
  return p;
}

Outcome criterion_nve() {
  Outcome o;
  TowerPtr tower = canonical_tower();
  DiffSystem nve = seed_nve(tower);
  DiffSystem expected = ref().system("nve", standard_context(tower, "t"));
  auto bad = mismatched_entries(expected.M, nve.M);
  o.require(nve.dim() == 4, "NVE is not 4x4");
  o.require(bad.empty(), std::to_string(bad.size()) + " of 16 entries differ");
  return o;
}

Outcome criterion_reduction() {
  Outcome o;
  TowerPtr tower = canonical_tower();
  ReductionTrace trace = run_canonical_chain(seed_nve(tower));
  for (const auto& c : trace.checks) o.require(c.matched, c.stage + " vs " + c.reference);
  for (const char* name : {"after_T1", "after_shear_quarter", "after_substitution", "after_T2", "after_shear_one",
                           "block_diagonal"}) {
    bool seen = false;
    for (const auto& c : trace.checks) seen = seen || (c.reference == name && c.matched);
    o.require(seen, std::string("no matched check against ") + name);
  }
  // B0, B1 are the coefficients of the printed presentation after T1.
  ExprContext ctx = standard_context(tower, "t");
  PuiseuxMatrix Q = trace.stages.at(0).after.presentation(Rational(1));
  AlgMatrix B0 = ref().constant("B0", ctx);
  AlgMatrix B1 = ref().constant("B1", ctx);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      o.require(Q(i, j) == PuiseuxPoly(B0(i, j)) + PuiseuxPoly(B1(i, j), Rational(-1)),
                "after T1 entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") != B0 + B1/t");
    }
  }
  // lambda^4 - 5 lambda^2 - 5, coefficients from degree 0.
  const auto& cp = trace.leading_char_poly;
  std::vector<AlgNum> expected_cp = {AlgNum(tower, -5), AlgNum(tower), AlgNum(tower, -5), AlgNum(tower),
                                     AlgNum(tower, 1)};
  o.require(cp == expected_cp, "char_poly(P2(inf)) is not lambda^4 - 5 lambda^2 - 5");
  for (long v : {-2, -1, 0, 1, 2, 3}) {
    AlgMatrix m(4, 4, AlgNum(tower));
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) m(i, j) = -trace.leading(i, j);
      m(i, i) += AlgNum(tower, Rational(v));
    }
    o.require(det_cofactor(m) == evaluate_poly(cp, AlgNum(tower, Rational(v))),
              "cofactor oracle disagrees at lambda = " + std::to_string(v));
  }
  auto roots = ref().values("eigenvalues", standard_context(tower, "x"));
  o.require(trace.eigenvalues == roots, "eigenvalues differ from the reference roots");
  return o;
}

Outcome criterion_apparent() {
  Outcome o;
  Pipeline p = reduce();
  std::vector<std::pair<AlgNum, AlgNum>> exps;
  std::vector<FrobeniusSeries> series;
  for (const auto& block : p.blocks) {
    ScalarODE2 ode = system_to_scalar(block);
    IndicialData id = indicial_exponents(ode);
    o.require(id.rho1 == AlgNum(p.tower, Rational(2, 3)) && id.rho2 == AlgNum(p.tower, Rational(1, 3)),
              "exponents are not {2/3, 1/3}");
    exps.emplace_back(id.rho1, id.rho2);
    for (const AlgNum& rho : {id.rho1, id.rho2}) {
      series.push_back(frobenius_series(ode, rho, 10));
      o.require(series.back().resonance_free && series.back().coeffs.size() == 11, "Frobenius recursion stopped");
    }
  }
  ApparentCertificate cert = certify_apparent(exps, 6, series);
  o.require(cert.certified(), "apparent-singularity certificate failed");
  o.require(cert.J1 == std::vector<Rational>{Rational(4), Rational(2), Rational(4), Rational(2)}, "J1 != diag(4,2,4,2)");
  o.require(cert.frobenius_order == 10, "Frobenius order below 10");
  return o;
}

Outcome criterion_whittaker() {
  Outcome o;
  Pipeline p = reduce();
  const AlgNum half(p.tower, Rational(1, 2));
  const AlgNum sixth(p.tower, Rational(1, 6));
  std::vector<BlockVerdict> verdicts;
  std::vector<std::pair<AlgNum, AlgNum>> exps;
  const char* labels[] = {"12", "34"};
  for (std::size_t b = 0; b < 2; ++b) {
    ScalarODE2 ode = system_to_scalar(p.blocks[b]);
    WhittakerParams w = normalize_whittaker(ode);
    o.require(w.kappa == half && w.mu == sixth, std::string("block ") + labels[b] + " is not (1/2, 1/6)");
    verdicts.push_back(classify_block(w, labels[b]));
    o.require(verdicts.back().stokes.both_nontrivial(), std::string("block ") + labels[b] + " has a trivial multiplier");
    o.require(verdicts.back().component == Component::SL2, std::string("block ") + labels[b] + " is not SL2");
    IndicialData id = indicial_exponents(ode);
    exps.emplace_back(id.rho1, id.rho2);
  }
  ExprContext ctx = standard_context(p.tower, "zeta");
  WhittakerParams cross =
      normalize_whittaker(ScalarODE2{"zeta", PuiseuxPoly(p.tower), -ref().bracket("cross_scaled_bracket", ctx)}, "omega");
  o.require(cross.kappa == -AlgNum::generator(p.tower, "i") / Rational(2) && cross.mu == sixth,
            "cross path is not (-i/2, 1/6)");
  o.require(cross.whittaker_bracket() == ref().bracket("cross_whittaker_bracket", ctx.with_variable("omega")),
            "omega equation differs from the reference");
  o.require(stokes_triviality(cross.kappa, cross.mu).both_nontrivial(), "cross path has a trivial multiplier");
  GaloisVerdict v = morales_ramis_verdict(verdicts, certify_apparent(exps, 6));
  o.require(v.identity_component == "SL2 x SL2", "identity component is " + v.identity_component);
  o.require(v.aggregate == Aggregate::NotIntegrable, "verdict is not NotIntegrable");
  return o;
}

Outcome criterion_relations() {
  Outcome o;
  RelationReport rep = verify_group_relations(50);
  for (const auto& r : rep.relations) {
    o.require(r.params_ok, r.relation + " fails on parameters");
    o.require(r.points_checked >= 50, r.relation + " checked at " + std::to_string(r.points_checked) + " points");
    o.require(!r.witness, r.relation + " fails at a phase-space point");
  }
  o.require(rep.relations.size() == 9, "expected 9 relation words");
  return o;
}

Outcome criterion_orbit() {
  Outcome o;
  OrbitReport rep = enumerate_orbit(seed_solution(), 6);
  o.require(rep.all_normalized(), "a node violates a0 + 2 a1 + 2 a2 = 1");
  o.require(rep.all_verified(), "a node fails to verify");
  o.require(rep.all_matched(), "a node matches no congruence row");
  o.require(rep.discrepancies.empty(), "two words reach one triple with different states");
  auto seed = matsuda_check(seed_params());
  o.require(seed.row == 1 && seed.a == 0 && seed.b == 0, "seed is not on row 1 with (a, b) = (0, 0)");
  o.notes.push_back(std::to_string(rep.nodes.size()) + " nodes");
  return o;
}

Outcome criterion_numeric() {
  Outcome o;
  TowerPtr tower = canonical_tower();
  ReductionTrace trace = run_canonical_chain(seed_nve(tower));
  TraceConsistency tc = verify_trace_consistency(trace);
  o.require(tc.samples.size() == 5, "expected 5 sample points");
  double worst = 0;
  for (const auto& s : tc.samples) worst = std::max(worst, s.relative_error);
  o.require(tc.ok() && worst <= 1e-9, "recomposition error above 1e-9");

  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 7);
  auto random_element = [&] {
    std::vector<Rational> c(tower->dimension());
    for (auto& q : c) {
      q = Rational(num(rng), den(rng));
      q.canonicalize();
    }
    return AlgNum(tower, std::move(c));
  };
  int bad = 0;
  for (int k = 0; k < 1000; ++k) {
    AlgNum a = random_element();
    AlgNum b = random_element();
    BigComplex ea = numeric_embed(a, 30);
    BigComplex eb = numeric_embed(b, 30);
    auto close = [](const BigComplex& x, const BigComplex& y) {
      mpf_class scale = y.abs();
      if (scale < 1) scale = 1;
      return (x - y).abs() <= 1e-12 * scale;
    };
    if (!close(numeric_embed(a + b, 30), ea + eb) || !close(numeric_embed(a * b, 30), ea * eb)) ++bad;
  }
  o.require(bad == 0, std::to_string(bad) + " of 1000 pairs break the embedding homomorphism");
  std::ostringstream s;
  s << "max relative error " << worst;
  o.notes.push_back(s.str());
  return o;
}

Outcome criterion_conventions() {
  Outcome o;
  TowerPtr tower = canonical_tower();
  std::vector<std::pair<AlgNum, AlgNum>> cases = {
      {AlgNum(tower, Rational(1, 2)), AlgNum(tower, Rational(1, 6))},
      {-AlgNum::generator(tower, "i") / Rational(2), AlgNum(tower, Rational(1, 6))}};
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> num(-12, 12);
  std::uniform_int_distribution<int> den(1, 6);
  std::uniform_int_distribution<int> pick(0, 3);
  auto random_value = [&] {
    Rational q(num(rng), den(rng));
    q.canonicalize();
    AlgNum a(tower, q);
    // A quarter of the values leave Q, a quarter sit on 1/2 + Z.
    int kind = pick(rng);
    if (kind == 0) a += AlgNum::generator(tower, "gamma") * Rational(num(rng));
    if (kind == 1) a = AlgNum(tower, Rational(2 * num(rng) + 1, 2));
    return a;
  };
  for (int k = 0; k < 200; ++k) cases.emplace_back(random_value(), random_value());

  for (std::size_t k = 0; k < cases.size(); ++k) {
    const auto& [kappa, mu] = cases[k];
    auto verdict = [&](const AlgNum& kp, const AlgNum& m, NaturalConvention c) {
      return stokes_triviality(kp, m, c).both_nontrivial();
    };
    bool base = verdict(kappa, mu, NaturalConvention::WithZero);
    for (auto c : {NaturalConvention::WithZero, NaturalConvention::WithoutZero}) {
      bool same = verdict(-kappa, mu, c) == verdict(kappa, mu, c) && verdict(kappa, -mu, c) == verdict(kappa, mu, c);
      o.require(same, "sign flip changes the verdict for case " + std::to_string(k));
    }
    if (k < 2) {
      o.require(base == verdict(kappa, mu, NaturalConvention::WithoutZero),
                "convention changes the verdict for case " + std::to_string(k));
      o.require(base, "case " + std::to_string(k) + " is not (nontrivial, nontrivial)");
    }
  }
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "NVE fixture", 1, criterion_nve},
      {2, "reduction chain", 10, criterion_reduction},
      {3, "apparent singularity", 5, criterion_apparent},
      {4, "Whittaker classification and verdict", 5, criterion_whittaker},
      {5, "Weyl relations", 10, criterion_relations},
      {6, "orbit audit to depth 6", 60, criterion_orbit},
      {7, "numeric cross-validation", 10, criterion_numeric},
      {8, "convention robustness", 5, criterion_conventions},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.notes.push_back(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.limit_seconds) {
      o.ok = false;
      o.notes.push_back("over the " + std::to_string(static_cast<int>(c.limit_seconds)) + " s limit");
    }
    std::string detail;
    for (const auto& n : o.notes) detail += (detail.empty() ? "" : "; ") + n;
    std::printf("%s criterion %d (%s): %.3f s%s%s\n", o.ok ? "PASS" : "FAIL", c.id, c.name, secs,
                detail.empty() ? "" : " | ", detail.c_str());
    if (!o.ok) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
