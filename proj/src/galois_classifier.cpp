#include "sasano/galois_classifier.hpp"

#include "sasano/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sasano {

namespace {

std::string numeric(const AlgNum& a) { return numeric_embed(a, 30).to_string(20); }

void require_regular(const ScalarODE2& ode) {
  for (const auto& [e, c] : ode.c1.terms()) {
    if (e < -1) throw InputError("the origin is an irregular singular point (c1 has order " + to_string(e) + ")");
  }
  for (const auto& [e, c] : ode.c0.terms()) {
    if (e < -2) throw InputError("the origin is an irregular singular point (c0 has order " + to_string(e) + ")");
  }
}

void require_integral_exponents(const PuiseuxPoly& p, const char* what) {
  for (const auto& [e, c] : p.terms()) {
    if (!is_integer(e)) throw InputError(std::string(what) + " has a fractional exponent " + to_string(e));
  }
}

}  // namespace

ScalarODE2 system_to_scalar(const DiffSystem& block) {
  if (block.dim() != 2) throw InputError("scalar elimination needs a 2x2 system");
  const PuiseuxPoly& a = block.M(0, 0);
  const PuiseuxPoly& b = block.M(0, 1);
  const PuiseuxPoly& c = block.M(1, 0);
  const PuiseuxPoly& d = block.M(1, 1);
  if (b.is_zero()) throw InputError("entry (1,2) vanishes identically; the block is decoupled");
  if (!b.is_monomial()) throw InputError("entry (1,2) must be a single term, got " + b.to_string(block.variable));
  // u2 = (u1' - a u1)/b, then u1'' = a' u1 + a u1' + b' u2 + b (c u1 + d u2).
  PuiseuxPoly log_b = b.derivative() * b.monomial_inverse();
  ScalarODE2 out{block.variable, -(a + d + log_b), -(a.derivative() + b * c - a * d - a * log_b)};
  return out;
}

DiffSystem pullback_sixth_root(const DiffSystem& sys, const std::string& new_variable) {
  Substitution sub{AlgNum(sys.tower(), 1), Rational(0), Rational(1, 6), new_variable};
  return change_variable_power(sys, sub);
}

IndicialData indicial_exponents(const ScalarODE2& ode) {
  require_regular(ode);
  const TowerPtr tower = ode.c0.tower();
  IndicialData out{ode.c1.coefficient(Rational(-1)), ode.c0.coefficient(Rational(-2)), AlgNum(tower), AlgNum(tower),
                   false};
  // rho^2 + (a - 1) rho + b = 0
  AlgNum one_minus_a = AlgNum(tower, 1) - out.a;
  AlgNum root = principal_sqrt(one_minus_a * one_minus_a - out.b * Rational(4));
  out.rho1 = (one_minus_a + root) / Rational(2);
  out.rho2 = (one_minus_a - root) / Rational(2);
  out.fuchs_relation = out.rho1 + out.rho2 == one_minus_a;
  return out;
}

FrobeniusSeries frobenius_series(const ScalarODE2& ode, const AlgNum& rho, int order) {
  require_regular(ode);
  require_integral_exponents(ode.c1, "c1");
  require_integral_exponents(ode.c0, "c0");
  const TowerPtr tower = rho.tower();
  // x c1 = sum p_k x^k, x^2 c0 = sum q_k x^k.
  auto p = [&](long k) { return ode.c1.coefficient(Rational(k - 1)).lifted(tower); };
  auto q = [&](long k) { return ode.c0.coefficient(Rational(k - 2)).lifted(tower); };
  auto indicial = [&](const AlgNum& r) { return r * (r - Rational(1)) + p(0) * r + q(0); };
  FrobeniusSeries out{rho, {AlgNum(tower, 1)}, true};
  if (!indicial(rho).is_zero()) throw InputError("rho is not an indicial root");
  for (long k = 1; k <= order; ++k) {
    AlgNum f = indicial(rho + Rational(k));
    if (f.is_zero()) {
      out.resonance_free = false;
      break;
    }
    AlgNum acc(tower);
    for (long j = 1; j <= k; ++j) {
      acc += ((rho + Rational(k - j)) * p(j) + q(j)) * out.coeffs[static_cast<std::size_t>(k - j)];
    }
    out.coeffs.push_back(-acc / f);
  }
  return out;
}

ApparentCertificate certify_apparent(const std::vector<std::pair<AlgNum, AlgNum>>& exponents, int pullback_order,
                                     const std::vector<FrobeniusSeries>& series) {
  ApparentCertificate cert;
  cert.pullback_order = pullback_order;
  cert.non_integer_difference = !exponents.empty();
  cert.single_valued = !exponents.empty() && pullback_order > 0;
  for (const auto& [r1, r2] : exponents) {
    auto diff = rational_recognize(r1 - r2);
    if (diff && is_integer(*diff)) {
      cert.non_integer_difference = false;
      cert.failures.push_back("exponent difference " + to_string(*diff) + " is an integer");
    }
    for (const AlgNum* r : {&r1, &r2}) {
      auto v = rational_recognize(*r * Rational(pullback_order));
      if (!v || !is_integer(*v)) {
        cert.single_valued = false;
        cert.failures.push_back(std::to_string(pullback_order) + " * " + r->to_string() + " is not an integer");
      } else {
        cert.J1.push_back(*v);
      }
    }
  }
  if (!series.empty()) {
    cert.frobenius_checked = true;
    cert.frobenius_ok = true;
    cert.frobenius_order = static_cast<int>(series.front().coeffs.size()) - 1;
    for (const auto& s : series) {
      if (!s.resonance_free) {
        cert.frobenius_ok = false;
        cert.failures.push_back("Frobenius recursion for rho = " + s.rho.to_string() + " hits a resonance");
      }
      cert.frobenius_order = std::min(cert.frobenius_order, static_cast<int>(s.coeffs.size()) - 1);
    }
  }
  return cert;
}

PuiseuxPoly WhittakerParams::whittaker_bracket() const {
  const TowerPtr tower = kappa.tower();
  return PuiseuxPoly(AlgNum(tower, Rational(1, 4))) + PuiseuxPoly(-kappa, Rational(-1)) +
         PuiseuxPoly((mu * mu * Rational(4) - Rational(1)) / Rational(4), Rational(-2));
}

PuiseuxPoly WhittakerParams::original_bracket() const {
  const TowerPtr tower = kappa.tower();
  return PuiseuxPoly((scale * scale * Rational(4)).inverse()) + PuiseuxPoly(-kappa / scale, Rational(-1)) +
         PuiseuxPoly((mu * mu * Rational(4) - Rational(1)) / Rational(4), Rational(-2));
}

WhittakerParams normalize_whittaker(const ScalarODE2& ode, const std::string& new_variable) {
  const TowerPtr tower = ode.c0.tower();
  if (!ode.c1.is_zero()) throw InputError("Whittaker normalization needs a vanishing u' coefficient");
  for (const auto& [e, c] : ode.c0.terms()) {
    if (e != 0 && e != -1 && e != -2) {
      throw InputError("u'' coefficient has a term of order " + to_string(e) + " outside A + B/x + C/x^2");
    }
  }
  WhittakerParams w{AlgNum(tower), AlgNum(tower), AlgNum(tower),
                    -ode.c0.coefficient(Rational(0)), -ode.c0.coefficient(Rational(-1)),
                    -ode.c0.coefficient(Rational(-2)), ode.variable, new_variable};
  if (w.A.is_zero()) throw InputError("constant term A vanishes; not a Whittaker-type equation");
  const AlgNum s2 = (w.A * Rational(4)).inverse();
  // The scale is the principal 1/(2 sqrt(A)).
  const std::complex<double> principal = 1.0 / (2.0 * std::sqrt(w.A.approx()));
  if (!w.B.is_zero()) {
    // kappa^2 = B^2 s^2 is usually simpler than s^2 itself.
    auto k = try_sqrt(w.B * w.B * s2);
    if (!k) throw std::domain_error("kappa^2 = " + (w.B * w.B * s2).to_string() + " needs a tower extension");
    AlgNum s = -*k / w.B;
    if (std::abs(s.approx() - principal) > std::abs(-s.approx() - principal)) s = -s;
    w.scale = s;
  } else {
    auto s = try_sqrt(s2);
    if (!s) throw std::domain_error("1/(4A) = " + s2.to_string() + " needs a tower extension");
    w.scale = std::abs(s->approx() - principal) <= std::abs(-s->approx() - principal) ? *s : -*s;
  }
  if (w.scale * w.scale != s2) throw std::logic_error("Whittaker scale does not square to 1/(4A)");
  w.kappa = -w.B * w.scale;
  AlgNum m2 = w.C * Rational(4) + Rational(1);
  if (!try_sqrt(m2)) throw std::domain_error("4C + 1 = " + m2.to_string() + " needs a tower extension");
  w.mu = principal_sqrt(m2) / Rational(2);
  return w;
}

bool in_half_plus_naturals(const AlgNum& v, NaturalConvention conv) {
  auto r = rational_recognize(v);
  if (!r) return false;
  Rational d = *r - Rational(1, 2);
  if (!is_integer(d)) return false;
  return conv == NaturalConvention::WithZero ? sgn(d) >= 0 : sgn(d) > 0;
}

StokesFlags stokes_triviality(const AlgNum& kappa, const AlgNum& mu, NaturalConvention conv) {
  StokesFlags f;
  f.mu1_trivial = in_half_plus_naturals(kappa - mu, conv) || in_half_plus_naturals(kappa + mu, conv);
  f.mu2_trivial = in_half_plus_naturals(-kappa - mu, conv) || in_half_plus_naturals(-kappa + mu, conv);
  return f;
}

const char* component_name(Component c) { return c == Component::SL2 ? "SL2" : "undetermined"; }

const char* aggregate_name(Aggregate a) { return a == Aggregate::NotIntegrable ? "NotIntegrable" : "Inconclusive"; }

BlockVerdict classify_block(const WhittakerParams& p, std::string label, NaturalConvention conv) {
  BlockVerdict v{std::move(label), p, stokes_triviality(p.kappa, p.mu, conv), Component::Undetermined};
  if (v.stokes.both_nontrivial()) v.component = Component::SL2;
  return v;
}

GaloisVerdict morales_ramis_verdict(const std::vector<BlockVerdict>& blocks, const ApparentCertificate& apparent) {
  GaloisVerdict out;
  bool all_sl2 = blocks.size() == 2;
  for (const auto& b : blocks) {
    out.components.push_back(b.component);
    if (b.component != Component::SL2) all_sl2 = false;
    const auto& w = b.whittaker;
    out.certificate.push_back({"block " + b.label + " is equivalent to a Whittaker equation",
                               "whittaker-normal-form",
                               {{"kappa", w.kappa.to_string()},
                                {"kappa_numeric", numeric(w.kappa)},
                                {"mu", w.mu.to_string()},
                                {"mu_numeric", numeric(w.mu)},
                                {"scale", w.scale.to_string()},
                                {"scale_numeric", numeric(w.scale)}}});
    out.certificate.push_back(
        {"block " + b.label + ": kappa -+ mu and -kappa -+ mu avoid 1/2 + N",
         "stokes-criterion",
         {{"mu1", b.stokes.mu1_trivial ? "trivial" : "nontrivial"},
          {"mu2", b.stokes.mu2_trivial ? "trivial" : "nontrivial"}}});
    out.certificate.push_back({b.component == Component::SL2
                                   ? "block " + b.label +
                                         ": both unipotent Stokes groups and the exponential torus generate SL2"
                                   : "block " + b.label + ": component not determined by the Stokes rule",
                               "local-galois-group",
                               {{"component", component_name(b.component)}}});
  }
  std::ostringstream j1;
  for (std::size_t k = 0; k < apparent.J1.size(); ++k) j1 << (k ? ", " : "") << to_string(apparent.J1[k]);
  out.certificate.push_back({apparent.certified()
                                 ? "the origin is an apparent singularity after the sixth-root pullback"
                                 : "the origin could not be certified as an apparent singularity",
                             "apparent-singularity",
                             {{"J1", "diag(" + j1.str() + ")"},
                              {"pullback_order", std::to_string(apparent.pullback_order)},
                              {"frobenius_order", std::to_string(apparent.frobenius_order)}}});
  if (all_sl2 && apparent.certified()) {
    out.identity_component = "SL2 x SL2";
    out.aggregate = Aggregate::NotIntegrable;
    out.certificate.push_back({"the identity component SL2 x SL2 is not abelian, so the Hamiltonian system is not "
                               "integrable by rational first integrals",
                               "morales-ramis",
                               {{"identity_component", out.identity_component}}});
  } else {
    out.identity_component = "undetermined";
    out.certificate.push_back({"the implemented rules do not decide integrability", "morales-ramis",
                               {{"identity_component", out.identity_component}}});
  }
  return out;
}

}  // namespace sasano
