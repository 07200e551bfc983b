#pragma once

// Second-order scalar equations from the 2x2 blocks, the regular singular
// point at 0, Whittaker normalization, Stokes triviality and the resulting
// verdict on the identity component of the differential Galois group.

#include "sasano/diff_system.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sasano {

// u'' + c1 u' + c0 u = 0 in `variable`.
struct ScalarODE2 {
  std::string variable;
  PuiseuxPoly c1;
  PuiseuxPoly c0;
};

// Eliminates the second component; needs a single-term (1,2) entry.
ScalarODE2 system_to_scalar(const DiffSystem& block);

// x = eta^(1/6) applied to the final reduced system.
DiffSystem pullback_sixth_root(const DiffSystem& sys, const std::string& new_variable = "eta");

struct IndicialData {
  AlgNum a;  // limit of x c1
  AlgNum b;  // limit of x^2 c0
  AlgNum rho1, rho2;
  bool fuchs_relation = false;  // rho1 + rho2 = 1 - a
};

// Exponents at the origin, larger real part first.
IndicialData indicial_exponents(const ScalarODE2& ode);

struct FrobeniusSeries {
  AlgNum rho;
  std::vector<AlgNum> coeffs;  // c_0 = 1, ..., c_order
  bool resonance_free = false;
};

FrobeniusSeries frobenius_series(const ScalarODE2& ode, const AlgNum& rho, int order);

struct ApparentCertificate {
  int pullback_order = 0;
  bool non_integer_difference = false;
  bool single_valued = false;
  std::vector<Rational> J1;
  bool frobenius_checked = false;
  bool frobenius_ok = false;
  int frobenius_order = 0;
  std::vector<std::string> failures;

  bool certified() const {
    return non_integer_difference && single_valued && (!frobenius_checked || frobenius_ok);
  }
};

ApparentCertificate certify_apparent(const std::vector<std::pair<AlgNum, AlgNum>>& exponents, int pullback_order,
                                     const std::vector<FrobeniusSeries>& series = {});

struct WhittakerParams {
  AlgNum kappa;
  AlgNum mu;
  AlgNum scale;  // x = scale * zeta
  AlgNum A, B, C;  // u'' = (A + B/x + C/x^2) u before scaling
  std::string variable;
  std::string new_variable;

  // 1/4 - kappa/zeta + (4 mu^2 - 1)/(4 zeta^2)
  PuiseuxPoly whittaker_bracket() const;
  // A + B/x + C/x^2 recovered from (kappa, mu, scale).
  PuiseuxPoly original_bracket() const;
};

// For u'' = (A + B/x + C/x^2) u. InputError if A = 0 or the form differs;
// std::domain_error if a needed square root is missing from the tower.
WhittakerParams normalize_whittaker(const ScalarODE2& ode, const std::string& new_variable = "zeta");

enum class NaturalConvention { WithZero, WithoutZero };

struct StokesFlags {
  bool mu1_trivial = false;
  bool mu2_trivial = false;
  bool both_nontrivial() const { return !mu1_trivial && !mu2_trivial; }
};

// v in 1/2 + N, decided on the exact rational value of v.
bool in_half_plus_naturals(const AlgNum& v, NaturalConvention conv);
StokesFlags stokes_triviality(const AlgNum& kappa, const AlgNum& mu,
                              NaturalConvention conv = NaturalConvention::WithZero);

enum class Component { SL2, Undetermined };
const char* component_name(Component c);

struct BlockVerdict {
  std::string label;
  WhittakerParams whittaker;
  StokesFlags stokes;
  Component component = Component::Undetermined;
};

BlockVerdict classify_block(const WhittakerParams& p, std::string label = "",
                            NaturalConvention conv = NaturalConvention::WithZero);

struct CertificateStep {
  std::string claim;
  std::string anchor;
  std::map<std::string, std::string> values;
};

enum class Aggregate { NotIntegrable, Inconclusive };
const char* aggregate_name(Aggregate a);

struct GaloisVerdict {
  std::vector<Component> components;
  std::string identity_component;  // "SL2 x SL2" or "undetermined"
  Aggregate aggregate = Aggregate::Inconclusive;
  std::vector<CertificateStep> certificate;
};

GaloisVerdict morales_ramis_verdict(const std::vector<BlockVerdict>& blocks, const ApparentCertificate& apparent);

}  // namespace sasano
