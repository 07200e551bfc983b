#pragma once

// The coupled Painleve II Hamiltonian system of type A4(2), extended to an
// autonomous system in (x, y, z, w, t, F), with exact verification of
// rational solutions and the variational equations along them.

#include "sasano/diff_system.hpp"
#include "sasano/ratfunc.hpp"
#include "sasano/rational.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace sasano {

enum class Var : std::uint8_t { x, y, z, w, t, F, a0, a1, a2 };
inline constexpr std::size_t kVarCount = 9;
inline constexpr std::size_t kPhaseDim = 6;
const char* var_name(Var v);

// Sparse polynomial over Q in the phase variables and the three parameters.
class PolyExpr {
 public:
  using Exponents = std::array<std::uint8_t, kVarCount>;
  using Terms = std::map<Exponents, Rational>;

  PolyExpr() = default;
  PolyExpr(const Rational& c);  // NOLINT(google-explicit-constructor)
  PolyExpr(long c) : PolyExpr(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  static PolyExpr var(Var v);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool depends_on(Var v) const;
  int total_degree() const;

  PolyExpr derivative(Var v) const;
  PolyExpr substitute(Var v, const Rational& value) const;
  Rational evaluate(const std::array<Rational, kVarCount>& point) const;
  RatFunc evaluate(const std::array<RatFunc, kVarCount>& point) const;
  std::string to_string() const;

  PolyExpr operator-() const;
  friend PolyExpr operator+(const PolyExpr& a, const PolyExpr& b);
  friend PolyExpr operator-(const PolyExpr& a, const PolyExpr& b);
  friend PolyExpr operator*(const PolyExpr& a, const PolyExpr& b);
  friend bool operator==(const PolyExpr& a, const PolyExpr& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const PolyExpr& a, const PolyExpr& b) { return !(a == b); }

 private:
  void add(const Exponents& e, const Rational& c);
  Terms terms_;
};

struct ParamTriple {
  Rational a0, a1, a2;

  // a0 + 2 a1 + 2 a2 = 1
  bool normalized() const { return a0 + 2 * a1 + 2 * a2 == 1; }
  std::array<Rational, 3> as_array() const { return {a0, a1, a2}; }
  std::string to_string() const;
  friend bool operator==(const ParamTriple& a, const ParamTriple& b) {
    return a.a0 == b.a0 && a.a1 == b.a1 && a.a2 == b.a2;
  }
  friend bool operator<(const ParamTriple& a, const ParamTriple& b) { return a.as_array() < b.as_array(); }
};

ParamTriple seed_params();
// "a0,a1,a2" with rational entries; throws InputError.
ParamTriple parse_params(std::string_view text);

// Polynomials in the paired coordinates; F only enters through H + F.
PolyExpr painleve2_hamiltonian(Var q, Var p, Var t, Var alpha);
PolyExpr painleve2_autonomous_hamiltonian(Var q, Var p, Var alpha);
PolyExpr sasano_hamiltonian();

struct HamiltonianSystem {
  PolyExpr hamiltonian;           // H
  PolyExpr extended_hamiltonian;  // H + F
  // Conjugate pairs (q, p) with dq/ds = dH/dp, dp/ds = -dH/dq.
  std::array<std::pair<Var, Var>, 3> pairs{{{Var::x, Var::y}, {Var::z, Var::w}, {Var::t, Var::F}}};
  // Components for x, y, z, w, t, F in that order.
  std::array<PolyExpr, kPhaseDim> field;
  std::optional<ParamTriple> params;  // nullopt: symbolic alpha0..alpha2
};

// The four equations in their usual form, written out independently of H.
std::array<PolyExpr, 4> reference_sasano_field();

// Symplectic gradient of H + F, checked against reference_sasano_field().
// With params, they must satisfy the normalization (InputError otherwise).
HamiltonianSystem build_extended_system(const std::optional<ParamTriple>& params = std::nullopt);

struct RationalSolution {
  ParamTriple params;
  std::array<RatFunc, 4> xyzw;
  // The conjugate of t; reconstructed by integration when absent.
  std::optional<RatFunc> F;
};

RationalSolution seed_solution();

struct ResidualReport {
  std::array<RatFunc, kPhaseDim> residuals;
  bool F_supplied = false;
  bool F_reconstructed = false;
  // -2x has no rational antiderivative, so the F equation, which only
  // defines F, was not checked.
  bool F_unavailable = false;

  bool verified() const;
  std::string summary() const;
};

// The solution with F filled in when it is missing but rationally integrable.
RationalSolution complete_solution(const RationalSolution& sol);

ResidualReport verify_solution(const HamiltonianSystem& sys, const RationalSolution& sol);

// Jacobian of the field along the solution (6x6, phase order x y z w t F).
// Throws VerificationError unless the solution verifies.
Matrix<RatFunc> variational_matrix(const HamiltonianSystem& sys, const RationalSolution& sol);

// The (x, y, z, w) block with delta t = 0, as X' = M(t) X over `tower`.
// Throws VerificationError if the delta t row is not identically zero and
// InputError if an entry is not a Laurent polynomial in t.
DiffSystem extract_nve(const Matrix<RatFunc>& varmat, const TowerPtr& tower);

// H + F along the solution, whose t-derivative vanishes for a solution.
RatFunc hamiltonian_along(const HamiltonianSystem& sys, const RationalSolution& sol);

nlohmann::json solution_to_json(const RationalSolution& sol);
RationalSolution solution_from_json(const nlohmann::json& j);

}  // namespace sasano
