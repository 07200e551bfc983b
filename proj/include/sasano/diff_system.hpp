#pragma once

// First-order linear systems X' = M(x) X with Laurent-Puiseux coefficients,
// and the exact transformations used to reduce them.

#include "sasano/alg_field.hpp"
#include "sasano/matrix.hpp"
#include "sasano/puiseux.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sasano {

using AlgMatrix = Matrix<AlgNum>;
using PuiseuxMatrix = Matrix<PuiseuxPoly>;

enum class SingularPoint { Zero, Infinity };

struct DiffSystem {
  std::string variable;
  PuiseuxMatrix M;
  SingularPoint point = SingularPoint::Infinity;

  std::size_t dim() const { return M.rows(); }
  TowerPtr tower() const;
  // Q in  x^{-r} X' = Q X, i.e. x^{-r} M.
  PuiseuxMatrix presentation(const Rational& r) const;
  static DiffSystem from_presentation(std::string variable, const PuiseuxMatrix& Q, const Rational& r,
                                      SingularPoint point = SingularPoint::Infinity);

  friend bool operator==(const DiffSystem& a, const DiffSystem& b) {
    return a.variable == b.variable && a.M == b.M;
  }
};

// x = root^root_power * y^power, expressed in the new variable y.
struct Substitution {
  AlgNum root;
  Rational root_power;
  Rational power;
  std::string new_variable;

  AlgNum scale() const;
  // The substitution going back: y = root^(-root_power/power) * x^(1/power).
  Substitution inverse(const std::string& old_variable) const;
};

enum class StepKind { Constant, Shear, VariableChange };

struct StepSpec {
  StepKind kind = StepKind::Constant;
  std::string label;
  std::optional<AlgMatrix> T;  // Constant
  Rational g;                  // Shear
  std::optional<Substitution> sub;  // VariableChange
};

struct GaugeStep {
  StepSpec spec;
  std::optional<AlgMatrix> T_inverse;  // verified T * T_inverse == I
  DiffSystem before;
  DiffSystem after;
};

AlgMatrix identity_matrix(const TowerPtr& tower, std::size_t n);
std::optional<AlgMatrix> matrix_inverse(const AlgMatrix& T);
AlgMatrix constant_matrix(const PuiseuxMatrix& M);  // throws unless every entry is constant
PuiseuxMatrix as_puiseux(const AlgMatrix& T);

DiffSystem gauge_constant(const DiffSystem& sys, const AlgMatrix& T);
DiffSystem gauge_shear(const DiffSystem& sys, const Rational& g);
DiffSystem change_variable_power(const DiffSystem& sys, const Substitution& sub);
GaugeStep apply_step(const StepSpec& spec, const DiffSystem& sys);
// Runs the inverse of a recorded step on its output.
DiffSystem undo_step(const GaugeStep& step, const DiffSystem& sys);

struct LeadingTerm {
  Rational rank;
  AlgMatrix L;
};
LeadingTerm leading_matrix(const DiffSystem& sys);

// Monic characteristic polynomial det(lambda I - L), coefficients from degree 0 up.
std::vector<AlgNum> char_poly(const AlgMatrix& L);
AlgNum evaluate_poly(const std::vector<AlgNum>& coeffs, const AlgNum& x);

// Columns are eigenvectors for `roots`, in order. Default normalization puts
// 1 in the first component; `first_row` prescribes it instead.
AlgMatrix eigen_decompose_distinct(const AlgMatrix& L, const std::vector<AlgNum>& roots,
                                   const std::optional<std::vector<AlgNum>>& first_row = std::nullopt);

// Roots of lambda^4 + p lambda^2 + q ordered as (-r1, r1, -r2, r2), r_k the
// principal square root of the k-th value of lambda^2 by increasing real part.
std::vector<AlgNum> biquadratic_roots(const AlgNum& p, const AlgNum& q);

std::vector<DiffSystem> block_split(const DiffSystem& sys, const std::vector<std::vector<std::size_t>>& partition);

}  // namespace sasano
