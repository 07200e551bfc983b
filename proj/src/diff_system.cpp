#include "sasano/diff_system.hpp"

#include "sasano/errors.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace sasano {

namespace {

std::string entry_name(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

}  // namespace

TowerPtr DiffSystem::tower() const {
  if (M.rows() == 0) throw std::logic_error("empty system");
  return M(0, 0).tower();
}

PuiseuxMatrix DiffSystem::presentation(const Rational& r) const {
  return M.map([&](const PuiseuxPoly& p) { return p.shifted(Rational(-r)); });
}

DiffSystem DiffSystem::from_presentation(std::string variable, const PuiseuxMatrix& Q, const Rational& r,
                                         SingularPoint point) {
  if (!Q.square()) throw InputError("system matrix must be square");
  return DiffSystem{std::move(variable), Q.map([&](const PuiseuxPoly& p) { return p.shifted(r); }), point};
}

AlgNum Substitution::scale() const {
  if (!is_integer(root_power)) throw InputError("substitution scale needs an integral power of its root");
  return root.pow(root_power.get_num().get_si());
}

Substitution Substitution::inverse(const std::string& old_variable) const {
  if (sgn(power) == 0) throw InputError("substitution power must be nonzero");
  return Substitution{root, Rational(-root_power / power), Rational(1 / power), old_variable};
}

AlgMatrix identity_matrix(const TowerPtr& tower, std::size_t n) {
  return AlgMatrix::identity(n, AlgNum(tower), AlgNum(tower, 1));
}

std::optional<AlgMatrix> matrix_inverse(const AlgMatrix& T) {
  if (!T.square() || T.rows() == 0) throw InputError("only non-empty square matrices have inverses");
  const std::size_t n = T.rows();
  const TowerPtr tower = T(0, 0).tower();
  AlgMatrix a = T;
  AlgMatrix inv = identity_matrix(tower, n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a(piv, col).is_zero()) ++piv;
    if (piv == n) return std::nullopt;
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(piv, j), a(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    }
    AlgNum p = a(col, col).inverse();
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) *= p;
      inv(col, j) *= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a(i, col).is_zero()) continue;
      AlgNum f = a(i, col);
      for (std::size_t j = 0; j < n; ++j) {
        if (!a(col, j).is_zero()) a(i, j) -= f * a(col, j);
        if (!inv(col, j).is_zero()) inv(i, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

AlgMatrix constant_matrix(const PuiseuxMatrix& M) {
  return M.map([](const PuiseuxPoly& p) {
    if (!p.is_constant()) throw InputError("matrix entry depends on the variable");
    return p.coefficient(Rational(0));
  });
}

PuiseuxMatrix as_puiseux(const AlgMatrix& T) {
  return T.map([](const AlgNum& a) { return PuiseuxPoly(a); });
}

DiffSystem gauge_constant(const DiffSystem& sys, const AlgMatrix& T) {
  if (T.rows() != sys.dim() || !T.square()) throw InputError("gauge matrix size does not match the system");
  auto inv = matrix_inverse(T);
  if (!inv) throw InputError("gauge matrix is singular");
  return DiffSystem{sys.variable, as_puiseux(*inv) * sys.M * as_puiseux(T), sys.point};
}

DiffSystem gauge_shear(const DiffSystem& sys, const Rational& g) {
  DiffSystem out = sys;
  const std::size_t n = sys.dim();
  const TowerPtr tower = sys.tower();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out.M(i, j) = sys.M(i, j).shifted(Rational(g * static_cast<long>(i) - g * static_cast<long>(j)));
    }
    out.M(i, i) += PuiseuxPoly(AlgNum(tower, Rational(g * static_cast<long>(i))), Rational(-1));
  }
  return out;
}

DiffSystem change_variable_power(const DiffSystem& sys, const Substitution& sub) {
  if (sgn(sub.power) == 0) throw InputError("substitution power must be nonzero");
  const TowerPtr tower = sys.tower();
  AlgNum root = sub.root.lifted(tower);
  auto scaled_power = [&](const Rational& e) {
    Rational k = sub.root_power * e;
    if (!is_integer(k)) {
      std::ostringstream os;
      os << "inconsistent ramification: " << to_string(e) << " power of the scale is not an integral power of "
         << root.to_string();
      throw InputError(os.str());
    }
    return root.pow(k.get_num().get_si());
  };
  // dx/dy = power * scale * y^(power - 1)
  PuiseuxPoly jac(scaled_power(Rational(1)) * sub.power, Rational(sub.power - 1));
  DiffSystem out{sub.new_variable, sys.M, sys.point};
  if (sgn(sub.power) < 0) {
    out.point = sys.point == SingularPoint::Infinity ? SingularPoint::Zero : SingularPoint::Infinity;
  }
  for (std::size_t i = 0; i < sys.dim(); ++i) {
    for (std::size_t j = 0; j < sys.dim(); ++j) {
      PuiseuxPoly p(tower);
      for (const auto& [e, c] : sys.M(i, j).terms()) p += PuiseuxPoly(c * scaled_power(e), Rational(sub.power * e));
      out.M(i, j) = p * jac;
    }
  }
  return out;
}

GaugeStep apply_step(const StepSpec& spec, const DiffSystem& sys) {
  GaugeStep step{spec, std::nullopt, sys, sys};
  switch (spec.kind) {
    case StepKind::Constant: {
      if (!spec.T) throw InputError("constant step '" + spec.label + "' has no matrix");
      auto inv = matrix_inverse(*spec.T);
      if (!inv) throw InputError("constant step '" + spec.label + "' has a singular matrix");
      if (*spec.T * *inv != identity_matrix(sys.tower(), sys.dim())) {
        throw VerificationError("inverse of step '" + spec.label + "' fails T * T^-1 = I");
      }
      step.T_inverse = inv;
      step.after = DiffSystem{sys.variable, as_puiseux(*inv) * sys.M * as_puiseux(*spec.T), sys.point};
      break;
    }
    case StepKind::Shear:
      step.after = gauge_shear(sys, spec.g);
      break;
    case StepKind::VariableChange:
      if (!spec.sub) throw InputError("variable change '" + spec.label + "' has no substitution");
      step.after = change_variable_power(sys, *spec.sub);
      break;
  }
  return step;
}

DiffSystem undo_step(const GaugeStep& step, const DiffSystem& sys) {
  switch (step.spec.kind) {
    case StepKind::Constant:
      return gauge_constant(sys, *step.T_inverse);
    case StepKind::Shear:
      return gauge_shear(sys, Rational(-step.spec.g));
    case StepKind::VariableChange: {
      DiffSystem back = change_variable_power(sys, step.spec.sub->inverse(step.before.variable));
      back.point = step.before.point;
      return back;
    }
  }
  throw std::logic_error("unknown step kind");
}

LeadingTerm leading_matrix(const DiffSystem& sys) {
  std::optional<Rational> r;
  for (const auto& p : sys.M.data()) {
    if (p.is_zero()) continue;
    Rational e = sys.point == SingularPoint::Infinity ? p.max_exponent() : p.min_exponent();
    if (!r) r = e;
    else if (sys.point == SingularPoint::Infinity ? e > *r : e < *r) r = e;
  }
  if (!r) throw InputError("zero system has no leading matrix");
  return LeadingTerm{*r, sys.M.map([&](const PuiseuxPoly& p) { return p.coefficient(*r); })};
}

std::vector<AlgNum> char_poly(const AlgMatrix& L) {
  // Faddeev-LeVerrier.
  if (!L.square() || L.rows() == 0) throw InputError("characteristic polynomial needs a square matrix");
  const std::size_t n = L.rows();
  const TowerPtr tower = L(0, 0).tower();
  std::vector<AlgNum> c(n + 1, AlgNum(tower));
  c[n] = AlgNum(tower, 1);
  AlgMatrix Mk(n, n, AlgNum(tower));
  const AlgMatrix I = identity_matrix(tower, n);
  for (std::size_t k = 1; k <= n; ++k) {
    AlgMatrix scaled = I.map([&](const AlgNum& a) { return a * c[n - k + 1]; });
    Mk = L * Mk + scaled;
    AlgMatrix LM = L * Mk;
    AlgNum tr(tower);
    for (std::size_t i = 0; i < n; ++i) tr += LM(i, i);
    c[n - k] = -tr / Rational(static_cast<long>(k));
  }
  return c;
}

AlgNum evaluate_poly(const std::vector<AlgNum>& coeffs, const AlgNum& x) {
  AlgNum acc(x.tower());
  for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * x + coeffs[k].lifted(x.tower());
  return acc;
}

AlgMatrix eigen_decompose_distinct(const AlgMatrix& L, const std::vector<AlgNum>& roots,
                                   const std::optional<std::vector<AlgNum>>& first_row) {
  const std::size_t n = L.rows();
  if (!L.square() || roots.size() != n) throw InputError("need one root per row of a square matrix");
  if (first_row && first_row->size() != n) throw InputError("first-row normalization has the wrong length");
  const TowerPtr tower = L(0, 0).tower();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (roots[a] == roots[b]) throw InputError("repeated root " + roots[a].to_string());
    }
  }
  const auto cp = char_poly(L);
  AlgMatrix T(n, n, AlgNum(tower));
  for (std::size_t col = 0; col < n; ++col) {
    const AlgNum& lambda = roots[col];
    if (!evaluate_poly(cp, lambda).is_zero()) {
      throw InputError("root " + lambda.to_string() + " is not an eigenvalue");
    }
    AlgMatrix a = L;
    for (std::size_t i = 0; i < n; ++i) a(i, i) -= lambda;
    // Reduced row echelon form.
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t c = 0; c < n && row < n; ++c) {
      std::size_t piv = row;
      while (piv < n && a(piv, c).is_zero()) ++piv;
      if (piv == n) continue;
      for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(row, j));
      AlgNum inv = a(row, c).inverse();
      for (std::size_t j = 0; j < n; ++j) a(row, j) *= inv;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == row || a(i, c).is_zero()) continue;
        AlgNum f = a(i, c);
        for (std::size_t j = 0; j < n; ++j) a(i, j) -= f * a(row, j);
      }
      pivots.push_back(c);
      ++row;
    }
    if (pivots.size() != n - 1) throw InputError("eigenspace of " + lambda.to_string() + " is not one-dimensional");
    std::size_t free_col = 0;
    while (std::find(pivots.begin(), pivots.end(), free_col) != pivots.end()) ++free_col;
    std::vector<AlgNum> v(n, AlgNum(tower));
    v[free_col] = AlgNum(tower, 1);
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a(r, free_col);
    AlgNum factor(tower, 1);
    if (first_row) {
      if (v[0].is_zero()) throw InputError("eigenvector has zero first component; cannot normalize");
      factor = (*first_row)[col] / v[0];
    } else {
      std::size_t k = 0;
      while (v[k].is_zero()) ++k;
      factor = v[k].inverse();
    }
    for (std::size_t i = 0; i < n; ++i) T(i, col) = v[i] * factor;
  }
  auto inv = matrix_inverse(T);
  if (!inv) throw VerificationError("eigenvector matrix is singular");
  AlgMatrix D = *inv * L * T;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (D(i, j) != (i == j ? roots[i] : AlgNum(tower))) {
        throw VerificationError("T^-1 L T is not diagonal at entry " + entry_name(i, j));
      }
    }
  }
  return T;
}

std::vector<AlgNum> biquadratic_roots(const AlgNum& p, const AlgNum& q) {
  AlgNum disc = p * p - q * Rational(4);
  AlgNum sd = principal_sqrt(disc);
  AlgNum u1 = (-p - sd) / Rational(2);
  AlgNum u2 = (-p + sd) / Rational(2);
  if (u1.approx().real() > u2.approx().real()) std::swap(u1, u2);
  AlgNum r1 = principal_sqrt(u1);
  AlgNum r2 = principal_sqrt(u2);
  return {-r1, r1, -r2, r2};
}

std::vector<DiffSystem> block_split(const DiffSystem& sys, const std::vector<std::vector<std::size_t>>& partition) {
  const std::size_t n = sys.dim();
  std::vector<int> owner(n, -1);
  for (std::size_t b = 0; b < partition.size(); ++b) {
    for (std::size_t idx : partition[b]) {
      if (idx >= n || owner[idx] != -1) throw InputError("partition must cover every index exactly once");
      owner[idx] = static_cast<int>(b);
    }
  }
  if (std::find(owner.begin(), owner.end(), -1) != owner.end()) {
    throw InputError("partition must cover every index exactly once");
  }
  std::string bad;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (owner[i] != owner[j] && !sys.M(i, j).is_zero()) {
        if (!bad.empty()) bad += ", ";
        bad += entry_name(i, j) + " = " + sys.M(i, j).to_string(sys.variable);
      }
    }
  }
  if (!bad.empty()) throw InputError("system is not block-diagonal; nonzero entries " + bad);
  std::vector<DiffSystem> out;
  for (const auto& group : partition) {
    PuiseuxMatrix m(group.size(), group.size(), PuiseuxPoly(sys.tower()));
    for (std::size_t a = 0; a < group.size(); ++a) {
      for (std::size_t b = 0; b < group.size(); ++b) m(a, b) = sys.M(group[a], group[b]);
    }
    out.push_back(DiffSystem{sys.variable, m, sys.point});
  }
  return out;
}

}  // namespace sasano
