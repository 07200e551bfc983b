#include "sasano/sasano_model.hpp"

#include "sasano/errors.hpp"

#include <sstream>

namespace sasano {

const char* var_name(Var v) {
  static constexpr const char* names[kVarCount] = {"x", "y", "z", "w", "t", "F", "alpha0", "alpha1", "alpha2"};
  return names[static_cast<std::size_t>(v)];
}

PolyExpr::PolyExpr(const Rational& c) {
  if (sgn(c) != 0) terms_.emplace(Exponents{}, c);
}

PolyExpr PolyExpr::var(Var v) {
  PolyExpr p;
  Exponents e{};
  e[static_cast<std::size_t>(v)] = 1;
  p.terms_.emplace(e, Rational(1));
  return p;
}

void PolyExpr::add(const Exponents& e, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (inserted) return;
  it->second += c;
  if (sgn(it->second) == 0) terms_.erase(it);
}

bool PolyExpr::depends_on(Var v) const {
  for (const auto& [e, c] : terms_) {
    if (e[static_cast<std::size_t>(v)] != 0) return true;
  }
  return false;
}

int PolyExpr::total_degree() const {
  int d = terms_.empty() ? -1 : 0;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (auto k : e) s += k;
    d = std::max(d, s);
  }
  return d;
}

PolyExpr PolyExpr::derivative(Var v) const {
  const auto k = static_cast<std::size_t>(v);
  PolyExpr out;
  for (const auto& [e, c] : terms_) {
    if (e[k] == 0) continue;
    Exponents f = e;
    --f[k];
    out.add(f, c * static_cast<long>(e[k]));
  }
  return out;
}

PolyExpr PolyExpr::substitute(Var v, const Rational& value) const {
  const auto k = static_cast<std::size_t>(v);
  PolyExpr out;
  for (const auto& [e, c] : terms_) {
    Exponents f = e;
    f[k] = 0;
    Rational factor = 1;
    for (int n = 0; n < e[k]; ++n) factor *= value;
    out.add(f, c * factor);
  }
  return out;
}

Rational PolyExpr::evaluate(const std::array<Rational, kVarCount>& point) const {
  Rational acc = 0;
  for (const auto& [e, c] : terms_) {
    Rational term = c;
    for (std::size_t k = 0; k < kVarCount; ++k) {
      for (int n = 0; n < e[k]; ++n) term *= point[k];
    }
    acc += term;
  }
  return acc;
}

RatFunc PolyExpr::evaluate(const std::array<RatFunc, kVarCount>& point) const {
  RatFunc acc;
  for (const auto& [e, c] : terms_) {
    RatFunc term(c);
    for (std::size_t k = 0; k < kVarCount; ++k) {
      if (e[k] != 0) term *= point[k].pow(e[k]);
    }
    acc += term;
  }
  return acc;
}

std::string PolyExpr::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  // Highest total degree first, then the map's order.
  std::vector<std::pair<Exponents, Rational>> sorted(terms_.begin(), terms_.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    int da = 0, db = 0;
    for (auto k : a.first) da += k;
    for (auto k : b.first) db += k;
    return da > db;
  });
  for (const auto& [e, c] : sorted) {
    std::string mono;
    for (std::size_t k = 0; k < kVarCount; ++k) {
      if (e[k] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += var_name(static_cast<Var>(k));
      if (e[k] > 1) mono += "^" + std::to_string(e[k]);
    }
    Rational mag = abs(c);
    std::string term = mono.empty() ? sasano::to_string(mag) : (mag == 1 ? mono : sasano::to_string(mag) + "*" + mono);
    if (out.empty()) out = (sgn(c) < 0 ? "-" : "") + term;
    else out += (sgn(c) < 0 ? " - " : " + ") + term;
  }
  return out;
}

PolyExpr PolyExpr::operator-() const {
  PolyExpr out = *this;
  for (auto& [e, c] : out.terms_) c = -c;
  return out;
}

PolyExpr operator+(const PolyExpr& a, const PolyExpr& b) {
  PolyExpr out = a;
  for (const auto& [e, c] : b.terms_) out.add(e, c);
  return out;
}

PolyExpr operator-(const PolyExpr& a, const PolyExpr& b) { return a + (-b); }

PolyExpr operator*(const PolyExpr& a, const PolyExpr& b) {
  PolyExpr out;
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      PolyExpr::Exponents e{};
      for (std::size_t k = 0; k < kVarCount; ++k) e[k] = static_cast<std::uint8_t>(ea[k] + eb[k]);
      out.add(e, ca * cb);
    }
  }
  return out;
}

std::string ParamTriple::to_string() const {
  return "(" + sasano::to_string(a0) + ", " + sasano::to_string(a1) + ", " + sasano::to_string(a2) + ")";
}

ParamTriple seed_params() { return {Rational(2, 5), Rational(1, 5), Rational(1, 10)}; }

ParamTriple parse_params(std::string_view text) {
  std::vector<Rational> v;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = text.find(',', start);
    std::string_view part = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
    while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
    v.push_back(parse_rational(part));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (v.size() != 3) throw InputError("expected three parameters a0,a1,a2, got '" + std::string(text) + "'");
  return {v[0], v[1], v[2]};
}

namespace {

PolyExpr V(Var v) { return PolyExpr::var(v); }

}  // namespace

PolyExpr painleve2_hamiltonian(Var q, Var p, Var t, Var alpha) {
  return V(q) * V(p) * V(p) + V(q) * V(q) + V(t) * V(q) - V(alpha) * V(p);
}

PolyExpr painleve2_autonomous_hamiltonian(Var q, Var p, Var alpha) {
  return V(q) * V(q) * V(p) - Rational(1, 2) * V(p) * V(p) + V(alpha) * V(q);
}

PolyExpr sasano_hamiltonian() {
  const PolyExpr x = V(Var::x), y = V(Var::y), z = V(Var::z), w = V(Var::w), t = V(Var::t);
  return 2 * x * y * y + 2 * x * x + 2 * t * x - 2 * V(Var::a1) * y + z * z * w - Rational(1, 2) * w * w +
         V(Var::a0) * z + x * w + 2 * y * z * w;
}

std::array<PolyExpr, 4> reference_sasano_field() {
  const PolyExpr x = V(Var::x), y = V(Var::y), z = V(Var::z), w = V(Var::w), t = V(Var::t);
  return {
      4 * x * y - 2 * V(Var::a1) + 2 * z * w,
      -2 * y * y - 4 * x - 2 * t - w,
      z * z - w + x + 2 * y * z,
      -2 * z * w - V(Var::a0) - 2 * y * w,
  };
}

HamiltonianSystem build_extended_system(const std::optional<ParamTriple>& params) {
  HamiltonianSystem sys;
  sys.hamiltonian = sasano_hamiltonian();
  sys.extended_hamiltonian = sys.hamiltonian + V(Var::F);
  for (std::size_t k = 0; k < 3; ++k) {
    auto [q, p] = sys.pairs[k];
    sys.field[2 * k] = sys.extended_hamiltonian.derivative(p);
    sys.field[2 * k + 1] = -sys.extended_hamiltonian.derivative(q);
  }
  static const bool field_matches = [&] {
    auto ref = reference_sasano_field();
    for (std::size_t k = 0; k < 4; ++k) {
      if (sys.field[k] != ref[k]) return false;
    }
    return sys.field[4] == PolyExpr(1);
  }();
  if (!field_matches) throw std::logic_error("symplectic gradient of H + F disagrees with the Sasano equations");

  if (params) {
    if (!params->normalized()) {
      throw InputError("parameters " + params->to_string() + " violate a0 + 2 a1 + 2 a2 = 1");
    }
    sys.params = params;
    auto bind = [&](PolyExpr p) {
      return p.substitute(Var::a0, params->a0).substitute(Var::a1, params->a1).substitute(Var::a2, params->a2);
    };
    sys.hamiltonian = bind(sys.hamiltonian);
    sys.extended_hamiltonian = bind(sys.extended_hamiltonian);
    for (auto& f : sys.field) f = bind(f);
  }
  return sys;
}

RationalSolution seed_solution() {
  RatFunc t = RatFunc::variable();
  RatFunc x = RatFunc(Rational(-2, 5)) * t;
  return RationalSolution{seed_params(), {x, RatFunc(), RatFunc(), x}, RatFunc(Rational(2, 5)) * t * t};
}

bool ResidualReport::verified() const {
  for (const auto& r : residuals) {
    if (!r.is_zero()) return false;
  }
  return true;
}

std::string ResidualReport::summary() const {
  static constexpr const char* names[kPhaseDim] = {"x", "y", "z", "w", "t", "F"};
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k < kPhaseDim; ++k) {
    if (residuals[k].is_zero()) continue;
    os << (first ? "" : "; ") << "d" << names[k] << "/dt residual " << residuals[k].to_string();
    first = false;
  }
  if (first) os << "all residuals vanish identically";
  if (F_unavailable) os << " (F has no rational antiderivative; its equation only defines F)";
  return os.str();
}

RationalSolution complete_solution(const RationalSolution& sol) {
  if (sol.F) return sol;
  RationalSolution out = sol;
  out.F = (RatFunc(Rational(-2)) * sol.xyzw[0]).antiderivative();
  return out;
}

namespace {

std::array<RatFunc, kVarCount> point_of(const RationalSolution& sol, const ParamTriple& params) {
  return {sol.xyzw[0], sol.xyzw[1], sol.xyzw[2], sol.xyzw[3], RatFunc::variable(),
          sol.F ? *sol.F : RatFunc(), RatFunc(params.a0), RatFunc(params.a1), RatFunc(params.a2)};
}

}  // namespace

ResidualReport verify_solution(const HamiltonianSystem& sys, const RationalSolution& sol) {
  ResidualReport rep;
  rep.F_supplied = sol.F.has_value();
  RationalSolution full = complete_solution(sol);
  rep.F_reconstructed = !rep.F_supplied && full.F.has_value();
  rep.F_unavailable = !full.F.has_value();
  // Parameters of a bound system win; symbolic systems take the solution's.
  const ParamTriple params = sys.params ? *sys.params : sol.params;
  auto point = point_of(full, params);
  std::array<RatFunc, kPhaseDim> values = {point[0], point[1], point[2], point[3], point[4], point[5]};
  for (std::size_t k = 0; k < kPhaseDim; ++k) {
    if (k == 5 && rep.F_unavailable) continue;
    rep.residuals[k] = values[k].derivative() - sys.field[k].evaluate(point);
  }
  return rep;
}

Matrix<RatFunc> variational_matrix(const HamiltonianSystem& sys, const RationalSolution& sol) {
  ResidualReport rep = verify_solution(sys, sol);
  if (!rep.verified()) throw VerificationError("not a solution: " + rep.summary());
  const ParamTriple params = sys.params ? *sys.params : sol.params;
  auto point = point_of(complete_solution(sol), params);
  Matrix<RatFunc> J(kPhaseDim, kPhaseDim, RatFunc());
  for (std::size_t i = 0; i < kPhaseDim; ++i) {
    for (std::size_t j = 0; j < kPhaseDim; ++j) {
      J(i, j) = sys.field[i].derivative(static_cast<Var>(j)).evaluate(point);
    }
  }
  return J;
}

DiffSystem extract_nve(const Matrix<RatFunc>& varmat, const TowerPtr& tower) {
  if (varmat.rows() != kPhaseDim || varmat.cols() != kPhaseDim) throw InputError("variational matrix must be 6x6");
  constexpr std::size_t t_row = 4;
  for (std::size_t j = 0; j < kPhaseDim; ++j) {
    if (!varmat(t_row, j).is_zero()) {
      throw VerificationError("the delta t row is not identically zero (entry " + std::to_string(j + 1) +
                              " = " + varmat(t_row, j).to_string() + ")");
    }
  }
  PuiseuxMatrix M(4, 4, PuiseuxPoly(tower));
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      const RatFunc& f = varmat(i, j);
      const QPoly& den = f.den();
      if (den != QPoly::monomial(Rational(1), static_cast<std::size_t>(den.degree()))) {
        throw InputError("NVE entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                         ") = " + f.to_string() + " is not a Laurent polynomial in t");
      }
      PuiseuxPoly p(tower);
      const auto& c = f.num().coeffs();
      for (std::size_t k = 0; k < c.size(); ++k) {
        if (sgn(c[k]) != 0) p += PuiseuxPoly(AlgNum(tower, c[k]), Rational(static_cast<long>(k) - den.degree()));
      }
      M(i, j) = p;
    }
  }
  return DiffSystem{"t", M, SingularPoint::Infinity};
}

RatFunc hamiltonian_along(const HamiltonianSystem& sys, const RationalSolution& sol) {
  RationalSolution full = complete_solution(sol);
  if (!full.F) throw VerificationError("F has no rational antiderivative along this solution");
  const ParamTriple params = sys.params ? *sys.params : sol.params;
  return sys.extended_hamiltonian.evaluate(point_of(full, params));
}

nlohmann::json solution_to_json(const RationalSolution& sol) {
  nlohmann::json comps = nlohmann::json::object();
  static constexpr const char* names[4] = {"x", "y", "z", "w"};
  for (std::size_t k = 0; k < 4; ++k) comps[names[k]] = sol.xyzw[k].to_string();
  if (sol.F) comps["F"] = sol.F->to_string();
  return nlohmann::json{{"params", {to_string(sol.params.a0), to_string(sol.params.a1), to_string(sol.params.a2)}},
                        {"components", comps}};
}

RationalSolution solution_from_json(const nlohmann::json& j) {
  try {
    const auto& p = j.at("params");
    if (!p.is_array() || p.size() != 3) throw InputError("solution params must be a list of three rationals");
    RationalSolution sol;
    sol.params = {parse_rational(p[0].get<std::string>()), parse_rational(p[1].get<std::string>()),
                  parse_rational(p[2].get<std::string>())};
    const auto& c = j.at("components");
    static constexpr const char* names[4] = {"x", "y", "z", "w"};
    for (std::size_t k = 0; k < 4; ++k) sol.xyzw[k] = parse_ratfunc(c.at(names[k]).get<std::string>());
    if (c.contains("F")) sol.F = parse_ratfunc(c.at("F").get<std::string>());
    return sol;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed solution JSON: ") + e.what());
  }
}

}  // namespace sasano
