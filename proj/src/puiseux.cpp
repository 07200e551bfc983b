#include "sasano/puiseux.hpp"

#include "sasano/errors.hpp"

#include <sstream>

namespace sasano {

PuiseuxPoly::PuiseuxPoly(TowerPtr tower) : tower_(std::move(tower)) {}

PuiseuxPoly::PuiseuxPoly(const AlgNum& coefficient, const Rational& exponent) : tower_(coefficient.tower()) {
  if (!coefficient.is_zero()) terms_.emplace(exponent, coefficient);
}

bool PuiseuxPoly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0); }

Integer PuiseuxPoly::ramification() const {
  Integer d = 1;
  for (const auto& [e, c] : terms_) d = lcm(d, e.get_den());
  return d;
}

AlgNum PuiseuxPoly::coefficient(const Rational& exponent) const {
  auto it = terms_.find(exponent);
  return it == terms_.end() ? AlgNum(tower_) : it->second;
}

Rational PuiseuxPoly::max_exponent() const {
  if (terms_.empty()) throw std::domain_error("zero series has no leading exponent");
  return terms_.rbegin()->first;
}

Rational PuiseuxPoly::min_exponent() const {
  if (terms_.empty()) throw std::domain_error("zero series has no trailing exponent");
  return terms_.begin()->first;
}

void PuiseuxPoly::add_term(const Rational& e, const AlgNum& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

PuiseuxPoly PuiseuxPoly::derivative() const {
  PuiseuxPoly out(tower_);
  for (const auto& [e, c] : terms_) {
    if (e != 0) out.terms_.emplace(Rational(e - 1), c * e);
  }
  return out;
}

PuiseuxPoly PuiseuxPoly::shifted(const Rational& s) const {
  PuiseuxPoly out(tower_);
  for (const auto& [e, c] : terms_) out.terms_.emplace(Rational(e + s), c);
  return out;
}

PuiseuxPoly PuiseuxPoly::monomial_inverse() const {
  if (!is_monomial()) throw InputError("division by a non-monomial Laurent-Puiseux sum");
  const auto& [e, c] = *terms_.begin();
  return PuiseuxPoly(c.inverse(), Rational(-e));
}

PuiseuxPoly PuiseuxPoly::lifted(const TowerPtr& target) const {
  PuiseuxPoly out(target);
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, c.lifted(target));
  return out;
}

std::complex<double> PuiseuxPoly::evaluate(
    const std::function<std::complex<double>(const Rational&)>& power) const {
  std::complex<double> acc = 0;
  for (const auto& [e, c] : terms_) acc += c.approx() * power(e);
  return acc;
}

std::string PuiseuxPoly::to_string(const std::string& variable) const {
  if (terms_.empty()) return "0";
  std::string out;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    std::string coeff = c.to_string();
    bool compound = coeff.find_first_of("+-", 1) != std::string::npos;
    std::string term;
    if (e == 0) {
      term = compound ? "(" + coeff + ")" : coeff;
    } else {
      std::string mono = variable;
      if (e != 1) mono += is_integer(e) ? "^" + sasano::to_string(e) : "^(" + sasano::to_string(e) + ")";
      if (coeff == "1") term = mono;
      else if (coeff == "-1") term = "-" + mono;
      else term = (compound ? "(" + coeff + ")" : coeff) + "*" + mono;
    }
    if (out.empty()) out = term;
    else if (term[0] == '-') out += " - " + term.substr(1);
    else out += " + " + term;
  }
  return out;
}

PuiseuxPoly PuiseuxPoly::operator-() const {
  PuiseuxPoly out(tower_);
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
  return out;
}

PuiseuxPoly& PuiseuxPoly::operator+=(const PuiseuxPoly& o) {
  if (o.tower_ != tower_) throw TowerMismatch();
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

PuiseuxPoly& PuiseuxPoly::operator-=(const PuiseuxPoly& o) {
  if (o.tower_ != tower_) throw TowerMismatch();
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

PuiseuxPoly operator*(const PuiseuxPoly& a, const PuiseuxPoly& b) {
  if (a.tower_ != b.tower_) throw TowerMismatch();
  PuiseuxPoly out(a.tower_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) out.add_term(Rational(ea + eb), ca * cb);
  }
  return out;
}

PuiseuxPoly operator*(const PuiseuxPoly& a, const AlgNum& c) {
  PuiseuxPoly out(a.tower_);
  if (c.tower() != a.tower_) throw TowerMismatch();
  if (c.is_zero()) return out;
  for (const auto& [e, x] : a.terms_) out.terms_.emplace(e, x * c);
  return out;
}

bool operator==(const PuiseuxPoly& a, const PuiseuxPoly& b) {
  if (a.tower_ != b.tower_) throw TowerMismatch();
  return a.terms_ == b.terms_;
}

}  // namespace sasano
