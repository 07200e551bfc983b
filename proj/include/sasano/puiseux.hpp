#pragma once

// Finite Laurent-Puiseux sums  sum_e c_e x^e  with rational exponents e and
// coefficients in a field tower.

#include "sasano/alg_field.hpp"

#include <complex>
#include <functional>
#include <map>
#include <string>

namespace sasano {

class PuiseuxPoly {
 public:
  using Terms = std::map<Rational, AlgNum>;

  explicit PuiseuxPoly(TowerPtr tower);
  PuiseuxPoly(const AlgNum& coefficient, const Rational& exponent = Rational(0));

  const TowerPtr& tower() const { return tower_; }
  const Terms& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_monomial() const { return terms_.size() == 1; }
  bool is_constant() const;
  // Least d such that every exponent lies in (1/d)Z.
  Integer ramification() const;
  AlgNum coefficient(const Rational& exponent) const;
  Rational max_exponent() const;
  Rational min_exponent() const;

  PuiseuxPoly derivative() const;
  // Multiplies by x^e.
  PuiseuxPoly shifted(const Rational& e) const;
  // Inverse of a single-term sum; throws for anything else.
  PuiseuxPoly monomial_inverse() const;
  PuiseuxPoly lifted(const TowerPtr& target) const;

  // Evaluation with x^e supplied by the caller, so that branch choices for
  // fractional exponents stay with whoever defines the variable.
  std::complex<double> evaluate(const std::function<std::complex<double>(const Rational&)>& power) const;

  std::string to_string(const std::string& variable) const;

  PuiseuxPoly operator-() const;
  PuiseuxPoly& operator+=(const PuiseuxPoly& o);
  PuiseuxPoly& operator-=(const PuiseuxPoly& o);
  friend PuiseuxPoly operator+(PuiseuxPoly a, const PuiseuxPoly& b) { return a += b; }
  friend PuiseuxPoly operator-(PuiseuxPoly a, const PuiseuxPoly& b) { return a -= b; }
  friend PuiseuxPoly operator*(const PuiseuxPoly& a, const PuiseuxPoly& b);
  friend PuiseuxPoly operator*(const PuiseuxPoly& a, const AlgNum& c);
  friend PuiseuxPoly operator*(const AlgNum& c, const PuiseuxPoly& a) { return a * c; }
  friend bool operator==(const PuiseuxPoly& a, const PuiseuxPoly& b);
  friend bool operator!=(const PuiseuxPoly& a, const PuiseuxPoly& b) { return !(a == b); }

 private:
  void add_term(const Rational& e, const AlgNum& c);

  TowerPtr tower_;
  Terms terms_;
};

}  // namespace sasano
