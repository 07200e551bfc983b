#pragma once

// Univariate polynomials and rational functions over Q.

#include "sasano/rational.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sasano {

class QPoly {
 public:
  QPoly() = default;
  QPoly(const Rational& c);  // NOLINT(google-explicit-constructor)
  explicit QPoly(std::vector<Rational> coeffs);
  static QPoly monomial(const Rational& c, std::size_t degree);
  static QPoly variable() { return monomial(Rational(1), 1); }

  // -1 for the zero polynomial.
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(std::size_t k) const { return k < c_.size() ? c_[k] : Rational(0); }
  Rational lead() const { return c_.empty() ? Rational(0) : c_.back(); }

  QPoly derivative() const;
  Rational evaluate(const Rational& x) const;
  QPoly monic() const;
  // x^k with k = multiplicity of the root 0; nullopt-like 0 for the zero polynomial.
  std::size_t trailing_zeros() const;

  std::string to_string(const std::string& var = "t") const;

  friend QPoly operator+(const QPoly& a, const QPoly& b);
  friend QPoly operator-(const QPoly& a, const QPoly& b);
  friend QPoly operator*(const QPoly& a, const QPoly& b);
  QPoly operator-() const;
  friend bool operator==(const QPoly& a, const QPoly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const QPoly& a, const QPoly& b) { return !(a == b); }

 private:
  void trim();
  std::vector<Rational> c_;
};

struct QDivMod {
  QPoly quotient;
  QPoly remainder;
};
QDivMod divmod(const QPoly& a, const QPoly& b);
// Monic gcd; gcd(0, 0) = 0.
QPoly gcd(QPoly a, QPoly b);

// num/den with gcd(num, den) = 1 and den monic.
class RatFunc {
 public:
  RatFunc() : den_(Rational(1)) {}
  RatFunc(const Rational& c) : num_(c), den_(Rational(1)) {}  // NOLINT(google-explicit-constructor)
  RatFunc(const QPoly& p) : num_(p), den_(Rational(1)) {}     // NOLINT(google-explicit-constructor)
  RatFunc(QPoly num, QPoly den);
  static RatFunc variable() { return RatFunc(QPoly::variable()); }

  const QPoly& num() const { return num_; }
  const QPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.degree() == 0; }
  std::optional<Rational> constant_value() const;

  RatFunc derivative() const;
  // Value at x; throws DivisionByZero at a pole.
  Rational evaluate(const Rational& x) const;
  RatFunc inverse() const;
  RatFunc pow(long n) const;

  // Rational antiderivative when one exists (Horowitz-Ostrogradsky), with
  // zero constant term in the polynomial part.
  std::optional<RatFunc> antiderivative() const;

  // "p(t)/q(t)" with each side fully expanded, or "p(t)" when q = 1.
  std::string to_string(const std::string& var = "t") const;

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
  RatFunc operator-() const { return RatFunc(-num_, den_); }
  RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
  RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
  RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
  friend bool operator==(const RatFunc& a, const RatFunc& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

 private:
  QPoly num_;
  QPoly den_;
};

// Parses rational functions in one variable: numbers, the variable, + - * /,
// integer powers and parentheses, e.g. "(-2/5*t^2 + 1)/(t - 3)".
RatFunc parse_ratfunc(std::string_view text, const std::string& var = "t");

}  // namespace sasano
