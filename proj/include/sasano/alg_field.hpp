#pragma once

// Exact arithmetic in a fixed tower of simple algebraic extensions of Q.
//
// An element of a tower Q(g0)(g1)...(gL) is stored densely in the monomial
// basis g0^e0 * g1^e1 * ... with e_k < deg(g_k). The flat index is
// e0 + d0*(e1 + d1*(e2 + ...)), i.e. the lowest generator varies fastest, so
// an element of a prefix tower occupies the leading block of coordinates.

#include "sasano/big_complex.hpp"
#include "sasano/rational.hpp"

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sasano {

class AlgNum;
class TowerSpec;
using TowerPtr = std::shared_ptr<const TowerSpec>;

namespace detail {
struct SqrtView;
}

struct TowerSelfCheck {
  struct LevelCheck {
    std::string name;
    bool simple_root = false;     // Newton converged to a root with p'(root) != 0
    bool isolated = false;        // the stored approximation is nearest to that root
    std::optional<bool> irreducible;  // exact verdict where a criterion applies
    double separation = 0.0;      // distance from the chosen root to the nearest other root
    std::string note;
  };
  std::vector<LevelCheck> levels;
  bool ok() const;
};

class TowerSpec : public std::enable_shared_from_this<TowerSpec> {
 public:
  struct Level {
    std::string name;
    std::size_t degree = 0;
    // Coefficients c_0..c_{d-1} of the monic defining polynomial
    // x^d + c_{d-1} x^{d-1} + ... + c_0, each a flat element of the prefix tower.
    std::vector<std::vector<Rational>> coeffs;
    std::complex<double> approx;
  };

  static TowerPtr rationals();

  // Adjoins a root of x^d + sum c_j x^j (coeffs over this tower). `approx`
  // selects the root.
  TowerPtr extend(std::string name, const std::vector<AlgNum>& coeffs,
                  std::complex<double> approx) const;

  std::size_t level_count() const { return levels_.size(); }
  const Level& level(std::size_t k) const { return levels_.at(k); }
  std::size_t dimension() const { return strides_.back(); }
  // Dimension of the prefix tower below level k (== product of lower degrees).
  std::size_t stride(std::size_t k) const { return strides_.at(k); }
  TowerPtr prefix(std::size_t level_count) const;
  std::optional<std::size_t> find_level(std::string_view name) const;

  // Roots of the defining polynomials, polished to `digits` decimal digits.
  std::vector<BigComplex> root_values(int digits) const;

  TowerSelfCheck self_check() const;

 private:
  TowerSpec() = default;

  std::vector<Level> levels_;
  std::vector<std::size_t> strides_{1};
  TowerPtr parent_;

  mutable std::mutex cache_mutex_;
  mutable std::map<int, std::vector<BigComplex>> root_cache_;
  mutable std::shared_ptr<const detail::SqrtView> sqrt_view_;

  friend const detail::SqrtView& sqrt_view_of(const TowerSpec& tower);
};

class AlgNum {
 public:
  explicit AlgNum(TowerPtr tower, const Rational& value = Rational(0));
  AlgNum(TowerPtr tower, std::vector<Rational> coeffs);
  AlgNum(TowerPtr tower, long value) : AlgNum(std::move(tower), Rational(value)) {}

  static AlgNum generator(const TowerPtr& tower, std::size_t level);
  static AlgNum generator(const TowerPtr& tower, std::string_view name);

  const TowerPtr& tower() const { return tower_; }
  std::span<const Rational> coeffs() const { return *coeffs_; }

  bool is_zero() const;
  bool is_rational() const { return rational_; }
  std::optional<Rational> rational_value() const;

  AlgNum inverse() const;
  AlgNum pow(long exponent) const;
  // Re-embeds into a tower that has this element's tower as a prefix.
  AlgNum lifted(const TowerPtr& target) const;

  BigComplex embed(int digits) const;
  std::complex<double> approx() const;

  // Canonical coordinates as a readable sum, e.g. "1/2*i*beta - 3*gamma^2".
  std::string to_string() const;

  AlgNum operator-() const;
  AlgNum& operator+=(const AlgNum& o);
  AlgNum& operator-=(const AlgNum& o);
  AlgNum& operator*=(const AlgNum& o);
  AlgNum& operator/=(const AlgNum& o);

  friend AlgNum operator+(AlgNum a, const AlgNum& b) { return a += b; }
  friend AlgNum operator-(AlgNum a, const AlgNum& b) { return a -= b; }
  friend AlgNum operator*(AlgNum a, const AlgNum& b) { return a *= b; }
  friend AlgNum operator/(AlgNum a, const AlgNum& b) { return a /= b; }
  friend AlgNum operator*(AlgNum a, const Rational& q);
  friend AlgNum operator*(const Rational& q, AlgNum a) { return std::move(a) * q; }
  friend AlgNum operator+(AlgNum a, const Rational& q);
  friend AlgNum operator-(AlgNum a, const Rational& q) { return std::move(a) + Rational(-q); }
  friend AlgNum operator/(AlgNum a, const Rational& q);

  friend bool operator==(const AlgNum& a, const AlgNum& b);
  friend bool operator!=(const AlgNum& a, const AlgNum& b) { return !(a == b); }

 private:
  void check_tower(const AlgNum& o) const;
  void refresh();

  TowerPtr tower_;
  std::shared_ptr<const std::vector<Rational>> coeffs_;
  bool rational_ = true;
};

enum class FieldOp { Add, Sub, Mul, Div };

AlgNum field_arith(FieldOp op, const AlgNum& a, const AlgNum& b);
std::optional<Rational> rational_recognize(const AlgNum& a);
// precision in decimal digits, at least 15.
BigComplex numeric_embed(const AlgNum& a, int digits);

// Some square root of `a` inside the tower, or nullopt when `a` is not a
// square there. Throws std::domain_error for tower shapes the descent does not
// handle (a base level that is not binomial over Q, or a higher level that is
// not a pure quadratic).
std::optional<AlgNum> try_sqrt(const AlgNum& a);

// Square root whose numeric embedding has positive real part, or positive
// imaginary part when it is purely imaginary. Throws if `a` is not a square.
AlgNum principal_sqrt(const AlgNum& a);

// The tower carrying every constant of the reduction with the normalization
// alpha^3 = 5/64: gamma^12 = 5/64 (gamma = alpha^(1/4) > 0), i^2 = -1,
// beta^2 = 48 gamma^6 - 10 (beta > 0). sqrt5 = 8 gamma^6.
TowerPtr canonical_tower();

// Tower for the alternative normalization alpha = 4^(-4/7):
// delta^7 = 1/4 (delta = alpha^(1/4) > 0), s5^2 = 5, i^2 = -1, beta^2 = 6 s5 - 10.
TowerPtr wasow_tower();

}  // namespace sasano
