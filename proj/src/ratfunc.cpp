#include "sasano/ratfunc.hpp"

#include "sasano/errors.hpp"

#include <cctype>

namespace sasano {

QPoly::QPoly(const Rational& c) {
  if (sgn(c) != 0) c_.push_back(c);
}

QPoly::QPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
  for (auto& q : c_) q.canonicalize();
  trim();
}

QPoly QPoly::monomial(const Rational& c, std::size_t degree) {
  if (sgn(c) == 0) return QPoly();
  std::vector<Rational> v(degree + 1);
  v[degree] = c;
  return QPoly(std::move(v));
}

void QPoly::trim() {
  while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
}

QPoly QPoly::derivative() const {
  if (c_.size() <= 1) return QPoly();
  std::vector<Rational> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<long>(k);
  return QPoly(std::move(d));
}

Rational QPoly::evaluate(const Rational& x) const {
  Rational acc = 0;
  for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + c_[k];
  return acc;
}

QPoly QPoly::monic() const {
  if (c_.empty()) return *this;
  std::vector<Rational> v(c_);
  Rational l = c_.back();
  for (auto& q : v) q /= l;
  return QPoly(std::move(v));
}

std::size_t QPoly::trailing_zeros() const {
  std::size_t k = 0;
  while (k < c_.size() && sgn(c_[k]) == 0) ++k;
  return k;
}

std::string QPoly::to_string(const std::string& var) const {
  if (c_.empty()) return "0";
  std::string out;
  for (std::size_t k = c_.size(); k-- > 0;) {
    if (sgn(c_[k]) == 0) continue;
    Rational mag = abs(c_[k]);
    std::string mono = k == 0 ? "" : (k == 1 ? var : var + "^" + std::to_string(k));
    std::string term;
    if (mono.empty()) term = sasano::to_string(mag);
    else if (mag == 1) term = mono;
    else term = sasano::to_string(mag) + "*" + mono;
    if (out.empty()) out = (sgn(c_[k]) < 0 ? "-" : "") + term;
    else out += (sgn(c_[k]) < 0 ? " - " : " + ") + term;
  }
  return out;
}

QPoly operator+(const QPoly& a, const QPoly& b) {
  std::vector<Rational> v(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t k = 0; k < a.c_.size(); ++k) v[k] += a.c_[k];
  for (std::size_t k = 0; k < b.c_.size(); ++k) v[k] += b.c_[k];
  return QPoly(std::move(v));
}

QPoly operator-(const QPoly& a, const QPoly& b) { return a + (-b); }

QPoly QPoly::operator-() const {
  std::vector<Rational> v(c_);
  for (auto& q : v) q = -q;
  return QPoly(std::move(v));
}

QPoly operator*(const QPoly& a, const QPoly& b) {
  if (a.is_zero() || b.is_zero()) return QPoly();
  std::vector<Rational> v(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (sgn(a.c_[i]) == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
  }
  return QPoly(std::move(v));
}

QDivMod divmod(const QPoly& a, const QPoly& b) {
  if (b.is_zero()) throw DivisionByZero();
  std::vector<Rational> rem = a.coeffs();
  const long db = b.degree();
  if (a.degree() < db) return {QPoly(), a};
  std::vector<Rational> quot(static_cast<std::size_t>(a.degree() - db + 1));
  const Rational lb = b.lead();
  for (long k = a.degree(); k >= db; --k) {
    Rational c = rem[static_cast<std::size_t>(k)] / lb;
    quot[static_cast<std::size_t>(k - db)] = c;
    if (sgn(c) == 0) continue;
    for (long j = 0; j <= db; ++j) rem[static_cast<std::size_t>(k - db + j)] -= c * b.coeff(static_cast<std::size_t>(j));
  }
  return {QPoly(std::move(quot)), QPoly(std::move(rem))};
}

QPoly gcd(QPoly a, QPoly b) {
  while (!b.is_zero()) {
    QPoly r = divmod(a, b).remainder;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

RatFunc::RatFunc(QPoly num, QPoly den) {
  if (den.is_zero()) throw DivisionByZero();
  if (num.is_zero()) {
    den_ = QPoly(Rational(1));
    return;
  }
  QPoly g = gcd(num, den);
  if (g.degree() > 0) {
    num = divmod(num, g).quotient;
    den = divmod(den, g).quotient;
  }
  Rational l = den.lead();
  num_ = num * QPoly(Rational(1 / l));
  den_ = den * QPoly(Rational(1 / l));
}

std::optional<Rational> RatFunc::constant_value() const {
  if (num_.degree() <= 0 && den_.degree() == 0) return num_.coeff(0);
  return std::nullopt;
}

RatFunc RatFunc::derivative() const {
  return RatFunc(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
}

Rational RatFunc::evaluate(const Rational& x) const {
  Rational d = den_.evaluate(x);
  if (sgn(d) == 0) throw DivisionByZero();
  return num_.evaluate(x) / d;
}

RatFunc RatFunc::inverse() const {
  if (is_zero()) throw DivisionByZero();
  return RatFunc(den_, num_);
}

RatFunc RatFunc::pow(long n) const {
  if (n < 0) return inverse().pow(-n);
  RatFunc out(Rational(1));
  for (long k = 0; k < n; ++k) out *= *this;
  return out;
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_);
  return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
  if (a.is_zero() || b.is_zero()) return RatFunc();
  return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) { return a * b.inverse(); }

namespace {

// Solves the square system M x = rhs; throws if singular.
std::vector<Rational> solve_linear(std::vector<std::vector<Rational>> m, std::vector<Rational> rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && sgn(m[piv][col]) == 0) ++piv;
    if (piv == n) throw std::logic_error("singular linear system");
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || sgn(m[i][col]) == 0) continue;
      Rational f = m[i][col] / m[col][col];
      for (std::size_t j = col; j < n; ++j) m[i][j] -= f * m[col][j];
      rhs[i] -= f * rhs[col];
    }
  }
  for (std::size_t i = 0; i < n; ++i) rhs[i] /= m[i][i];
  return rhs;
}

}  // namespace

std::optional<RatFunc> RatFunc::antiderivative() const {
  QDivMod qr = divmod(num_, den_);
  std::vector<Rational> ip(static_cast<std::size_t>(qr.quotient.degree() + 2));
  for (std::size_t k = 0; k < qr.quotient.coeffs().size(); ++k) ip[k + 1] = qr.quotient.coeffs()[k] / static_cast<long>(k + 1);
  RatFunc poly_part(QPoly(std::move(ip)));
  if (qr.remainder.is_zero()) return poly_part;
  // R/Q = (A/D)' + B/E with D = gcd(Q, Q'), E = Q/D; rational iff B = 0.
  const QPoly& R = qr.remainder;
  QPoly D = gcd(den_, den_.derivative());
  QPoly E = divmod(den_, D).quotient;
  QPoly H = divmod(E * D.derivative(), D).quotient;
  const std::size_t m = static_cast<std::size_t>(D.degree());
  const std::size_t k = static_cast<std::size_t>(E.degree());
  const std::size_t n = m + k;
  std::vector<std::vector<Rational>> mat(n, std::vector<Rational>(n));
  auto column = [&](std::size_t col, const QPoly& p) {
    for (std::size_t row = 0; row < n; ++row) mat[row][col] = p.coeff(row);
  };
  for (std::size_t j = 0; j < m; ++j) {
    QPoly a = QPoly::monomial(Rational(1), j);
    column(j, a.derivative() * E - a * H);
  }
  for (std::size_t j = 0; j < k; ++j) column(m + j, QPoly::monomial(Rational(1), j) * D);
  std::vector<Rational> rhs(n);
  for (std::size_t row = 0; row < n; ++row) rhs[row] = R.coeff(row);
  auto sol = solve_linear(std::move(mat), std::move(rhs));
  for (std::size_t j = 0; j < k; ++j) {
    if (sgn(sol[m + j]) != 0) return std::nullopt;
  }
  QPoly A(std::vector<Rational>(sol.begin(), sol.begin() + static_cast<std::ptrdiff_t>(m)));
  return poly_part + RatFunc(A, D);
}

std::string RatFunc::to_string(const std::string& var) const {
  if (den_.degree() == 0) return num_.to_string(var);
  return "(" + num_.to_string(var) + ")/(" + den_.to_string(var) + ")";
}

namespace {

class RatParser {
 public:
  RatParser(std::string_view text, const std::string& var) : text_(text), var_(var) {}

  RatFunc parse() {
    RatFunc v = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("cannot parse rational function '" + std::string(text_) + "': " + what);
  }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  RatFunc expr() {
    RatFunc acc = term();
    while (true) {
      if (accept('+')) acc += term();
      else if (accept('-')) acc -= term();
      else return acc;
    }
  }
  RatFunc term() {
    RatFunc acc = unary();
    while (true) {
      if (accept('*')) {
        acc *= unary();
      } else if (accept('/')) {
        RatFunc d = unary();
        if (d.is_zero()) fail("division by zero");
        acc = acc / d;
      } else {
        return acc;
      }
    }
  }
  RatFunc unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }
  RatFunc power() {
    RatFunc b = primary();
    if (!accept('^')) return b;
    bool neg = accept('-');
    Integer n = number();
    if (!n.fits_slong_p() || n > 1000) fail("exponent too large");
    return b.pow(neg ? -n.get_si() : n.get_si());
  }
  Integer number() {
    skip();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    return Integer(std::string(text_.substr(start, pos_ - start)));
  }
  RatFunc primary() {
    skip();
    if (accept('(')) {
      RatFunc v = expr();
      if (!accept(')')) fail("missing ')'");
      return v;
    }
    if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) return RatFunc(Rational(number()));
    if (text_.substr(pos_, var_.size()) == var_) {
      std::size_t end = pos_ + var_.size();
      if (end == text_.size() || !(std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_')) {
        pos_ = end;
        return RatFunc::variable();
      }
    }
    fail("unexpected symbol at position " + std::to_string(pos_));
  }

  std::string_view text_;
  const std::string& var_;
  std::size_t pos_ = 0;
};

}  // namespace

RatFunc parse_ratfunc(std::string_view text, const std::string& var) { return RatParser(text, var).parse(); }

}  // namespace sasano
