#include "sasano/expression.hpp"

#include "sasano/errors.hpp"

#include <cctype>

namespace sasano {

namespace {

class Parser {
 public:
  Parser(std::string_view text, const ExprContext& ctx) : text_(text), ctx_(ctx) {}

  PuiseuxPoly parse() {
    PuiseuxPoly v = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return v;
  }

 private:
  enum class Kind { Plain, Variable, Radical };
  struct Value {
    PuiseuxPoly p;
    Kind kind = Kind::Plain;
    AlgNum root;
    Rational root_power;
  };

  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("cannot parse '" + std::string(text_) + "' at position " + std::to_string(pos_) + ": " + what);
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

  PuiseuxPoly constant(const Rational& q) const { return PuiseuxPoly(AlgNum(ctx_.tower, q)); }

  PuiseuxPoly expr() {
    PuiseuxPoly acc = term();
    while (true) {
      if (accept('+')) acc += term();
      else if (accept('-')) acc -= term();
      else return acc;
    }
  }

  PuiseuxPoly term() {
    PuiseuxPoly acc = unary();
    while (true) {
      if (accept('*')) {
        acc = acc * unary();
      } else if (accept('/')) {
        PuiseuxPoly d = unary();
        if (d.is_zero()) fail("division by zero");
        if (!d.is_monomial()) fail("division by a sum");
        acc = acc * d.monomial_inverse();
      } else {
        return acc;
      }
    }
  }

  PuiseuxPoly unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Rational exponent() {
    skip();
    bool neg = accept('-');
    PuiseuxPoly e(ctx_.tower);
    skip();
    if (accept('(')) {
      e = expr();
      if (!accept(')')) fail("missing ')'");
    } else {
      e = constant(integer());
    }
    if (!e.is_constant()) fail("exponent depends on the variable");
    auto q = e.coefficient(Rational(0)).rational_value();
    if (!q) fail("exponent is not rational");
    return neg ? Rational(-*q) : *q;
  }

  PuiseuxPoly power() {
    Value base = primary();
    if (!accept('^')) return base.p;
    Rational e = exponent();
    switch (base.kind) {
      case Kind::Variable:
        return PuiseuxPoly(AlgNum(ctx_.tower, 1), e);
      case Kind::Radical: {
        Rational k = base.root_power * e;
        if (!is_integer(k)) fail("fractional power is not an integral power of the underlying root");
        return PuiseuxPoly(base.root.pow(k.get_num().get_si()));
      }
      case Kind::Plain:
        break;
    }
    if (!is_integer(e)) fail("fractional power of a compound expression");
    long n = e.get_num().get_si();
    PuiseuxPoly b = base.p;
    if (n < 0) {
      if (!b.is_monomial()) fail("negative power of a sum");
      b = b.monomial_inverse();
      n = -n;
    }
    PuiseuxPoly out = constant(Rational(1));
    for (long k = 0; k < n; ++k) out = out * b;
    return out;
  }

  Rational integer() {
    skip();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    return Rational(Integer(std::string(text_.substr(start, pos_ - start))));
  }

  Value primary() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      PuiseuxPoly v = expr();
      if (!accept(')')) fail("missing ')'");
      return Value{v, Kind::Plain, AlgNum(ctx_.tower), Rational(0)};
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      return Value{constant(integer()), Kind::Plain, AlgNum(ctx_.tower), Rational(0)};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      std::string name(text_.substr(start, pos_ - start));
      if (name == ctx_.variable) {
        return Value{PuiseuxPoly(AlgNum(ctx_.tower, 1), Rational(1)), Kind::Variable, AlgNum(ctx_.tower),
                     Rational(0)};
      }
      if (auto it = ctx_.radicals.find(name); it != ctx_.radicals.end()) {
        const auto& [root, k] = it->second;
        if (!is_integer(k)) fail("radical alias with fractional base power");
        AlgNum r = root.lifted(ctx_.tower);
        return Value{PuiseuxPoly(r.pow(k.get_num().get_si())), Kind::Radical, r, k};
      }
      if (auto it = ctx_.constants.find(name); it != ctx_.constants.end()) {
        return Value{PuiseuxPoly(it->second.lifted(ctx_.tower)), Kind::Plain, AlgNum(ctx_.tower), Rational(0)};
      }
      if (auto it = ctx_.parameters.find(name); it != ctx_.parameters.end()) {
        return Value{constant(it->second), Kind::Plain, AlgNum(ctx_.tower), Rational(0)};
      }
      fail("unknown symbol '" + name + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  const ExprContext& ctx_;
  std::size_t pos_ = 0;
};

}  // namespace

ExprContext standard_context(const TowerPtr& tower, std::string variable) {
  ExprContext ctx;
  ctx.tower = tower;
  ctx.variable = std::move(variable);
  for (std::size_t k = 0; k < tower->level_count(); ++k) {
    AlgNum g = AlgNum::generator(tower, k);
    ctx.radicals.emplace(tower->level(k).name, std::make_pair(g, Rational(1)));
  }
  AlgNum sqrt5(tower);
  if (tower->find_level("gamma")) {
    AlgNum gamma = AlgNum::generator(tower, "gamma");
    ctx.radicals.insert_or_assign("alpha", std::make_pair(gamma, Rational(4)));
    sqrt5 = gamma.pow(6) * Rational(8);
  } else if (tower->find_level("delta")) {
    AlgNum delta = AlgNum::generator(tower, "delta");
    ctx.radicals.insert_or_assign("alpha", std::make_pair(delta, Rational(4)));
    sqrt5 = AlgNum::generator(tower, "s5");
  }
  if (!sqrt5.is_zero()) {
    ctx.constants.insert_or_assign("sqrt5", sqrt5);
    if (tower->find_level("beta")) {
      AlgNum beta = AlgNum::generator(tower, "beta");
      ctx.constants.insert_or_assign("beta_plus", sqrt5 * Rational(4) / beta);
    }
  }
  return ctx;
}

PuiseuxPoly parse_puiseux(std::string_view text, const ExprContext& ctx) { return Parser(text, ctx).parse(); }

AlgNum parse_constant(std::string_view text, const ExprContext& ctx) {
  PuiseuxPoly p = parse_puiseux(text, ctx);
  if (!p.is_constant()) throw InputError("'" + std::string(text) + "' is not a constant");
  return p.coefficient(Rational(0));
}

Matrix<PuiseuxPoly> parse_matrix(const std::vector<std::vector<std::string>>& rows, const ExprContext& ctx) {
  if (rows.empty()) throw InputError("empty matrix");
  std::vector<PuiseuxPoly> data;
  for (const auto& r : rows) {
    if (r.size() != rows[0].size()) throw InputError("ragged matrix");
    for (const auto& cell : r) data.push_back(parse_puiseux(cell, ctx));
  }
  return Matrix<PuiseuxPoly>::from_data(rows.size(), rows[0].size(), std::move(data));
}

}  // namespace sasano
