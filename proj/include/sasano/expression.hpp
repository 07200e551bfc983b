#pragma once

// Small expression language for reference matrices:
//   sums/products/quotients of integers, named constants, the system variable
//   and parenthesized groups; '^' takes an integer or a parenthesized rational
//   expression. Quotients are only allowed by single-term sums.
//   Examples: "4*alpha^(7/4)", "-12/5*t^(3*g-1)", "lambda1 + 3*tau^(-6)",
//             "sqrt5*(sqrt5+3)/20", "2*i/beta".

#include "sasano/alg_field.hpp"
#include "sasano/matrix.hpp"
#include "sasano/puiseux.hpp"

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sasano {

struct ExprContext {
  TowerPtr tower;
  std::string variable;
  std::map<std::string, AlgNum> constants;
  // name -> (root, k): the name stands for root^k and name^e for root^(k e).
  std::map<std::string, std::pair<AlgNum, Rational>> radicals;
  std::map<std::string, Rational> parameters;

  ExprContext with_variable(std::string v) const {
    ExprContext c = *this;
    c.variable = std::move(v);
    return c;
  }
  ExprContext& bind(const std::string& name, const AlgNum& value) {
    constants.insert_or_assign(name, value);
    return *this;
  }
};

// Aliases alpha, sqrt5, i, beta, beta_plus (= sqrt(6 sqrt5 + 10)) plus the
// tower generators, for either built-in tower.
ExprContext standard_context(const TowerPtr& tower, std::string variable);

PuiseuxPoly parse_puiseux(std::string_view text, const ExprContext& ctx);
AlgNum parse_constant(std::string_view text, const ExprContext& ctx);
Matrix<PuiseuxPoly> parse_matrix(const std::vector<std::vector<std::string>>& rows, const ExprContext& ctx);

}  // namespace sasano
