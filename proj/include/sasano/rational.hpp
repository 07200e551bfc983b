#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace sasano {

using Rational = mpq_class;
using Integer = mpz_class;

// Accepts "p", "-p", "p/q"; the result is canonical.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

// Exact square root of a rational, if it is a perfect square.
std::optional<Rational> rational_sqrt(const Rational& q);

// Mathematical modulus: result in [0, m).
Integer floor_mod(const Integer& a, const Integer& m);

Integer lcm(const Integer& a, const Integer& b);

}  // namespace sasano
