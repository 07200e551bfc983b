#pragma once

#include "sasano/rational.hpp"

#include <complex>
#include <string>

namespace sasano {

// Binary precision large enough to carry `digits` significant decimal digits
// plus guard bits.
mp_bitcnt_t bits_for_digits(int digits);

// Complex number over GMP floats. Precision is fixed at construction; results
// of binary operations take the larger precision of the two operands.
class BigComplex {
 public:
  explicit BigComplex(mp_bitcnt_t precision = 128);
  BigComplex(const mpf_class& re, const mpf_class& im);
  BigComplex(std::complex<double> z, mp_bitcnt_t precision);
  static BigComplex from_rational(const Rational& q, mp_bitcnt_t precision);

  const mpf_class& real() const { return re_; }
  const mpf_class& imag() const { return im_; }
  mp_bitcnt_t precision() const { return re_.get_prec(); }

  BigComplex& operator+=(const BigComplex& o);
  BigComplex& operator-=(const BigComplex& o);
  BigComplex& operator*=(const BigComplex& o);
  BigComplex& operator/=(const BigComplex& o);
  BigComplex operator-() const;

  friend BigComplex operator+(BigComplex a, const BigComplex& b) { return a += b; }
  friend BigComplex operator-(BigComplex a, const BigComplex& b) { return a -= b; }
  friend BigComplex operator*(BigComplex a, const BigComplex& b) { return a *= b; }
  friend BigComplex operator/(BigComplex a, const BigComplex& b) { return a /= b; }

  mpf_class abs() const;
  std::complex<double> to_complex() const;
  // Scientific notation with `digits` significant digits, e.g. "1.2e-1 + 3.0e+0*i".
  std::string to_string(int digits) const;

 private:
  mpf_class re_;
  mpf_class im_;
};

std::string format_float(const mpf_class& x, int digits);

}  // namespace sasano
