#include "sasano/big_complex.hpp"

#include <algorithm>
#include <cmath>

namespace sasano {

mp_bitcnt_t bits_for_digits(int digits) {
  return static_cast<mp_bitcnt_t>(std::ceil(digits * 3.3219280948873623)) + 64;
}

BigComplex::BigComplex(mp_bitcnt_t precision) : re_(0, precision), im_(0, precision) {}

BigComplex::BigComplex(const mpf_class& re, const mpf_class& im)
    : re_(re, std::max(re.get_prec(), im.get_prec())),
      im_(im, std::max(re.get_prec(), im.get_prec())) {}

BigComplex::BigComplex(std::complex<double> z, mp_bitcnt_t precision)
    : re_(z.real(), precision), im_(z.imag(), precision) {}

BigComplex BigComplex::from_rational(const Rational& q, mp_bitcnt_t precision) {
  BigComplex z(precision);
  z.re_ = q;
  return z;
}

BigComplex& BigComplex::operator+=(const BigComplex& o) {
  if (o.precision() > precision()) {
    re_.set_prec(o.precision());
    im_.set_prec(o.precision());
  }
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

BigComplex& BigComplex::operator-=(const BigComplex& o) {
  if (o.precision() > precision()) {
    re_.set_prec(o.precision());
    im_.set_prec(o.precision());
  }
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

BigComplex& BigComplex::operator*=(const BigComplex& o) {
  mp_bitcnt_t p = std::max(precision(), o.precision());
  mpf_class re(0, p), im(0, p);
  re = re_ * o.re_ - im_ * o.im_;
  im = re_ * o.im_ + im_ * o.re_;
  re_.set_prec(p);
  im_.set_prec(p);
  re_ = re;
  im_ = im;
  return *this;
}

BigComplex& BigComplex::operator/=(const BigComplex& o) {
  mp_bitcnt_t p = std::max(precision(), o.precision());
  mpf_class den(0, p), re(0, p), im(0, p);
  den = o.re_ * o.re_ + o.im_ * o.im_;
  re = (re_ * o.re_ + im_ * o.im_) / den;
  im = (im_ * o.re_ - re_ * o.im_) / den;
  re_.set_prec(p);
  im_.set_prec(p);
  re_ = re;
  im_ = im;
  return *this;
}

BigComplex BigComplex::operator-() const {
  BigComplex z(precision());
  z.re_ = -re_;
  z.im_ = -im_;
  return z;
}

mpf_class BigComplex::abs() const {
  mpf_class r(0, precision());
  r = sqrt(re_ * re_ + im_ * im_);
  return r;
}

std::complex<double> BigComplex::to_complex() const { return {re_.get_d(), im_.get_d()}; }

std::string format_float(const mpf_class& x, int digits) {
  if (sgn(x) == 0) return "0";
  mp_exp_t exp = 0;
  std::string mant = x.get_str(exp, 10, static_cast<std::size_t>(digits));
  std::string sign;
  if (!mant.empty() && mant[0] == '-') {
    sign = "-";
    mant.erase(0, 1);
  }
  std::string out = sign + mant.substr(0, 1);
  if (mant.size() > 1) out += "." + mant.substr(1);
  long e = static_cast<long>(exp) - 1;
  out += (e < 0 ? "e-" : "e+") + std::to_string(e < 0 ? -e : e);
  return out;
}

std::string BigComplex::to_string(int digits) const {
  std::string re = format_float(re_, digits);
  if (sgn(im_) == 0) return re;
  mpf_class mag(0, precision());
  mag = ::abs(im_);
  std::string im = format_float(mag, digits);
  if (sgn(re_) == 0) return (sgn(im_) < 0 ? "-" : "") + im + "*i";
  return re + (sgn(im_) < 0 ? " - " : " + ") + im + "*i";
}

}  // namespace sasano
