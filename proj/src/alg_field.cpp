#include "sasano/alg_field.hpp"

#include "sasano/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sasano {

namespace detail {

using Vec = std::vector<Rational>;

// Re-presentation of a tower whose base level is x^n - r with n = 2^e * m
// (m odd) as Q(c)(th_1)...(th_e)(upper levels), c^m = r, th_1^2 = c,
// th_{l+1}^2 = th_l. Every level above Q(c) is then a pure quadratic, which is
// what the square-root descent needs.
struct SqrtView {
  TowerPtr tower;
  std::vector<std::size_t> to_view;  // base-block permutation, original -> view
  std::size_t block = 1;
  std::string unsupported;            // non-empty when the shape is not handled
};

namespace {

bool block_zero(const Rational* a, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    if (sgn(a[k]) != 0) return false;
  }
  return true;
}

// Arithmetic on flat coordinate blocks of one level of a tower. Level -1 is Q.
class LevelArith {
 public:
  explicit LevelArith(const TowerSpec& tower) : t_(tower) {}

  std::size_t dim(int k) const { return t_.stride(static_cast<std::size_t>(k + 1)); }
  std::size_t degree(int k) const { return t_.level(static_cast<std::size_t>(k)).degree; }

  void mul_into(int k, const Rational* a, const Rational* b, Rational* out) const {
    if (k < 0) {
      out[0] = a[0] * b[0];
      return;
    }
    const std::size_t d = degree(k);
    const std::size_t s = dim(k - 1);
    const auto& poly = t_.level(static_cast<std::size_t>(k)).coeffs;
    Vec prod((2 * d - 1) * s);
    Vec tmp(s);
    for (std::size_t i = 0; i < d; ++i) {
      if (block_zero(a + i * s, s)) continue;
      for (std::size_t j = 0; j < d; ++j) {
        if (block_zero(b + j * s, s)) continue;
        mul_into(k - 1, a + i * s, b + j * s, tmp.data());
        Rational* dst = prod.data() + (i + j) * s;
        for (std::size_t q = 0; q < s; ++q) dst[q] += tmp[q];
      }
    }
    for (std::size_t m = 2 * d - 2; m >= d; --m) {
      const Rational* top = prod.data() + m * s;
      if (block_zero(top, s)) continue;
      for (std::size_t j = 0; j < d; ++j) {
        if (block_zero(poly[j].data(), s)) continue;
        mul_into(k - 1, top, poly[j].data(), tmp.data());
        Rational* dst = prod.data() + (m - d + j) * s;
        for (std::size_t q = 0; q < s; ++q) dst[q] -= tmp[q];
      }
    }
    std::copy(prod.begin(), prod.begin() + static_cast<std::ptrdiff_t>(d * s), out);
  }

  Vec mul(int k, const Vec& a, const Vec& b) const {
    Vec out(dim(k));
    mul_into(k, a.data(), b.data(), out.data());
    return out;
  }

  Vec add(const Vec& a, const Vec& b) const {
    Vec out(a);
    for (std::size_t q = 0; q < out.size(); ++q) out[q] += b[q];
    return out;
  }

  Vec sub(const Vec& a, const Vec& b) const {
    Vec out(a);
    for (std::size_t q = 0; q < out.size(); ++q) out[q] -= b[q];
    return out;
  }

  Vec scale(const Vec& a, const Rational& c) const {
    Vec out(a);
    for (auto& x : out) x *= c;
    return out;
  }

  Vec one(int k) const {
    Vec out(dim(k));
    out[0] = 1;
    return out;
  }

  static bool zero(const Vec& a) { return block_zero(a.data(), a.size()); }

  // Inverse via the extended Euclidean algorithm in K[x], K = level k-1.
  Vec inv(int k, const Vec& a) const {
    if (zero(a)) throw DivisionByZero();
    if (k < 0) return Vec{Rational(1) / a[0]};
    const std::size_t d = degree(k);
    const std::size_t s = dim(k - 1);
    const auto& defining = t_.level(static_cast<std::size_t>(k)).coeffs;
    if (d == 2 && zero(defining[1])) {
      // (p + q g)^-1 = (p - q g) / (p^2 + c0 q^2)
      Vec p(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(s));
      Vec q(a.begin() + static_cast<std::ptrdiff_t>(s), a.end());
      Vec norm = add(mul(k - 1, p, p), mul(k - 1, defining[0], mul(k - 1, q, q)));
      Vec ninv = inv(k - 1, norm);
      Vec out = mul(k - 1, p, ninv);
      Vec qn = scale(mul(k - 1, q, ninv), Rational(-1));
      out.insert(out.end(), qn.begin(), qn.end());
      return out;
    }
    using Poly = std::vector<Vec>;
    auto trim = [](Poly& p) {
      while (!p.empty() && zero(p.back())) p.pop_back();
    };
    Poly r0;
    for (std::size_t j = 0; j < d; ++j) r0.push_back(t_.level(static_cast<std::size_t>(k)).coeffs[j]);
    r0.push_back(one(k - 1));
    Poly r1;
    for (std::size_t j = 0; j < d; ++j) r1.emplace_back(a.begin() + j * s, a.begin() + (j + 1) * s);
    trim(r1);
    Poly s0;
    Poly s1{one(k - 1)};
    auto poly_sub_mul = [&](const Poly& x, const Poly& q, const Poly& y) {
      // x - q*y
      Poly out(std::max(x.size(), q.empty() || y.empty() ? 0 : q.size() + y.size() - 1), Vec(s));
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i];
      for (std::size_t i = 0; i < q.size(); ++i) {
        for (std::size_t j = 0; j < y.size(); ++j) {
          out[i + j] = sub(out[i + j], mul(k - 1, q[i], y[j]));
        }
      }
      trim(out);
      return out;
    };
    while (r1.size() > 1) {
      // divmod r0 by r1
      Poly rem = r0;
      Poly quot(r0.size() >= r1.size() ? r0.size() - r1.size() + 1 : 0, Vec(s));
      Vec lead_inv = inv(k - 1, r1.back());
      while (rem.size() >= r1.size()) {
        std::size_t shift = rem.size() - r1.size();
        Vec c = mul(k - 1, rem.back(), lead_inv);
        quot[shift] = c;
        for (std::size_t j = 0; j < r1.size(); ++j) {
          rem[shift + j] = sub(rem[shift + j], mul(k - 1, c, r1[j]));
        }
        rem.pop_back();
        trim(rem);
      }
      trim(quot);
      Poly s2 = poly_sub_mul(s0, quot, s1);
      r0 = std::move(r1);
      r1 = std::move(rem);
      s0 = std::move(s1);
      s1 = std::move(s2);
      if (r1.empty()) {
        throw std::domain_error("defining polynomial of level '" +
                                t_.level(static_cast<std::size_t>(k)).name +
                                "' is reducible: element shares a factor with it");
      }
    }
    Vec cinv = inv(k - 1, r1[0]);
    Vec out(dim(k));
    for (std::size_t j = 0; j < s1.size() && j < d; ++j) {
      Vec c = mul(k - 1, s1[j], cinv);
      std::copy(c.begin(), c.end(), out.begin() + static_cast<std::ptrdiff_t>(j * s));
    }
    return out;
  }

 private:
  const TowerSpec& t_;
};

BigComplex embed_block(const std::vector<BigComplex>& roots, const TowerSpec& t, int k,
                       const Rational* a, mp_bitcnt_t prec) {
  if (k < 0) return BigComplex::from_rational(a[0], prec);
  const std::size_t d = t.level(static_cast<std::size_t>(k)).degree;
  const std::size_t s = t.stride(static_cast<std::size_t>(k));
  BigComplex acc(prec);
  for (std::size_t i = d; i-- > 0;) {
    acc *= roots[static_cast<std::size_t>(k)];
    if (!block_zero(a + i * s, s)) acc += embed_block(roots, t, k - 1, a + i * s, prec);
  }
  return acc;
}

bool is_pth_power(const Rational& a, unsigned long p) {
  if (sgn(a) < 0 && p % 2 == 0) return false;
  Integer num = abs(a.get_num());
  Integer den = a.get_den();
  return mpz_root(Integer().get_mpz_t(), num.get_mpz_t(), p) != 0 &&
         mpz_root(Integer().get_mpz_t(), den.get_mpz_t(), p) != 0;
}

// x^n - a irreducible over Q (Capelli): a is not a p-th power for any prime
// p | n, and a is not -4 b^4 when 4 | n.
bool binomial_irreducible(std::size_t n, const Rational& a) {
  std::size_t m = n;
  for (std::size_t p = 2; p <= m; ++p) {
    if (m % p != 0) continue;
    while (m % p == 0) m /= p;
    if (is_pth_power(a, p)) return false;
  }
  if (n % 4 == 0) {
    Rational b4 = -a / 4;
    if (sgn(b4) > 0 && is_pth_power(b4, 4)) return false;
  }
  return true;
}

bool level_is_binomial_over_q(const TowerSpec& t, std::size_t k) {
  if (k != 0) return false;
  const auto& lv = t.level(0);
  for (std::size_t j = 1; j < lv.degree; ++j) {
    if (sgn(lv.coeffs[j][0]) != 0) return false;
  }
  return true;
}

// The m roots of x^m - r, index 0 the real one and index m-j the complex
// conjugate of index j.
std::vector<BigComplex> binomial_roots(std::size_t m, const Rational& r, mp_bitcnt_t prec) {
  const long double pi = 3.141592653589793238462643383279502884L;
  const long double rho = std::pow(std::fabs(static_cast<long double>(r.get_d())), 1.0L / m);
  const long double sign = sgn(r) < 0 ? -1.0L : 1.0L;
  BigComplex rr = BigComplex::from_rational(r, prec);
  mpf_class tol(1, prec);
  mpf_div_2exp(tol.get_mpf_t(), tol.get_mpf_t(), prec - 16);
  std::vector<BigComplex> out;
  for (std::size_t j = 0; j < m; ++j) {
    std::complex<long double> z0 = sign * std::polar(rho, 2.0L * pi * static_cast<long double>(j) / m);
    BigComplex x(std::complex<double>(static_cast<double>(z0.real()), static_cast<double>(z0.imag())), prec);
    for (int it = 0; it < 200; ++it) {
      BigComplex p = BigComplex::from_rational(1, prec);
      for (std::size_t e = 0; e + 1 < m; ++e) p *= x;
      BigComplex f = p * x - rr;
      BigComplex delta = f / (p * BigComplex::from_rational(static_cast<long>(m), prec));
      x -= delta;
      if (delta.abs() <= tol) break;
    }
    out.push_back(x);
  }
  return out;
}

BigComplex complex_sqrt(const BigComplex& z) {
  const mp_bitcnt_t prec = z.precision();
  mpf_class mod = z.abs();
  mpf_class re(0, prec), im(0, prec);
  mpf_class t1(0, prec), t2(0, prec);
  t1 = (mod + z.real()) / 2;
  t2 = (mod - z.real()) / 2;
  if (sgn(t1) > 0) re = sqrt(t1);
  if (sgn(t2) > 0) im = sqrt(t2);
  if (sgn(z.imag()) < 0) im = -im;
  return BigComplex(re, im);
}

// Continued-fraction recognition of a rational carried to `prec` bits.
std::optional<Rational> recognize_rational(const mpf_class& value, mp_bitcnt_t prec) {
  mpf_class v(value, prec);
  mpf_class tol(1, prec);
  mpf_class mag = abs(value);
  if (mag < 1) mag = 1;
  mpf_div_2exp(tol.get_mpf_t(), tol.get_mpf_t(), prec - 48);
  tol *= mag;
  Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (std::size_t it = 0; it < prec; ++it) {
    mpf_class fl(0, prec);
    mpf_floor(fl.get_mpf_t(), v.get_mpf_t());
    Integer ai(fl);
    Integer p2 = ai * p1 + p0, q2 = ai * q1 + q0;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    mpf_class approx(p1, prec);
    approx /= mpf_class(q1, prec);
    if (abs(approx - value) <= tol) {
      Rational out(p1, q1);
      out.canonicalize();
      return out;
    }
    mpf_class frac = v - fl;
    if (sgn(frac) == 0) return std::nullopt;
    v = 1 / frac;
  }
  return std::nullopt;
}

// Square root in Q(c), c^m = r, m odd.
std::optional<Vec> sqrt_odd_base(const TowerSpec& v, const Vec& a) {
  const auto& lv = v.level(0);
  const std::size_t m = lv.degree;
  const Rational r = -lv.coeffs[0][0];
  std::vector<std::size_t> support;
  for (std::size_t k = 0; k < m; ++k) {
    if (sgn(a[k]) != 0) support.push_back(k);
  }
  if (support.empty()) return Vec(m);
  if (support.size() == 1) {
    // c_k * c^k is a square iff c_k (k even) or c_k / r (k odd) is a rational
    // square, since m is odd.
    std::size_t k = support[0];
    Vec out(m);
    if (k % 2 == 0) {
      auto q = rational_sqrt(a[k]);
      if (!q) return std::nullopt;
      out[k / 2] = *q;
    } else {
      auto q = rational_sqrt(a[k] / r);
      if (!q) return std::nullopt;
      out[(k + m) / 2] = *q;
    }
    return out;
  }
  // Square roots of the real-embedded conjugates, with signs chosen
  // consistently on complex-conjugate pairs; the coordinates then follow from
  // the inverse of the Vandermonde map and are recognised as rationals.
  std::size_t bits = 0;
  for (const auto& q : a) {
    bits = std::max(bits, mpz_sizeinbase(q.get_num_mpz_t(), 2) + mpz_sizeinbase(q.get_den_mpz_t(), 2));
  }
  const std::size_t rbits = mpz_sizeinbase(r.get_num_mpz_t(), 2) + mpz_sizeinbase(r.get_den_mpz_t(), 2);
  const mp_bitcnt_t prec = 2 * bits + 8 * m * rbits + 192;
  const auto conj = binomial_roots(m, r, prec);
  std::vector<BigComplex> sa;
  for (const auto& cj : conj) {
    BigComplex acc(prec);
    for (std::size_t k = m; k-- > 0;) {
      acc *= cj;
      acc += BigComplex::from_rational(a[k], prec);
    }
    sa.push_back(acc);
  }
  if (sgn(sa[0].real()) < 0) return std::nullopt;
  std::vector<BigComplex> roots;
  for (const auto& z : sa) roots.push_back(complex_sqrt(z));
  std::vector<BigComplex> inv_conj;
  for (const auto& cj : conj) inv_conj.push_back(BigComplex::from_rational(1, prec) / cj);
  const std::size_t half = (m - 1) / 2;
  LevelArith ar(v);
  for (std::size_t mask = 0; mask < (std::size_t{1} << half); ++mask) {
    std::vector<BigComplex> s(m, BigComplex(prec));
    s[0] = roots[0];
    for (std::size_t j = 1; j <= half; ++j) {
      s[j] = ((mask >> (j - 1)) & 1U) ? -roots[j] : roots[j];
      s[m - j] = BigComplex(s[j].real(), -s[j].imag());
    }
    Vec x(m);
    bool ok = true;
    for (std::size_t k = 0; k < m && ok; ++k) {
      BigComplex acc(prec);
      for (std::size_t j = 0; j < m; ++j) {
        BigComplex term = s[j];
        for (std::size_t e = 0; e < k; ++e) term *= inv_conj[j];
        acc += term;
      }
      auto q = recognize_rational(acc.real() / static_cast<unsigned long>(m), prec);
      if (!q) ok = false;
      else x[k] = *q;
    }
    if (ok && ar.mul(0, x, x) == a) return x;
  }
  return std::nullopt;
}

std::optional<Vec> sqrt_rec(const TowerSpec& v, int k, const Vec& a) {
  if (k < 0) {
    auto q = rational_sqrt(a[0]);
    if (!q) return std::nullopt;
    return Vec{*q};
  }
  LevelArith ar(v);
  if (LevelArith::zero(a)) return Vec(ar.dim(k));
  const auto& lv = v.level(static_cast<std::size_t>(k));
  if (lv.degree == 2) {
    if (!LevelArith::zero(lv.coeffs[1])) {
      throw std::domain_error("square root descent needs pure quadratic levels (level '" + lv.name + "')");
    }
    const std::size_t s = ar.dim(k - 1);
    Vec d = ar.scale(lv.coeffs[0], Rational(-1));
    Vec p(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(s));
    Vec q(a.begin() + static_cast<std::ptrdiff_t>(s), a.end());
    auto join = [&](const Vec& x, const Vec& y) {
      Vec out(x);
      out.insert(out.end(), y.begin(), y.end());
      return out;
    };
    if (LevelArith::zero(q)) {
      if (auto x = sqrt_rec(v, k - 1, p)) return join(*x, Vec(s));
      if (auto y = sqrt_rec(v, k - 1, ar.mul(k - 1, p, ar.inv(k - 1, d)))) return join(Vec(s), *y);
      return std::nullopt;
    }
    // (x + y g)^2 = p + q g  =>  x^2 = (p +- n)/2 with n^2 = p^2 - d q^2, y = q/(2x).
    Vec norm = ar.sub(ar.mul(k - 1, p, p), ar.mul(k - 1, d, ar.mul(k - 1, q, q)));
    auto n = sqrt_rec(v, k - 1, norm);
    if (!n) return std::nullopt;
    for (int sign : {1, -1}) {
      Vec x2 = ar.scale(sign > 0 ? ar.add(p, *n) : ar.sub(p, *n), Rational(1, 2));
      auto x = sqrt_rec(v, k - 1, x2);
      if (!x || LevelArith::zero(*x)) continue;
      Vec y = ar.mul(k - 1, q, ar.inv(k - 1, ar.scale(*x, Rational(2))));
      Vec cand = join(*x, y);
      if (ar.mul(k, cand, cand) == a) return cand;
    }
    return std::nullopt;
  }
  if (k == 0 && lv.degree % 2 == 1 && level_is_binomial_over_q(v, 0)) return sqrt_odd_base(v, a);
  throw std::domain_error("square root descent does not handle level '" + lv.name + "'");
}

std::vector<std::complex<double>> all_roots(const std::vector<std::complex<double>>& coeffs) {
  // Durand-Kerner on the monic polynomial x^d + sum coeffs[j] x^j.
  const std::size_t d = coeffs.size();
  double bound = 1.0;
  for (const auto& c : coeffs) bound = std::max(bound, 1.0 + std::abs(c));
  std::vector<std::complex<double>> z(d);
  const std::complex<double> seed(0.4, 0.9);
  for (std::size_t j = 0; j < d; ++j) z[j] = bound * std::pow(seed, static_cast<int>(j)) / std::abs(std::pow(seed, static_cast<int>(j)) + 1e-300) * 0.5;
  auto eval = [&](std::complex<double> x) {
    std::complex<double> p = 1.0;
    for (std::size_t j = d; j-- > 0;) p = p * x + coeffs[j];
    return p;
  };
  for (int it = 0; it < 2000; ++it) {
    double change = 0;
    for (std::size_t j = 0; j < d; ++j) {
      std::complex<double> den = 1.0;
      for (std::size_t l = 0; l < d; ++l) {
        if (l != j) den *= (z[j] - z[l]);
      }
      std::complex<double> delta = eval(z[j]) / den;
      z[j] -= delta;
      change = std::max(change, std::abs(delta));
    }
    if (change < 1e-15) break;
  }
  return z;
}

}  // namespace
}  // namespace detail

using detail::LevelArith;
using detail::Vec;

bool TowerSelfCheck::ok() const {
  return std::all_of(levels.begin(), levels.end(), [](const LevelCheck& c) {
    return c.simple_root && c.isolated && c.irreducible.value_or(true);
  });
}

TowerPtr TowerSpec::rationals() {
  static const TowerPtr q(new TowerSpec());
  return q;
}

TowerPtr TowerSpec::extend(std::string name, const std::vector<AlgNum>& coeffs,
                           std::complex<double> approx) const {
  if (coeffs.size() < 2) throw InputError("defining polynomial of '" + name + "' must have degree >= 2");
  auto self = shared_from_this();
  std::shared_ptr<TowerSpec> next(new TowerSpec());
  next->levels_ = levels_;
  next->strides_ = strides_;
  next->parent_ = self;
  Level lv;
  lv.name = std::move(name);
  lv.degree = coeffs.size();
  lv.approx = approx;
  for (const auto& c : coeffs) {
    if (c.tower() != self) throw TowerMismatch();
    lv.coeffs.emplace_back(c.coeffs().begin(), c.coeffs().end());
  }
  next->levels_.push_back(std::move(lv));
  next->strides_.push_back(strides_.back() * coeffs.size());
  return next;
}

TowerPtr TowerSpec::prefix(std::size_t count) const {
  if (count > levels_.size()) throw std::out_of_range("prefix longer than tower");
  TowerPtr p = shared_from_this();
  while (p->level_count() > count) p = p->parent_;
  return p;
}

std::optional<std::size_t> TowerSpec::find_level(std::string_view name) const {
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    if (levels_[k].name == name) return k;
  }
  return std::nullopt;
}

std::vector<BigComplex> TowerSpec::root_values(int digits) const {
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = root_cache_.find(digits);
    if (it != root_cache_.end()) return it->second;
  }
  const mp_bitcnt_t prec = bits_for_digits(digits);
  std::vector<BigComplex> roots;
  mpf_class tol(1, prec);
  mpf_div_2exp(tol.get_mpf_t(), tol.get_mpf_t(), prec - 16);
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    const auto& lv = levels_[k];
    std::vector<BigComplex> c;
    for (const auto& coeff : lv.coeffs) {
      c.push_back(detail::embed_block(roots, *this, static_cast<int>(k) - 1, coeff.data(), prec));
    }
    BigComplex x(lv.approx, prec);
    for (int it = 0; it < 400; ++it) {
      BigComplex p(prec), dp(prec);
      p = BigComplex::from_rational(1, prec);
      for (std::size_t j = lv.degree; j-- > 0;) {
        dp = dp * x + p;
        p = p * x + c[j];
      }
      BigComplex delta = p / dp;
      x -= delta;
      mpf_class scale(1, prec);
      mpf_class ax = x.abs();
      if (ax > scale) scale = ax;
      if (delta.abs() <= tol * scale) break;
    }
    roots.push_back(x);
  }
  std::lock_guard<std::mutex> lock(cache_mutex_);
  root_cache_.emplace(digits, roots);
  return roots;
}

const detail::SqrtView& sqrt_view_of(const TowerSpec& tower) {
  std::lock_guard<std::mutex> lock(tower.cache_mutex_);
  if (tower.sqrt_view_) return *tower.sqrt_view_;
  auto view = std::make_shared<detail::SqrtView>();
  const std::size_t dim = tower.dimension();
  if (tower.level_count() == 0 || !detail::level_is_binomial_over_q(tower, 0)) {
    view->tower = tower.shared_from_this();
    view->block = 1;
    view->to_view = {0};
    if (tower.level_count() != 0) view->unsupported = "base level is not a binomial over Q";
    tower.sqrt_view_ = view;
    return *view;
  }
  const auto& base = tower.level(0);
  const std::size_t n = base.degree;
  std::size_t e = 0, m = n;
  while (m % 2 == 0) {
    m /= 2;
    ++e;
  }
  const Rational r = -base.coeffs[0][0];
  view->block = n;
  view->to_view.resize(n);
  for (std::size_t k0 = 0; k0 < n; ++k0) {
    std::size_t j = k0 >> e;
    std::size_t idx = 0;
    for (std::size_t l = 1; l <= e; ++l) {
      std::size_t bit = (k0 >> (e - l)) & 1U;
      idx += bit << (l - 1);
    }
    view->to_view[k0] = j + m * idx;
  }
  auto permute = [&](const Vec& flat) {
    Vec out(flat.size());
    for (std::size_t q = 0; q < flat.size(); ++q) {
      out[view->to_view[q % n] + n * (q / n)] = flat[q];
    }
    return out;
  };
  TowerPtr v = TowerSpec::rationals();
  const std::complex<double> z = base.approx;
  if (m > 1) {
    std::vector<AlgNum> c(m, AlgNum(v));
    c[0] = AlgNum(v, -r);
    v = v->extend(base.name + "^" + std::to_string(1U << e), c, std::pow(z, static_cast<int>(1U << e)));
  }
  for (std::size_t l = 1; l <= e; ++l) {
    std::vector<AlgNum> c(2, AlgNum(v));
    if (v->level_count() == 0) {
      c[0] = AlgNum(v, -r);
    } else {
      c[0] = -AlgNum::generator(v, v->level_count() - 1);
    }
    v = v->extend(base.name + "^" + std::to_string(1U << (e - l)), c, std::pow(z, static_cast<int>(1U << (e - l))));
  }
  for (std::size_t k = 1; k < tower.level_count(); ++k) {
    const auto& lv = tower.level(k);
    std::vector<AlgNum> c;
    for (const auto& coeff : lv.coeffs) c.emplace_back(v, permute(coeff));
    v = v->extend(lv.name, c, lv.approx);
  }
  (void)dim;
  view->tower = v;
  tower.sqrt_view_ = view;
  return *view;
}

TowerSelfCheck TowerSpec::self_check() const {
  TowerSelfCheck report;
  auto roots = root_values(30);
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    const auto& lv = levels_[k];
    TowerSelfCheck::LevelCheck chk;
    chk.name = lv.name;
    std::vector<std::complex<double>> c;
    for (const auto& coeff : lv.coeffs) {
      c.push_back(detail::embed_block(roots, *this, static_cast<int>(k) - 1, coeff.data(), 128).to_complex());
    }
    const std::complex<double> root = roots[k].to_complex();
    std::complex<double> p = 1.0, dp = 0.0;
    for (std::size_t j = lv.degree; j-- > 0;) {
      dp = dp * root + p;
      p = p * root + c[j];
    }
    double scale = 1.0;
    for (const auto& cj : c) scale = std::max(scale, std::abs(cj));
    chk.simple_root = std::abs(p) < 1e-10 * scale && std::abs(dp) > 1e-8;
    auto others = detail::all_roots(c);
    double sep = INFINITY;
    std::size_t nearest = 0;
    double best = INFINITY;
    for (std::size_t j = 0; j < others.size(); ++j) {
      double dist = std::abs(others[j] - root);
      if (dist < best) {
        best = dist;
        nearest = j;
      }
    }
    for (std::size_t j = 0; j < others.size(); ++j) {
      if (j != nearest) sep = std::min(sep, std::abs(others[j] - root));
    }
    chk.separation = sep;
    chk.isolated = best < 1e-8 && std::abs(lv.approx - root) < sep / 2;
    if (k == 0 && detail::level_is_binomial_over_q(*this, 0)) {
      chk.irreducible = detail::binomial_irreducible(lv.degree, -lv.coeffs[0][0]);
      chk.note = "binomial criterion over Q";
    } else if (lv.degree == 2) {
      auto below = prefix(k);
      AlgNum disc = AlgNum(below, lv.coeffs[1]) * AlgNum(below, lv.coeffs[1]) - AlgNum(below, lv.coeffs[0]) * Rational(4);
      try {
        chk.irreducible = !try_sqrt(disc).has_value();
        chk.note = "discriminant is not a square in the level below";
      } catch (const std::domain_error& err) {
        chk.note = std::string("irreducibility assumed: ") + err.what();
      }
    } else {
      chk.note = "irreducibility assumed";
    }
    report.levels.push_back(chk);
  }
  return report;
}

// ---------------------------------------------------------------------------

AlgNum::AlgNum(TowerPtr tower, const Rational& value) : tower_(std::move(tower)) {
  if (!tower_) throw std::invalid_argument("null tower");
  Vec c(tower_->dimension());
  c[0] = value;
  coeffs_ = std::make_shared<const Vec>(std::move(c));
  rational_ = true;
}

AlgNum::AlgNum(TowerPtr tower, std::vector<Rational> coeffs) : tower_(std::move(tower)) {
  if (!tower_) throw std::invalid_argument("null tower");
  if (coeffs.size() != tower_->dimension()) {
    throw InputError("coordinate vector has " + std::to_string(coeffs.size()) + " entries, tower dimension is " +
                     std::to_string(tower_->dimension()));
  }
  for (auto& q : coeffs) q.canonicalize();
  coeffs_ = std::make_shared<const Vec>(std::move(coeffs));
  refresh();
}

void AlgNum::refresh() {
  rational_ = detail::block_zero(coeffs_->data() + 1, coeffs_->size() - 1);
}

AlgNum AlgNum::generator(const TowerPtr& tower, std::size_t level) {
  if (level >= tower->level_count()) throw std::out_of_range("no such tower level");
  Vec c(tower->dimension());
  c[tower->stride(level)] = 1;
  return AlgNum(tower, std::move(c));
}

AlgNum AlgNum::generator(const TowerPtr& tower, std::string_view name) {
  auto k = tower->find_level(name);
  if (!k) throw InputError("tower has no generator named '" + std::string(name) + "'");
  return generator(tower, *k);
}

bool AlgNum::is_zero() const { return rational_ && sgn((*coeffs_)[0]) == 0; }

std::optional<Rational> AlgNum::rational_value() const {
  if (!rational_) return std::nullopt;
  return (*coeffs_)[0];
}

void AlgNum::check_tower(const AlgNum& o) const {
  if (tower_ != o.tower_) throw TowerMismatch();
}

AlgNum AlgNum::operator-() const {
  Vec c(*coeffs_);
  for (auto& q : c) q = -q;
  return AlgNum(tower_, std::move(c));
}

AlgNum& AlgNum::operator+=(const AlgNum& o) {
  check_tower(o);
  Vec c(*coeffs_);
  for (std::size_t k = 0; k < c.size(); ++k) c[k] += (*o.coeffs_)[k];
  coeffs_ = std::make_shared<const Vec>(std::move(c));
  refresh();
  return *this;
}

AlgNum& AlgNum::operator-=(const AlgNum& o) {
  check_tower(o);
  Vec c(*coeffs_);
  for (std::size_t k = 0; k < c.size(); ++k) c[k] -= (*o.coeffs_)[k];
  coeffs_ = std::make_shared<const Vec>(std::move(c));
  refresh();
  return *this;
}

AlgNum& AlgNum::operator*=(const AlgNum& o) {
  check_tower(o);
  if (o.rational_) return *this = *this * (*o.coeffs_)[0];
  if (rational_) return *this = o * (*coeffs_)[0];
  LevelArith ar(*tower_);
  Vec out = ar.mul(static_cast<int>(tower_->level_count()) - 1, *coeffs_, *o.coeffs_);
  coeffs_ = std::make_shared<const Vec>(std::move(out));
  refresh();
  return *this;
}

AlgNum& AlgNum::operator/=(const AlgNum& o) {
  check_tower(o);
  return *this *= o.inverse();
}

AlgNum operator*(AlgNum a, const Rational& q) {
  Vec c(*a.coeffs_);
  if (sgn(q) == 0) {
    for (auto& x : c) x = 0;
  } else {
    for (auto& x : c) {
      if (sgn(x) != 0) x *= q;
    }
  }
  a.coeffs_ = std::make_shared<const Vec>(std::move(c));
  a.refresh();
  return a;
}

AlgNum operator+(AlgNum a, const Rational& q) {
  Vec c(*a.coeffs_);
  c[0] += q;
  a.coeffs_ = std::make_shared<const Vec>(std::move(c));
  a.refresh();
  return a;
}

AlgNum operator/(AlgNum a, const Rational& q) {
  if (sgn(q) == 0) throw DivisionByZero();
  return std::move(a) * Rational(1 / q);
}

bool operator==(const AlgNum& a, const AlgNum& b) {
  a.check_tower(b);
  return a.coeffs_ == b.coeffs_ || *a.coeffs_ == *b.coeffs_;
}

AlgNum AlgNum::inverse() const {
  if (is_zero()) throw DivisionByZero();
  if (rational_) return AlgNum(tower_, Rational(1 / (*coeffs_)[0]));
  LevelArith ar(*tower_);
  return AlgNum(tower_, ar.inv(static_cast<int>(tower_->level_count()) - 1, *coeffs_));
}

AlgNum AlgNum::pow(long exponent) const {
  if (exponent < 0) return inverse().pow(-exponent);
  AlgNum result(tower_, Rational(1));
  AlgNum base = *this;
  unsigned long e = static_cast<unsigned long>(exponent);
  while (e != 0) {
    if (e & 1U) result *= base;
    e >>= 1U;
    if (e != 0) base *= base;
  }
  return result;
}

AlgNum AlgNum::lifted(const TowerPtr& target) const {
  if (target == tower_) return *this;
  if (target->level_count() < tower_->level_count() || target->prefix(tower_->level_count()) != tower_) {
    throw TowerMismatch();
  }
  Vec c(target->dimension());
  std::copy(coeffs_->begin(), coeffs_->end(), c.begin());
  return AlgNum(target, std::move(c));
}

BigComplex AlgNum::embed(int digits) const {
  const mp_bitcnt_t prec = bits_for_digits(digits);
  if (rational_) return BigComplex::from_rational((*coeffs_)[0], prec);
  auto roots = tower_->root_values(digits);
  return detail::embed_block(roots, *tower_, static_cast<int>(tower_->level_count()) - 1, coeffs_->data(), prec);
}

std::complex<double> AlgNum::approx() const { return embed(20).to_complex(); }

std::string AlgNum::to_string() const {
  std::string out;
  const auto& c = *coeffs_;
  for (std::size_t idx = 0; idx < c.size(); ++idx) {
    if (sgn(c[idx]) == 0) continue;
    std::string mono;
    std::size_t rest = idx;
    for (std::size_t k = 0; k < tower_->level_count(); ++k) {
      std::size_t d = tower_->level(k).degree;
      std::size_t e = rest % d;
      rest /= d;
      if (e == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += tower_->level(k).name;
      if (e > 1) mono += "^" + std::to_string(e);
    }
    Rational mag = abs(c[idx]);
    std::string term;
    if (mono.empty()) {
      term = sasano::to_string(mag);
    } else if (mag == 1) {
      term = mono;
    } else {
      term = sasano::to_string(mag) + "*" + mono;
    }
    if (out.empty()) {
      out = (sgn(c[idx]) < 0 ? "-" : "") + term;
    } else {
      out += (sgn(c[idx]) < 0 ? " - " : " + ") + term;
    }
  }
  return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------------------

AlgNum field_arith(FieldOp op, const AlgNum& a, const AlgNum& b) {
  switch (op) {
    case FieldOp::Add: return a + b;
    case FieldOp::Sub: return a - b;
    case FieldOp::Mul: return a * b;
    case FieldOp::Div: return a / b;
  }
  throw std::invalid_argument("unknown field operation");
}

std::optional<Rational> rational_recognize(const AlgNum& a) { return a.rational_value(); }

BigComplex numeric_embed(const AlgNum& a, int digits) {
  if (digits < 15) throw InputError("numeric embedding precision must be at least 15 digits");
  return a.embed(digits);
}

std::optional<AlgNum> try_sqrt(const AlgNum& a) {
  const auto& tower = *a.tower();
  if (a.is_rational()) {
    // Fast path; still has to consult the tower when the rational is not a square in Q.
    if (auto q = rational_sqrt(*a.rational_value())) return AlgNum(a.tower(), *q);
    if (tower.level_count() == 0) return std::nullopt;
  }
  const auto& view = sqrt_view_of(tower);
  if (!view.unsupported.empty()) throw std::domain_error("square root descent: " + view.unsupported);
  const std::size_t n = view.block;
  Vec mapped(tower.dimension());
  for (std::size_t q = 0; q < mapped.size(); ++q) mapped[view.to_view[q % n] + n * (q / n)] = a.coeffs()[q];
  auto root = detail::sqrt_rec(*view.tower, static_cast<int>(view.tower->level_count()) - 1, mapped);
  if (!root) return std::nullopt;
  Vec back(tower.dimension());
  for (std::size_t q = 0; q < back.size(); ++q) back[q] = (*root)[view.to_view[q % n] + n * (q / n)];
  AlgNum result(a.tower(), std::move(back));
  if (result * result != a) throw std::logic_error("square root descent produced a wrong root");
  return result;
}

AlgNum principal_sqrt(const AlgNum& a) {
  auto r = try_sqrt(a);
  if (!r) throw std::domain_error("element " + a.to_string() + " has no square root in the tower");
  std::complex<double> z = r->approx();
  const double eps = 1e-12 * std::max(1.0, std::abs(z));
  if (z.real() < -eps || (std::abs(z.real()) <= eps && z.imag() < 0)) return -*r;
  return *r;
}

namespace {

TowerPtr checked(TowerPtr t) {
  auto report = t->self_check();
  if (!report.ok()) throw std::logic_error("field tower failed its startup self-check");
  return t;
}

}  // namespace

TowerPtr canonical_tower() {
  static const TowerPtr tower = [] {
    TowerPtr q = TowerSpec::rationals();
    std::vector<AlgNum> g(12, AlgNum(q));
    g[0] = AlgNum(q, Rational(-5, 64));
    TowerPtr t1 = q->extend("gamma", g, {0.80859770158337409, 0.0});
    std::vector<AlgNum> ic{AlgNum(t1, 1), AlgNum(t1, 0)};
    TowerPtr t2 = t1->extend("i", ic, {0.0, 1.0});
    AlgNum gamma = AlgNum::generator(t2, 0);
    AlgNum sqrt5 = gamma.pow(6) * Rational(8);
    std::vector<AlgNum> bc{-(sqrt5 * Rational(6) - Rational(10)), AlgNum(t2, 0)};
    return checked(t2->extend("beta", bc, {1.8483540559229406, 0.0}));
  }();
  return tower;
}

TowerPtr wasow_tower() {
  static const TowerPtr tower = [] {
    TowerPtr q = TowerSpec::rationals();
    std::vector<AlgNum> d(7, AlgNum(q));
    d[0] = AlgNum(q, Rational(-1, 4));
    TowerPtr t1 = q->extend("delta", d, {0.82033535600763793, 0.0});
    TowerPtr t2 = t1->extend("s5", {AlgNum(t1, -5), AlgNum(t1, 0)}, {2.2360679774997897, 0.0});
    TowerPtr t3 = t2->extend("i", {AlgNum(t2, 1), AlgNum(t2, 0)}, {0.0, 1.0});
    AlgNum s5 = AlgNum::generator(t3, 1);
    std::vector<AlgNum> bc{-(s5 * Rational(6) - Rational(10)), AlgNum(t3, 0)};
    return checked(t3->extend("beta", bc, {1.8483540559229406, 0.0}));
  }();
  return tower;
}

}  // namespace sasano
