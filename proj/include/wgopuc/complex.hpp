#pragma once

#include <ostream>
#include <utility>

#include "wgopuc/real.hpp"

namespace wgopuc {

// Complex number over Real. No libmpc in this toolchain, so the layer is a
// plain cartesian pair; precision propagates through Real's rules.
class Complex {
 public:
  Real re, im;

  Complex() = default;
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  Complex(long r, mpfr_prec_t prec) : re(r, prec), im(Real(prec)) {}
  Complex(double r, double i, mpfr_prec_t prec) : re(r, prec), im(i, prec) {}
  explicit Complex(Real r) : re(std::move(r)), im(Real(re.prec())) {}

  static Complex zero(mpfr_prec_t prec) { return Complex(0, prec); }
  static Complex one(mpfr_prec_t prec) { return Complex(1, prec); }

  bool is_zero() const { return re.is_zero() && im.is_zero(); }

  friend Complex operator+(const Complex& a, const Complex& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend Complex operator-(const Complex& a, const Complex& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Complex operator/(const Complex& a, const Complex& b) {
    Real n = norm(b);
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
  }

  friend Complex operator+(const Complex& a, const Real& b) { return {a.re + b, a.im}; }
  friend Complex operator-(const Complex& a, const Real& b) { return {a.re - b, a.im}; }
  friend Complex operator*(const Complex& a, const Real& b) { return {a.re * b, a.im * b}; }
  friend Complex operator*(const Real& a, const Complex& b) { return b * a; }
  friend Complex operator/(const Complex& a, const Real& b) { return {a.re / b, a.im / b}; }

  friend Complex operator-(long a, const Complex& b) { return {a - b.re, -b.im}; }
  friend Complex operator-(const Complex& a, long b) { return {a.re - b, a.im}; }
  friend Complex operator+(const Complex& a, long b) { return {a.re + b, a.im}; }
  friend Complex operator*(const Complex& a, long b) { return {a.re * b, a.im * b}; }

  Complex operator-() const { return {-re, -im}; }

  Complex& operator+=(const Complex& o) { return *this = *this + o; }
  Complex& operator-=(const Complex& o) { return *this = *this - o; }
  Complex& operator*=(const Complex& o) { return *this = *this * o; }
  Complex& operator/=(const Complex& o) { return *this = *this / o; }

  friend Complex conj(const Complex& a) { return {a.re, -a.im}; }
  // |a|^2
  friend Real norm(const Complex& a) { return sqr(a.re) + sqr(a.im); }
  friend Real abs(const Complex& a) { return hypot(a.re, a.im); }

  friend std::ostream& operator<<(std::ostream& os, const Complex& a) {
    return os << "(" << a.re << ", " << a.im << ")";
  }
};

inline Real dist(const Complex& a, const Complex& b) { return abs(a - b); }

// 1/z without a divisor guard; callers that care use the guarded helpers.
inline Complex recip(const Complex& z) {
  Real n = norm(z);
  return {z.re / n, -z.im / n};
}

// e^{i*angle} at the given precision.
inline Complex unit_from_angle(const Real& angle, mpfr_prec_t prec) {
  Real s(prec), c(prec);
  sin_cos(s, c, angle, prec);
  return {std::move(c), std::move(s)};
}

// Integer power by repeated squaring.
inline Complex pow_si(const Complex& base, long e, mpfr_prec_t prec) {
  if (e == 0) return Complex::one(prec);
  Complex b = e < 0 ? recip(base) : base;
  unsigned long k = e < 0 ? static_cast<unsigned long>(-(e + 1)) + 1UL
                          : static_cast<unsigned long>(e);
  Complex acc = Complex::one(prec);
  while (k > 0) {
    if (k & 1UL) acc *= b;
    b *= b;
    k >>= 1;
  }
  return acc;
}

}  // namespace wgopuc
