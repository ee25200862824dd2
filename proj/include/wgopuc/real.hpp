#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "wgopuc/errors.hpp"

namespace wgopuc {

inline constexpr mpfr_prec_t kMinPrecisionBits = 64;

// RAII wrapper around mpfr_t. Precision is in binary digits and is explicit
// everywhere; binary operations round to the wider operand's precision
// (MPFR_RNDN), so results never silently lose precision.
class Real {
 public:
  Real() : Real(kMinPrecisionBits) {}

  explicit Real(mpfr_prec_t prec) {
    mpfr_init2(v_, clamp_prec(prec));
    mpfr_set_zero(v_, 1);
  }

  Real(long value, mpfr_prec_t prec) {
    mpfr_init2(v_, clamp_prec(prec));
    mpfr_set_si(v_, value, MPFR_RNDN);
  }

  Real(double value, mpfr_prec_t prec) {
    mpfr_init2(v_, clamp_prec(prec));
    mpfr_set_d(v_, value, MPFR_RNDN);
  }

  Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }

  Real(Real&& o) noexcept {
    mpfr_init2(v_, kMinPrecisionBits);
    mpfr_swap(v_, o.v_);
  }

  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }

  Real& operator=(Real&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }

  ~Real() { mpfr_clear(v_); }

  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_si(v_, rnd); }

  // Scientific notation with a fixed digit count; deterministic for a given
  // value, digit count and mpfr version.
  std::string to_sci(long digits) const {
    int len = mpfr_snprintf(nullptr, 0, "%.*Re", static_cast<int>(digits), v_);
    std::string out(static_cast<size_t>(len), '\0');
    mpfr_snprintf(out.data(), static_cast<size_t>(len) + 1, "%.*Re",
                  static_cast<int>(digits), v_);
    return out;
  }

  static Real from_string(const std::string& s, mpfr_prec_t prec) {
    Real r(prec);
    if (s.empty() || mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0) {
      throw ConfigError("cannot parse real number: '" + s + "'");
    }
    return r;
  }

  static Real pi(mpfr_prec_t prec) {
    Real r(prec);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
  }

  // 2^e, exact.
  static Real two_pow(long e, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set_si_2exp(r.v_, 1, static_cast<mpfr_exp_t>(e), MPFR_RNDN);
    return r;
  }

  static Real infinity(mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set_inf(r.v_, 1);
    return r;
  }

  bool is_finite() const { return mpfr_number_p(v_) != 0; }

  friend Real operator+(const Real& a, const Real& b) {
    Real r(wider(a, b));
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator-(const Real& a, const Real& b) {
    Real r(wider(a, b));
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator*(const Real& a, const Real& b) {
    Real r(wider(a, b));
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator/(const Real& a, const Real& b) {
    Real r(wider(a, b));
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }

  friend Real operator+(const Real& a, long b) {
    Real r(a.prec());
    mpfr_add_si(r.v_, a.v_, b, MPFR_RNDN);
    return r;
  }
  friend Real operator-(const Real& a, long b) {
    Real r(a.prec());
    mpfr_sub_si(r.v_, a.v_, b, MPFR_RNDN);
    return r;
  }
  friend Real operator-(long a, const Real& b) {
    Real r(b.prec());
    mpfr_si_sub(r.v_, a, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator*(const Real& a, long b) {
    Real r(a.prec());
    mpfr_mul_si(r.v_, a.v_, b, MPFR_RNDN);
    return r;
  }
  friend Real operator*(long a, const Real& b) { return b * a; }
  friend Real operator/(const Real& a, long b) {
    Real r(a.prec());
    mpfr_div_si(r.v_, a.v_, b, MPFR_RNDN);
    return r;
  }
  friend Real operator/(long a, const Real& b) {
    Real r(b.prec());
    mpfr_si_div(r.v_, a, b.v_, MPFR_RNDN);
    return r;
  }

  Real operator-() const {
    Real r(prec());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
  }

  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

  friend bool operator<(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) < 0; }
  friend bool operator>(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) > 0; }
  friend bool operator<=(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) <= 0; }
  friend bool operator>=(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) >= 0; }
  friend bool operator==(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) == 0; }

  friend Real abs(const Real& x) {
    Real r(x.prec());
    mpfr_abs(r.v_, x.v_, MPFR_RNDN);
    return r;
  }
  friend Real sqrt(const Real& x) {
    Real r(x.prec());
    mpfr_sqrt(r.v_, x.v_, MPFR_RNDN);
    return r;
  }
  friend Real sqr(const Real& x) {
    Real r(x.prec());
    mpfr_sqr(r.v_, x.v_, MPFR_RNDN);
    return r;
  }
  friend Real floor(const Real& x) {
    Real r(x.prec());
    mpfr_floor(r.v_, x.v_);
    return r;
  }
  friend Real ceil(const Real& x) {
    Real r(x.prec());
    mpfr_ceil(r.v_, x.v_);
    return r;
  }
  // Fractional part with the sign of x (mpfr semantics): frac(-2.3) = -0.3.
  friend Real frac(const Real& x) {
    Real r(x.prec());
    mpfr_frac(r.v_, x.v_, MPFR_RNDN);
    return r;
  }
  friend Real log(const Real& x) {
    Real r(x.prec());
    mpfr_log(r.v_, x.v_, MPFR_RNDN);
    return r;
  }
  friend Real sin(const Real& x) {
    Real r(x.prec());
    mpfr_sin(r.v_, x.v_, MPFR_RNDN);
    return r;
  }
  friend Real cos(const Real& x) {
    Real r(x.prec());
    mpfr_cos(r.v_, x.v_, MPFR_RNDN);
    return r;
  }
  friend Real hypot(const Real& a, const Real& b) {
    Real r(wider(a, b));
    mpfr_hypot(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real pow_si(const Real& base, long e) {
    Real r(base.prec());
    mpfr_pow_si(r.v_, base.v_, e, MPFR_RNDN);
    return r;
  }
  // sin and cos of the same angle, rounded to `prec`.
  friend void sin_cos(Real& s, Real& c, const Real& angle, mpfr_prec_t prec) {
    Real ss(prec), cc(prec);
    mpfr_sin_cos(ss.v_, cc.v_, angle.v_, MPFR_RNDN);
    s = std::move(ss);
    c = std::move(cc);
  }

  friend void swap(Real& a, Real& b) noexcept { mpfr_swap(a.v_, b.v_); }

  friend std::ostream& operator<<(std::ostream& os, const Real& x) {
    return os << x.to_sci(20);
  }

 private:
  static mpfr_prec_t clamp_prec(mpfr_prec_t p) {
    return std::max<mpfr_prec_t>(p, kMinPrecisionBits);
  }
  static mpfr_prec_t wider(const Real& a, const Real& b) {
    return std::max(a.prec(), b.prec());
  }

  mpfr_t v_;
};

inline const Real& max(const Real& a, const Real& b) { return a < b ? b : a; }
inline const Real& min(const Real& a, const Real& b) { return b < a ? b : a; }

// x rounded to a given precision (up or down).
inline Real round_to(const Real& x, mpfr_prec_t prec) {
  Real r(prec);
  mpfr_set(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

}  // namespace wgopuc
