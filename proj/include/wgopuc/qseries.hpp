#pragma once

#include <numeric>
#include <string>
#include <utility>

#include "wgopuc/complex.hpp"
#include "wgopuc/errors.hpp"
#include "wgopuc/precision.hpp"
#include "wgopuc/real.hpp"

namespace wgopuc {
namespace qseries {

// The point q = exp(2*pi*i*chi) on the unit circle. chi is either an exact
// rational M/N (q a primitive N-th root of unity) or a high-precision real in
// (0, 1). Powers q^n always reduce n*chi mod 1 before exponentiation, so
// accuracy is uniform in n; for rational chi the reduction is exact integer
// arithmetic and the four axis points come out exact.
class UnitPhase {
 public:
  static UnitPhase rational(long num, long den) {
    if (den < 1 || den > 1000000000L) {
      throw ConfigError("rational chi denominator must lie in [1, 1e9]");
    }
    long g = std::gcd(num < 0 ? -num : num, den);
    num /= g;
    den /= g;
    num %= den;
    if (num < 0) num += den;
    if (num == 0) throw ConfigError("chi must be nonzero mod 1 (q != 1)");
    UnitPhase p;
    p.rational_ = true;
    p.num_ = num;
    p.den_ = den;
    return p;
  }

  static UnitPhase irrational(Real chi) {
    if (!(chi > 0L && chi < 1L)) {
      throw ConfigError("irrational chi must lie in (0, 1)");
    }
    UnitPhase p;
    p.chi_ = std::move(chi);
    return p;
  }

  // frac((sqrt(5)-1)/2) at guard precision: the canonical badly-approximable
  // angle, farthest from small divisors at moderate n.
  static UnitPhase golden(const PrecisionContext& ctx) {
    mpfr_prec_t wp = ctx.precision_bits + 64;
    Real chi = frac((sqrt(Real(5L, wp)) - 1L) / 2L);
    return irrational(std::move(chi));
  }

  bool is_rational() const { return rational_; }
  long num() const { return num_; }
  long den() const { return den_; }

  Real chi_value(mpfr_prec_t prec) const {
    if (rational_) return Real(num_, prec) / den_;
    return round_to(chi_, prec);
  }

  // frac(n*chi) in [0, 1); exact integer arithmetic in the rational case.
  Real angle_fraction(long n, mpfr_prec_t prec) const {
    if (rational_) {
      long r = ((n % den_) * num_) % den_;
      if (r < 0) r += den_;
      return Real(r, prec) / den_;
    }
    Real t = frac(chi_ * n);
    if (t < 0L) t = t + 1L;
    return round_to(t, prec);
  }

  // q^n at ctx precision.
  Complex power(long n, const PrecisionContext& ctx) const {
    mpfr_prec_t prec = ctx.precision_bits;
    mpfr_prec_t wp = prec + 64;
    Real t(wp);
    if (rational_) {
      long r = ((n % den_) * num_) % den_;
      if (r < 0) r += den_;
      if (r == 0) return Complex(1, prec);
      if (2 * r == den_) return Complex(-1, prec);
      if (4 * r == den_) return Complex(Real(prec), Real(1L, prec));
      if (4 * r == 3 * den_) return Complex(Real(prec), Real(-1L, prec));
      t = Real(r, wp) / den_;
    } else {
      t = frac(chi_ * n);
    }
    Real angle = t * 2L * Real::pi(wp);
    Real s(prec), c(prec);
    sin_cos(s, c, angle, prec);
    return {std::move(c), std::move(s)};
  }

 private:
  UnitPhase() : chi_(kMinPrecisionBits) {}

  bool rational_ = false;
  long num_ = 0;
  long den_ = 0;
  Real chi_;
};

inline Complex q_power(const UnitPhase& phase, long n, const PrecisionContext& ctx) {
  return phase.power(n, ctx);
}

inline Complex div_guarded(const Complex& num, const Complex& den,
                           const PrecisionContext& ctx, const char* what) {
  if (norm(den) < sqr(ctx.tol_div)) {
    throw SmallDivisorError(std::string("small divisor in ") + what);
  }
  return num / den;
}

// (c*q^e; q)_n for integer n of either sign. Every factor's q-power is
// reduced from the integer exponent e+j, so a factor that is algebraically
// 1 - q^0 comes out exactly zero. Negative n uses the reciprocal convention
// (a;q)_n = 1/(a q^n; q)_{-n}; those factors are divisors and are guarded.
inline Complex q_pochhammer_shifted(const Complex& c, long e, long n,
                                    const UnitPhase& phase,
                                    const PrecisionContext& ctx) {
  mpfr_prec_t prec = ctx.precision_bits;
  Complex prod = Complex::one(prec);
  if (n >= 0) {
    for (long j = 0; j < n; ++j) prod *= 1L - c * phase.power(e + j, ctx);
    return prod;
  }
  Real guard2 = sqr(ctx.tol_div);
  for (long j = 0; j < -n; ++j) {
    Complex f = 1L - c * phase.power(e + n + j, ctx);
    if (norm(f) < guard2) {
      throw SmallDivisorError("small divisor in negative-index q-Pochhammer at offset " +
                              std::to_string(e + n + j));
    }
    prod *= f;
  }
  return recip(prod);
}

// (a;q)_n for arbitrary complex a.
inline Complex q_pochhammer(const Complex& a, long n, const UnitPhase& phase,
                            const PrecisionContext& ctx) {
  return q_pochhammer_shifted(a, 0, n, phase, ctx);
}

// Terminating 2phi1(q^-n, b; c; q, z) = sum_{s=0}^{n} [(q^-n;q)_s (b;q)_s /
// ((q;q)_s (c;q)_s)] z^s. Terms advance by the rational ratio in q^s rather
// than recomputing Pochhammers.
inline Complex phi_2_1_terminating(long n, const Complex& b, const Complex& c,
                                   const Complex& z, const UnitPhase& phase,
                                   const PrecisionContext& ctx) {
  if (n < 0) throw ConfigError("phi_2_1_terminating requires n >= 0");
  mpfr_prec_t prec = ctx.precision_bits;
  Real guard2 = sqr(ctx.tol_div);
  Complex sum = Complex::one(prec);
  Complex term = Complex::one(prec);
  for (long s = 0; s < n; ++s) {
    Complex qs = phase.power(s, ctx);
    Complex d1 = 1L - phase.power(s + 1, ctx);
    Complex d2 = 1L - c * qs;
    if (norm(d1) < guard2 || norm(d2) < guard2) {
      throw SmallDivisorError("small divisor in 2phi1 term s=" + std::to_string(s + 1));
    }
    term *= (1L - phase.power(s - n, ctx)) * (1L - b * qs) * z / (d1 * d2);
    sum += term;
  }
  return sum;
}

// Terminating 3phi2(q^-n, a2, a3; b1, b2; q, z); same scheme with one more
// numerator and denominator Pochhammer per term. b2 = 0 is legal ((0;q)_s = 1).
inline Complex phi_3_2_terminating(long n, const Complex& a2, const Complex& a3,
                                   const Complex& b1, const Complex& b2,
                                   const Complex& z, const UnitPhase& phase,
                                   const PrecisionContext& ctx) {
  if (n < 0) throw ConfigError("phi_3_2_terminating requires n >= 0");
  mpfr_prec_t prec = ctx.precision_bits;
  Real guard2 = sqr(ctx.tol_div);
  Complex sum = Complex::one(prec);
  Complex term = Complex::one(prec);
  for (long s = 0; s < n; ++s) {
    Complex qs = phase.power(s, ctx);
    Complex d1 = 1L - phase.power(s + 1, ctx);
    Complex d2 = 1L - b1 * qs;
    Complex d3 = 1L - b2 * qs;
    if (norm(d1) < guard2 || norm(d2) < guard2 || norm(d3) < guard2) {
      throw SmallDivisorError("small divisor in 3phi2 term s=" + std::to_string(s + 1));
    }
    term *= (1L - phase.power(s - n, ctx)) * (1L - a2 * qs) * (1L - a3 * qs) * z /
            (d1 * d2 * d3);
    sum += term;
  }
  return sum;
}

// Right-hand side of the q-Saalschutz evaluation of a balanced terminating
// 3phi2(q^-n, a, b; c, a b c^-1 q^{1-n}; q, q):
//   (c/a;q)_n (c/b;q)_n / ((c;q)_n (c/(ab);q)_n).
inline Complex q_saalschutz_rhs(long n, const Complex& a, const Complex& b,
                                const Complex& c, const UnitPhase& phase,
                                const PrecisionContext& ctx) {
  Complex ca = div_guarded(c, a, ctx, "q_saalschutz_rhs c/a");
  Complex cb = div_guarded(c, b, ctx, "q_saalschutz_rhs c/b");
  Complex cab = div_guarded(c, a * b, ctx, "q_saalschutz_rhs c/(ab)");
  Complex num = q_pochhammer(ca, n, phase, ctx) * q_pochhammer(cb, n, phase, ctx);
  Complex den = q_pochhammer(c, n, phase, ctx) * q_pochhammer(cab, n, phase, ctx);
  return div_guarded(num, den, ctx, "q_saalschutz_rhs denominator");
}

// Balanced 3phi2 left-hand side matching q_saalschutz_rhs.
inline Complex q_saalschutz_lhs(long n, const Complex& a, const Complex& b,
                                const Complex& c, const UnitPhase& phase,
                                const PrecisionContext& ctx) {
  Complex second_bottom =
      div_guarded(a * b, c, ctx, "q_saalschutz_lhs ab/c") * phase.power(1 - n, ctx);
  return phi_3_2_terminating(n, a, b, c, second_bottom, phase.power(1, ctx), phase, ctx);
}

}  // namespace qseries

using qseries::UnitPhase;

}  // namespace wgopuc
