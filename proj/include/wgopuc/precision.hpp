#pragma once

#include "wgopuc/errors.hpp"
#include "wgopuc/real.hpp"

namespace wgopuc {
namespace qseries {

// Working precision and the tolerance policy that goes with it. Everything
// downstream takes one of these; there is no global state.
//
//   tol_rel: relative tolerance for equality assertions (2^-100 at 256 bits,
//            exponent scales linearly with precision_bits so doubled()
//            squares it);
//   tol_div: guard threshold under which a denominator factor counts as a
//            small divisor and computation aborts.
struct PrecisionContext {
  mpfr_prec_t precision_bits;
  Real tol_rel;
  Real tol_div;

  static PrecisionContext make(mpfr_prec_t bits = 256) {
    check_bits(bits);
    PrecisionContext ctx{bits, Real::two_pow(rel_exponent(bits), bits),
                         Real::two_pow(-40, bits)};
    return ctx;
  }

  static PrecisionContext make(mpfr_prec_t bits, Real tol_rel, Real tol_div) {
    check_bits(bits);
    if (!(tol_rel > 0L && tol_rel < 1L) || !(tol_div > 0L && tol_div < 1L)) {
      throw ConfigError("tolerances must lie in (0, 1)");
    }
    return PrecisionContext{bits, std::move(tol_rel), std::move(tol_div)};
  }

  // Same policy at twice the precision: tol_rel's exponent doubles, the
  // small-divisor guard stays put (it is a guard, not an accuracy target).
  PrecisionContext doubled() const {
    return PrecisionContext{precision_bits * 2, sqr(tol_rel), tol_div};
  }

 private:
  static void check_bits(mpfr_prec_t bits) {
    if (bits < kMinPrecisionBits) {
      throw ConfigError("precision_bits must be >= 64");
    }
  }
  // 256 -> -100, 512 -> -200, 64 -> -25.
  static long rel_exponent(mpfr_prec_t bits) {
    return -static_cast<long>((bits * 25) / 64);
  }
};

}  // namespace qseries

using qseries::PrecisionContext;

}  // namespace wgopuc
