#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "wgopuc/complex.hpp"
#include "wgopuc/errors.hpp"
#include "wgopuc/precision.hpp"
#include "wgopuc/qseries.hpp"
#include "wgopuc/real.hpp"

namespace wgopuc {
namespace measure {

// One point mass of the discrete measure: spectral point z_s = e^{i phi} q^s
// at angle theta_s, carrying mass w_s. The mass is stored complex because the
// order-k generalization (k > 1) genuinely has non-positive, non-real weights.
struct MeasureAtom {
  long s;
  Real theta;
  Complex z;
  Complex mass;
};

// Geometric masses wrapped onto the unit circle: atoms at angles
// 2*pi*chi*s + phi with weights (1-p)p^s (k = 1), or the order-k weights
// p^s (q^k;q)_s / (q;q)_s (k > 1, unnormalized; sigma_0 differs from 1).
class WrappedGeometricMeasure {
 public:
  WrappedGeometricMeasure(Real p, UnitPhase phase, long k = 1,
                          Real rotation_phi = Real(kMinPrecisionBits))
      : p_(std::move(p)), phase_(std::move(phase)), k_(k),
        rotation_phi_(std::move(rotation_phi)) {
    if (!(p_ > 0L && p_ < 1L)) throw ConfigError("p must lie in (0, 1)");
    if (k_ < 1) throw ConfigError("weight order k must be >= 1");
    if (!rotation_phi_.is_zero()) {
      // reduce the rotation into [0, 2*pi) once, at entry precision
      mpfr_prec_t wp = rotation_phi_.prec() + 64;
      Real tau = Real::pi(wp) * 2L;
      rotation_phi_ = rotation_phi_ - tau * floor(rotation_phi_ / tau);
      if (rotation_phi_ < 0L) rotation_phi_ = rotation_phi_ + tau;
      if (rotation_phi_ >= tau) rotation_phi_ = Real(rotation_phi_.prec());
    }
  }

  const Real& p() const { return p_; }
  const UnitPhase& phase() const { return phase_; }
  long k() const { return k_; }
  const Real& rotation_phi() const { return rotation_phi_; }

  // only the plain k=1 family is a genuine (positive) probability measure
  bool is_positive() const { return k_ == 1; }

  // theta_s = 2*pi*frac(s*chi) + phi, reduced into [0, 2*pi). Atoms that
  // coincide (rational chi) get bit-identical angles.
  Real theta(long s, const PrecisionContext& ctx) const {
    mpfr_prec_t wp = ctx.precision_bits + 64;
    Real th = phase_.angle_fraction(s, wp) * 2L * Real::pi(wp) + rotation_phi_;
    Real tau = Real::pi(wp) * 2L;
    if (th >= tau) th = th - tau;
    return round_to(th, ctx.precision_bits);
  }

  Complex z(long s, const PrecisionContext& ctx) const {
    Complex zs = phase_.power(s, ctx);
    if (rotation_phi_.is_zero()) return zs;
    return zs * unit_from_angle(rotation_phi_, ctx.precision_bits);
  }

  Complex weight(long s, const PrecisionContext& ctx) const {
    if (s < 0) throw ConfigError("atom index must be >= 0");
    mpfr_prec_t prec = ctx.precision_bits;
    if (k_ == 1) return Complex((1L - p_) * pow_si(p_, s));
    // p^s (q^k;q)_s/(q;q)_s written as p^s (q^{s+1};q)_{k-1}/(q;q)_{k-1}:
    // fixed-size products, no cancellation growth in s
    Complex num = qseries::q_pochhammer_shifted(Complex::one(prec), s + 1, k_ - 1, phase_, ctx);
    Complex den = qseries::q_pochhammer_shifted(Complex::one(prec), 1, k_ - 1, phase_, ctx);
    return qseries::div_guarded(num, den, ctx, "order-k weight") * pow_si(p_, s);
  }

  std::vector<MeasureAtom> atoms(long S, const PrecisionContext& ctx) const {
    if (S < 1) throw ConfigError("atom count must be >= 1");
    std::vector<MeasureAtom> out;
    out.reserve(static_cast<size_t>(S));
    for (long s = 0; s < S; ++s) {
      out.push_back(MeasureAtom{s, theta(s, ctx), z(s, ctx), weight(s, ctx)});
    }
    return out;
  }

  // sigma_n. k=1: (1-p)/(1-p q^n); k>1: 1/((p q^n;q)_k). A rotation by phi
  // contributes the factor e^{i n phi}.
  Complex moment_closed(long n, const PrecisionContext& ctx) const {
    Complex sigma = qseries::q_pochhammer_shifted(Complex(p_), n + k_, -k_, phase_, ctx);
    if (k_ == 1) sigma = sigma * (1L - p_);
    if (!rotation_phi_.is_zero()) {
      sigma = sigma * unit_from_angle(rotation_phi_ * n, ctx.precision_bits);
    }
    return sigma;
  }

  // Partial sum over the first S atoms of z_s^n w_s; the cross-check oracle
  // for moment_closed. z_s^n is taken through one reduced q-power per atom,
  // not by repeated multiplication.
  Complex moment_bruteforce(long n, long S, const PrecisionContext& ctx) const {
    if (S < 1) throw ConfigError("truncation S must be >= 1");
    mpfr_prec_t prec = ctx.precision_bits;
    Complex sum = Complex::zero(prec);
    for (long s = 0; s < S; ++s) {
      sum += phase_.power(n * s, ctx) * weight(s, ctx);
    }
    if (!rotation_phi_.is_zero()) {
      sum = sum * unit_from_angle(rotation_phi_ * n, prec);
    }
    return sum;
  }

  // Upper bound on the total mass beyond the first S atoms. Exact (p^S) for
  // k=1; for k>1 uses |(q^{s+1};q)_{k-1}| <= 2^{k-1}.
  Real tail_mass_bound(long S, const PrecisionContext& ctx) const {
    if (S < 0) throw ConfigError("truncation S must be >= 0");
    Real tail = pow_si(p_, S);
    if (k_ == 1) return tail;
    mpfr_prec_t prec = ctx.precision_bits;
    Real den = abs(qseries::q_pochhammer_shifted(Complex::one(prec), 1, k_ - 1, phase_, ctx));
    if (den < ctx.tol_div) throw SmallDivisorError("small (q;q)_{k-1} in tail bound");
    return tail * Real::two_pow(k_ - 1, prec) / (den * (1L - p_));
  }

  // Smallest S whose tail bound is below the requested absolute tolerance.
  long truncation_for(const Real& target_abs_tol, const PrecisionContext& ctx) const {
    if (!(target_abs_tol > 0L)) throw ConfigError("truncation tolerance must be > 0");
    Real excess = log(tail_mass_bound(0, ctx)) - log(target_abs_tol);
    long S = 1;
    if (excess > 0L) S = std::max(1L, ceil(excess / (-log(p_))).to_long(MPFR_RNDU));
    while (tail_mass_bound(S, ctx) > target_abs_tol) ++S;
    return S;
  }

 private:
  Real p_;
  UnitPhase phase_;
  long k_;
  Real rotation_phi_;
};

}  // namespace measure
}  // namespace wgopuc
