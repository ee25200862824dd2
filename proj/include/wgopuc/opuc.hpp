#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "wgopuc/complex.hpp"
#include "wgopuc/errors.hpp"
#include "wgopuc/measure.hpp"
#include "wgopuc/precision.hpp"
#include "wgopuc/qseries.hpp"
#include "wgopuc/real.hpp"

namespace wgopuc {
namespace opuc {

// Dense polynomial, coefficient j multiplies z^j. Not required to be monic
// (reflections are not); evaluation is Horner at working precision.
class Polynomial {
 public:
  explicit Polynomial(std::vector<Complex> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) throw ConfigError("polynomial needs at least one coefficient");
  }

  long degree() const { return static_cast<long>(c_.size()) - 1; }
  const Complex& coeff(long j) const { return c_.at(static_cast<size_t>(j)); }
  const std::vector<Complex>& coeffs() const { return c_; }

  Complex eval(const Complex& z) const {
    Complex acc = c_.back();
    for (size_t j = c_.size() - 1; j-- > 0;) acc = acc * z + c_[j];
    return acc;
  }

 private:
  std::vector<Complex> c_;
};

// Polynomial with leading coefficient exactly 1. Constructors assert the
// computed leading term is 1 within tol_rel before snapping it; a bigger
// defect means the producing formula or the precision budget is broken, and
// that must surface, not be normalized away.
class MonicPolynomial {
 public:
  static MonicPolynomial one(mpfr_prec_t prec) {
    return MonicPolynomial({Complex::one(prec)});
  }

  static MonicPolynomial adopt(std::vector<Complex> coeffs,
                               const PrecisionContext& ctx) {
    if (coeffs.empty()) throw ConfigError("monic polynomial needs coefficients");
    Real defect = dist(coeffs.back(), Complex::one(ctx.precision_bits));
    if (defect > ctx.tol_rel) {
      throw NotMonicError("leading coefficient off 1 by " + defect.to_sci(8));
    }
    coeffs.back() = Complex::one(ctx.precision_bits);
    return MonicPolynomial(std::move(coeffs));
  }

  long degree() const { return static_cast<long>(c_.size()) - 1; }
  const Complex& coeff(long j) const { return c_.at(static_cast<size_t>(j)); }
  const std::vector<Complex>& coeffs() const { return c_; }
  const Complex& constant_term() const { return c_.front(); }

  Complex eval(const Complex& z) const {
    Complex acc = c_.back();
    for (size_t j = c_.size() - 1; j-- > 0;) acc = acc * z + c_[j];
    return acc;
  }

  Polynomial as_polynomial() const { return Polynomial(c_); }

 private:
  explicit MonicPolynomial(std::vector<Complex> coeffs) : c_(std::move(coeffs)) {}
  std::vector<Complex> c_;
};

// Reflection: coefficient j of the output is conj(coeff(n-j)).
inline Polynomial phi_star(const MonicPolynomial& phi) {
  long n = phi.degree();
  std::vector<Complex> out;
  out.reserve(static_cast<size_t>(n) + 1);
  for (long j = 0; j <= n; ++j) out.push_back(conj(phi.coeff(n - j)));
  return Polynomial(std::move(out));
}

inline Polynomial phi_star(const Polynomial& phi) {
  long n = phi.degree();
  std::vector<Complex> out;
  out.reserve(static_cast<size_t>(n) + 1);
  for (long j = 0; j <= n; ++j) out.push_back(conj(phi.coeff(n - j)));
  return Polynomial(std::move(out));
}

// At a primitive N-th root of unity only N distinct atoms exist and the
// family stops at degree N-1; higher degrees hit vanishing (q;q)_n factors.
inline void check_degree_cap(long n, const UnitPhase& phase) {
  if (n < 0) throw ConfigError("degree must be >= 0");
  if (phase.is_rational() && n >= phase.den()) {
    throw ConfigError("degree " + std::to_string(n) +
                      " exceeds cap N-1 = " + std::to_string(phase.den() - 1) +
                      " at a root of unity");
  }
}

// Moment parameters of the two-parameter biorthogonal family; the unit-circle
// wrapped geometric case is (a, b) = (p, pq), the order-k case (p, pq^k).
struct PastroParams {
  Complex a;
  Complex b;

  static PastroParams wrapped_geometric(const Real& p, const UnitPhase& phase,
                                        const PrecisionContext& ctx) {
    return PastroParams{Complex(p), Complex(p) * phase.power(1, ctx)};
  }
  static PastroParams order_k(const Real& p, long k, const UnitPhase& phase,
                              const PrecisionContext& ctx) {
    return PastroParams{Complex(p), Complex(p) * phase.power(k, ctx)};
  }
};

// mu_n = a^n (a^{-1};q)_n / (b;q)_n, evaluated as prod_{j<n}(a - q^j)/(b;q)_n
// to avoid the large intermediate a^{-n}.
inline Complex pastro_mu(long n, const PastroParams& par, const UnitPhase& phase,
                         const PrecisionContext& ctx) {
  if (n < 0) throw ConfigError("mu index must be >= 0");
  mpfr_prec_t prec = ctx.precision_bits;
  Complex num = Complex::one(prec);
  for (long j = 0; j < n; ++j) num *= par.a - phase.power(j, ctx);
  return qseries::div_guarded(num, qseries::q_pochhammer(par.b, n, phase, ctx), ctx, "pastro_mu");
}

// a_{n-1} for the wrapped geometric family: conj(-mu_n); a_{-1} = -1.
inline Complex verblunsky_closed(long n, const Real& p, const UnitPhase& phase,
                                 const PrecisionContext& ctx) {
  if (n < 0) throw ConfigError("verblunsky_closed index must be >= 0");
  if (n == 0) return Complex(-1, ctx.precision_bits);
  check_degree_cap(n, phase);
  PastroParams par = PastroParams::wrapped_geometric(p, phase, ctx);
  return conj(-pastro_mu(n, par, phase, ctx));
}

// The reflection coefficients a_{-1}, a_0, a_1, ... of the Szego recurrence.
// We store a_n itself; the closed form naturally produces its conjugate, and
// that conjugation is pinned here (and tested via a_0 = conj(sigma_1)).
class VerblunskySequence {
 public:
  enum class Source { kClosedForm, kFromPolynomials };

  // a_{-1}..a_{n_max} through the incremental mu recursion
  // mu_{m+1} = mu_m (p - q^m)/(1 - p q^{m+1}).
  static VerblunskySequence closed_form(long n_max, const Real& p,
                                        const UnitPhase& phase,
                                        const PrecisionContext& ctx) {
    if (n_max < -1) throw ConfigError("verblunsky range must reach at least -1");
    if (phase.is_rational() && n_max > phase.den() - 2) {
      throw ConfigError("verblunsky index exceeds N-2 at a root of unity");
    }
    mpfr_prec_t prec = ctx.precision_bits;
    VerblunskySequence v;
    v.src_ = Source::kClosedForm;
    v.a_.push_back(Complex(-1, prec));
    Complex p_c(p);
    Complex mu = Complex::one(prec);
    for (long m = 0; m <= n_max; ++m) {
      Complex den = 1L - p_c * phase.power(m + 1, ctx);
      mu = mu * qseries::div_guarded(p_c - phase.power(m, ctx), den, ctx, "verblunsky step");
      v.a_.push_back(conj(-mu));
    }
    return v;
  }

  // a_n = -conj(constant term of Phi_{n+1}); input must be the consecutive
  // degrees 0..m.
  static VerblunskySequence from_polynomials(const std::vector<MonicPolynomial>& phis) {
    VerblunskySequence v;
    v.src_ = Source::kFromPolynomials;
    mpfr_prec_t prec = phis.empty() ? kMinPrecisionBits
                                    : phis.front().constant_term().re.prec();
    v.a_.push_back(Complex(-1, prec));
    for (size_t d = 0; d < phis.size(); ++d) {
      if (phis[d].degree() != static_cast<long>(d)) {
        throw ConfigError("polynomial list must hold consecutive degrees from 0");
      }
      if (d > 0) v.a_.push_back(-conj(phis[d].constant_term()));
    }
    return v;
  }

  // valid for n = -1 .. max_index()
  const Complex& at(long n) const {
    if (n < -1 || n > max_index()) throw ConfigError("verblunsky index out of range");
    return a_[static_cast<size_t>(n + 1)];
  }
  long max_index() const { return static_cast<long>(a_.size()) - 2; }
  Source source() const { return src_; }

 private:
  VerblunskySequence() = default;
  std::vector<Complex> a_;
  Source src_ = Source::kClosedForm;
};

// Phi_n by n Szego steps Phi_{m+1} = z Phi_m - conj(a_m) Phi_m^*.
inline MonicPolynomial phi_via_recurrence(long n, const VerblunskySequence& verblunsky,
                                          const PrecisionContext& ctx) {
  if (n < 0) throw ConfigError("degree must be >= 0");
  if (verblunsky.max_index() < n - 1) {
    throw ConfigError("verblunsky sequence too short for degree " + std::to_string(n));
  }
  mpfr_prec_t prec = ctx.precision_bits;
  std::vector<Complex> cur{Complex::one(prec)};
  for (long m = 0; m < n; ++m) {
    Complex abar = conj(verblunsky.at(m));
    std::vector<Complex> next(static_cast<size_t>(m) + 2, Complex::zero(prec));
    for (long j = 0; j <= m; ++j) {
      next[static_cast<size_t>(j + 1)] = cur[static_cast<size_t>(j)];
    }
    for (long j = 0; j <= m; ++j) {
      next[static_cast<size_t>(j)] -= abar * conj(cur[static_cast<size_t>(m - j)]);
    }
    cur = std::move(next);
  }
  return MonicPolynomial::adopt(std::move(cur), ctx);
}

// General biorthogonal construction: coefficient s of P_n(z;a,b) is
// mu_n q^s (q^{-n};q)_s (b;q)_s / ((q;q)_s (a q^{1-n};q)_s), accumulated by
// term ratios. The wrapped geometric Phi_n is (a,b) = (p, pq).
inline MonicPolynomial pastro_polynomial(long n, const PastroParams& par,
                                         const UnitPhase& phase,
                                         const PrecisionContext& ctx) {
  check_degree_cap(n, phase);
  mpfr_prec_t prec = ctx.precision_bits;
  Real guard2 = sqr(ctx.tol_div);
  std::vector<Complex> c;
  c.reserve(static_cast<size_t>(n) + 1);
  Complex term = pastro_mu(n, par, phase, ctx);
  c.push_back(term);
  for (long s = 0; s < n; ++s) {
    Complex d1 = 1L - phase.power(s + 1, ctx);
    Complex d2 = 1L - par.a * phase.power(1 - n + s, ctx);
    if (norm(d1) < guard2 || norm(d2) < guard2) {
      throw SmallDivisorError("small divisor in polynomial term s=" +
                              std::to_string(s + 1));
    }
    term *= (1L - phase.power(s - n, ctx)) * (1L - par.b * phase.power(s, ctx)) *
            phase.power(1, ctx) / (d1 * d2);
    c.push_back(term);
  }
  return MonicPolynomial::adopt(std::move(c), ctx);
}

// Phi_n from the explicit terminating series (the closed-form path).
inline MonicPolynomial phi_via_hypergeometric(long n, const Real& p,
                                              const UnitPhase& phase,
                                              const PrecisionContext& ctx) {
  return pastro_polynomial(n, PastroParams::wrapped_geometric(p, phase, ctx),
                           phase, ctx);
}

// Trigonometric moments sigma_{-n_max}..sigma_{n_max}.
struct MomentTable {
  long n_max;
  std::vector<Complex> sigma;

  static MomentTable closed(const measure::WrappedGeometricMeasure& m, long n_max,
                            const PrecisionContext& ctx) {
    if (n_max < 0) throw ConfigError("moment range must be >= 0");
    MomentTable t;
    t.n_max = n_max;
    t.sigma.reserve(static_cast<size_t>(2 * n_max) + 1);
    for (long j = -n_max; j <= n_max; ++j) t.sigma.push_back(m.moment_closed(j, ctx));
    return t;
  }

  const Complex& at(long j) const {
    if (j < -n_max || j > n_max) throw ConfigError("moment index out of range");
    return sigma[static_cast<size_t>(j + n_max)];
  }
};

struct ToeplitzResult {
  MonicPolynomial phi;
  // det of the n-by-n moment matrix (sigma_{j-i}); complex because the
  // order-k moment sequences are not Hermitian. Real and positive in the
  // k=1 case, which tests assert rather than assume.
  Complex delta;
};

// Phi_n from the moment determinant route: solve the n-by-n Toeplitz system
// T c = rhs with T_{ij} = sigma_{j-i}, rhs_i = -sigma_{n-i} by LU with
// partial pivoting. The oracle path: O(n^3), capped, trusted.
inline ToeplitzResult phi_via_toeplitz(long n, const MomentTable& moments,
                                       const PrecisionContext& ctx) {
  if (n < 0) throw ConfigError("degree must be >= 0");
  if (n > 32) throw ConfigError("determinant path capped at degree 32");
  if (moments.n_max < n) throw ConfigError("moment table too short");
  mpfr_prec_t prec = ctx.precision_bits;
  if (n == 0) {
    return ToeplitzResult{MonicPolynomial::one(prec), Complex::one(prec)};
  }

  size_t N = static_cast<size_t>(n);
  std::vector<std::vector<Complex>> a(N, std::vector<Complex>(N, Complex::zero(prec)));
  std::vector<Complex> rhs(N, Complex::zero(prec));
  for (size_t i = 0; i < N; ++i) {
    for (size_t j = 0; j < N; ++j) {
      a[i][j] = moments.at(static_cast<long>(j) - static_cast<long>(i));
    }
    rhs[i] = -moments.at(n - static_cast<long>(i));
  }

  Complex det = Complex::one(prec);
  Real guard2 = sqr(ctx.tol_div);
  for (size_t col = 0; col < N; ++col) {
    size_t piv = col;
    Real best = norm(a[col][col]);
    for (size_t r = col + 1; r < N; ++r) {
      Real cand = norm(a[r][col]);
      if (cand > best) {
        best = cand;
        piv = r;
      }
    }
    if (best < guard2) throw SingularToeplitzError("pivot below tol_div");
    if (piv != col) {
      std::swap(a[piv], a[col]);
      std::swap(rhs[piv], rhs[col]);
      det = -det;
    }
    det *= a[col][col];
    for (size_t r = col + 1; r < N; ++r) {
      Complex f = a[r][col] / a[col][col];
      for (size_t j2 = col; j2 < N; ++j2) a[r][j2] -= f * a[col][j2];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<Complex> c(N + 1, Complex::zero(prec));
  for (size_t i = N; i-- > 0;) {
    Complex acc = rhs[i];
    for (size_t j = i + 1; j < N; ++j) acc -= a[i][j] * c[j];
    c[i] = acc / a[i][i];
  }
  c[N] = Complex::one(prec);
  return ToeplitzResult{MonicPolynomial::adopt(std::move(c), ctx), det};
}

// h_n as the product (1-|a_0|^2)...(1-|a_{n-1}|^2); h_0 = 1.
inline Real h_product(long n, const VerblunskySequence& verblunsky,
                      const PrecisionContext& ctx) {
  if (n < 0) throw ConfigError("index must be >= 0");
  if (verblunsky.max_index() < n - 1) throw ConfigError("verblunsky sequence too short");
  Real prod(1L, ctx.precision_bits);
  for (long j = 0; j < n; ++j) prod = prod * (1L - norm(verblunsky.at(j)));
  return prod;
}

// h_n in closed form: p^n |(q;q)_n|^2 / |(pq;q)_n|^2, strictly positive
// below the root-of-unity cap.
inline Real h_closed(long n, const Real& p, const UnitPhase& phase,
                     const PrecisionContext& ctx) {
  check_degree_cap(n, phase);
  mpfr_prec_t prec = ctx.precision_bits;
  Real num = norm(qseries::q_pochhammer_shifted(Complex::one(prec), 1, n, phase, ctx));
  Real den = norm(qseries::q_pochhammer_shifted(Complex(p), 1, n, phase, ctx));
  if (den < sqr(ctx.tol_div)) throw SmallDivisorError("small |(pq;q)_n|");
  return pow_si(p, n) * num / den;
}

// Argument rotation: coefficient j picks up e^{i varphi (n-j)}. The result
// is monic and orthogonal for the measure whose atoms sit at angles
// 2*pi*chi*s + varphi.
inline MonicPolynomial rotate(const MonicPolynomial& phi, const Real& varphi,
                              const PrecisionContext& ctx) {
  mpfr_prec_t prec = ctx.precision_bits;
  long n = phi.degree();
  std::vector<Complex> out(static_cast<size_t>(n) + 1, Complex::zero(prec));
  Complex u = unit_from_angle(varphi, prec);
  Complex acc = Complex::one(prec);
  out[static_cast<size_t>(n)] = phi.coeff(n);
  for (long j = n - 1; j >= 0; --j) {
    acc *= u;
    out[static_cast<size_t>(j)] = phi.coeff(j) * acc;
  }
  return MonicPolynomial::adopt(std::move(out), ctx);
}

namespace detail {

// Phi_n(z) = p^n [(q;q)_n/(pq;q)_n] z^n 3phi2(q^-n, p^-1, z^-1; q, 0; q),
// shared by both entry points below.
inline Complex phi_32_eval(long n, const Complex& z_pow_n, const Complex& z_inv,
                           const Real& p, const UnitPhase& phase,
                           const PrecisionContext& ctx) {
  check_degree_cap(n, phase);
  mpfr_prec_t prec = ctx.precision_bits;
  Complex num = qseries::q_pochhammer_shifted(Complex::one(prec), 1, n, phase, ctx);
  Complex den = qseries::q_pochhammer_shifted(Complex(p), 1, n, phase, ctx);
  Complex pref = qseries::div_guarded(num, den, ctx, "series prefactor") * pow_si(p, n);
  Complex series = qseries::phi_3_2_terminating(n, Complex(1L / p), z_inv, phase.power(1, ctx),
                                       Complex::zero(prec), phase.power(1, ctx),
                                       phase, ctx);
  return pref * z_pow_n * series;
}

}  // namespace detail

// Evaluation of Phi_n through the reversed-series representation, at a
// general nonzero z.
inline Complex phi_32_form(long n, const Complex& z, const Real& p,
                           const UnitPhase& phase, const PrecisionContext& ctx) {
  Complex z_inv = qseries::div_guarded(Complex::one(ctx.precision_bits), z, ctx, "1/z");
  return detail::phi_32_eval(n, pow_si(z, n, ctx.precision_bits), z_inv, p, phase, ctx);
}

// Same at the atom z = q^s; both q^{ns} and q^{-s} go through exact
// angle reduction.
inline Complex phi_32_form(long n, long s, const Real& p, const UnitPhase& phase,
                           const PrecisionContext& ctx) {
  return detail::phi_32_eval(n, phase.power(n * s, ctx), phase.power(-s, ctx),
                             p, phase, ctx);
}

// I_{nj} in closed form:
//   (1-p) mu_n / (1-p q^{-j}) * (q^{-n};q)_n (q^{j+1-n};q)_n
//                             / ((p q^{1-n};q)_n (p^{-1} q^{j-n};q)_n).
// For 0 <= j < n the factor (q^{j+1-n};q)_n contains 1-q^0 and the result is
// exactly zero, by construction, not by rounding.
inline Complex inj_closed(long n, long j, const Real& p, const UnitPhase& phase,
                          const PrecisionContext& ctx) {
  if (n < 0 || j < 0) throw ConfigError("indices must be >= 0");
  check_degree_cap(n, phase);
  mpfr_prec_t prec = ctx.precision_bits;
  Complex one = Complex::one(prec);
  Complex p_c(p);
  Complex pinv(1L / p);
  Complex mu = pastro_mu(n, PastroParams::wrapped_geometric(p, phase, ctx), phase, ctx);
  Complex head =
      qseries::div_guarded(Complex((1L - p)) * mu, 1L - p_c * phase.power(-j, ctx), ctx,
                  "1 - p q^{-j}");
  Complex num = qseries::q_pochhammer_shifted(one, -n, n, phase, ctx) *
                qseries::q_pochhammer_shifted(one, j + 1 - n, n, phase, ctx);
  if (num.is_zero()) return Complex::zero(prec);
  Complex den = qseries::q_pochhammer_shifted(p_c, 1 - n, n, phase, ctx) *
                qseries::q_pochhammer_shifted(pinv, j - n, n, phase, ctx);
  return head * qseries::div_guarded(num, den, ctx, "closed-form inner product");
}

}  // namespace opuc
}  // namespace wgopuc
