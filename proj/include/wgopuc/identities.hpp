#pragma once

#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "wgopuc/complex.hpp"
#include "wgopuc/errors.hpp"
#include "wgopuc/measure.hpp"
#include "wgopuc/opuc.hpp"
#include "wgopuc/precision.hpp"
#include "wgopuc/qseries.hpp"
#include "wgopuc/real.hpp"

namespace wgopuc {
namespace identities {

enum class IdentityKind {
  kOrthogonality,
  kInjClosed,
  kDuality,
  kRIRecurrence,
  kQDifference,
  kMassSum,
  kNgonOrthogonality,
  kSaalschutzSpot,
};

inline const char* identity_name(IdentityKind k) {
  switch (k) {
    case IdentityKind::kOrthogonality: return "orthogonality";
    case IdentityKind::kInjClosed: return "inj_closed";
    case IdentityKind::kDuality: return "duality";
    case IdentityKind::kRIRecurrence: return "ri_recurrence";
    case IdentityKind::kQDifference: return "q_difference";
    case IdentityKind::kMassSum: return "mass_sum";
    case IdentityKind::kNgonOrthogonality: return "ngon_orthogonality";
    case IdentityKind::kSaalschutzSpot: return "saalschutz_spot";
  }
  return "unknown";
}

// Outcome of a single identity check.  `conclusive == false` means the check
// ran out of budget before it could either confirm or refute (mass sums only);
// such a report never counts as a pass.  `note` carries the guard message when
// a small-divisor abort prevented the check from finishing.
struct IdentityReport {
  IdentityKind identity;
  std::vector<long> indices;
  Real residual;
  Real tolerance;
  bool passed = false;
  bool conclusive = true;
  long truncation_terms = -1;  // -1 when no truncated sum was involved
  std::string note;
};

inline IdentityReport make_report(IdentityKind kind, std::vector<long> indices,
                                  Real residual, Real tolerance,
                                  long truncation_terms = -1) {
  IdentityReport r{kind,     std::move(indices), std::move(residual),
                   std::move(tolerance), false,  true,
                   truncation_terms,     {}};
  r.passed = !(r.residual > r.tolerance);
  return r;
}

// Scale-free defect |lhs - rhs| / max(1, |lhs|, |rhs|).
inline Real rel_defect(const Complex& lhs, const Complex& rhs) {
  mpfr_prec_t prec = std::max(lhs.re.prec(), rhs.re.prec());
  Real scale = max(Real(1L, prec), max(abs(lhs), abs(rhs)));
  return dist(lhs, rhs) / scale;
}

// Which route builds the polynomials fed to the checks.  The closed-form route
// is the default; the recurrence route exists so the two constructions can be
// played against each other.
enum class PolySource {
  kHypergeometric,
  kRecurrence,
};

inline opuc::MonicPolynomial make_phi(long n, const Real& p,
                                      const UnitPhase& phase,
                                      const PrecisionContext& ctx,
                                      PolySource source) {
  if (source == PolySource::kHypergeometric)
    return opuc::phi_via_hypergeometric(n, p, phase, ctx);
  auto v = opuc::VerblunskySequence::closed_form(n - 1, p, phase, ctx);
  return opuc::phi_via_recurrence(n, v, ctx);
}

// ---- recurrence / transform coefficients -----------------------------------

// g_n = (q^n - p) / (1 - p q^{n+1})
inline Complex ri_g(long n, const Real& p, const UnitPhase& phase,
                    const PrecisionContext& ctx) {
  Complex num = phase.power(n, ctx) - p;
  Complex den = 1L - phase.power(n + 1, ctx) * p;
  return qseries::div_guarded(num, den, ctx, "g coefficient");
}

// d_n = -p (1 - q^n)^2 / ((1 - p q^n)(1 - p q^{n+1})); d_0 is exactly zero.
inline Complex ri_d(long n, const Real& p, const UnitPhase& phase,
                    const PrecisionContext& ctx) {
  Complex t = 1L - phase.power(n, ctx);
  Complex num = -(t * t * p);
  Complex den =
      (1L - phase.power(n, ctx) * p) * (1L - phase.power(n + 1, ctx) * p);
  if (num.is_zero()) return Complex::zero(ctx.precision_bits);
  return qseries::div_guarded(num, den, ctx, "d coefficient");
}

// A_n = prod_{j=1..n} (1 - p q^j) / ((1 - q^j) p), so A_0 = 1.
inline Complex duality_A(long n, const Real& p, const UnitPhase& phase,
                         const PrecisionContext& ctx) {
  if (n < 0) throw ConfigError("duality weight index must be >= 0");
  Complex acc = Complex::one(ctx.precision_bits);
  for (long j = 1; j <= n; ++j) {
    Complex num = 1L - phase.power(j, ctx) * p;
    Complex den = (1L - phase.power(j, ctx)) * p;
    acc = acc * qseries::div_guarded(num, den, ctx, "duality weight");
  }
  return acc;
}

// B_s = p (1 - q^s) / (1 - p q^s); B_0 is exactly zero.
inline Complex duality_B(long s, const Real& p, const UnitPhase& phase,
                         const PrecisionContext& ctx) {
  Complex num = (1L - phase.power(s, ctx)) * p;
  if (num.is_zero()) return Complex::zero(ctx.precision_bits);
  Complex den = 1L - phase.power(s, ctx) * p;
  return qseries::div_guarded(num, den, ctx, "B coefficient");
}

// The combined coefficient B_s^{-1} d_s collapses to -(1 - q^s)/(1 - p q^{s+1}),
// which is finite at s = 0 (exactly zero) even though B_0 itself vanishes.
inline Complex qdiff_binv_d(long s, const Real& p, const UnitPhase& phase,
                            const PrecisionContext& ctx) {
  Complex num = -(1L - phase.power(s, ctx));
  if (num.is_zero()) return Complex::zero(ctx.precision_bits);
  Complex den = 1L - phase.power(s + 1, ctx) * p;
  return qseries::div_guarded(num, den, ctx, "difference coefficient");
}

// ---- orthogonality ----------------------------------------------------------

// Truncated inner product I_{n,j} = (1-p) sum_{s<S} Phi_n(q^s) q^{-sj} p^s.
inline Complex inner_product_bruteforce(const opuc::MonicPolynomial& phi,
                                        long j, long S, const Real& p,
                                        const UnitPhase& phase,
                                        const PrecisionContext& ctx) {
  if (S < 1) throw ConfigError("truncation length must be >= 1");
  mpfr_prec_t prec = ctx.precision_bits;
  Complex acc = Complex::zero(prec);
  for (long s = 0; s < S; ++s) {
    acc = acc + phi.eval(phase.power(s, ctx)) * phase.power(-s * j, ctx) *
                    pow_si(p, s);
  }
  return acc * (1L - p);
}

inline Real coeff_abs_sum(const opuc::MonicPolynomial& phi) {
  Real acc(phi.coeff(0).re.prec());
  for (long j = 0; j <= phi.degree(); ++j) acc = acc + abs(phi.coeff(j));
  return acc;
}

// j < n: residual |I_{n,j}| / h_n must vanish up to the truncation tail.
// j == n: residual |I_{n,n} - h_n| / h_n.
inline IdentityReport check_inj_bruteforce(
    long n, long j, long S, const Real& p, const UnitPhase& phase,
    const PrecisionContext& ctx,
    PolySource source = PolySource::kHypergeometric) {
  if (j < 0 || j > n) throw ConfigError("inner product needs 0 <= j <= n");
  auto phi = make_phi(n, p, phase, ctx, source);
  Real h = opuc::h_closed(n, p, phase, ctx);
  Complex I = inner_product_bruteforce(phi, j, S, p, phase, ctx);
  // |Phi_n| <= sum |c_i| on the unit circle, so the discarded tail is at most
  // (1-p) sum_{s>=S} p^s * sup|Phi_n| = p^S * sum |c_i|.
  Real tail = pow_si(p, S) * coeff_abs_sum(phi);
  Real resid = (j == n) ? abs(I - Complex(h)) / h : abs(I) / h;
  Real tol = tail / h + ctx.tol_rel * 100L;
  auto rep = make_report(IdentityKind::kOrthogonality, {n, j},
                         std::move(resid), std::move(tol), S);
  return rep;
}

// Brute-force I_{n,j} against the closed form, normalized by h_n.
inline IdentityReport check_inj_closed_vs_bruteforce(
    long n, long j, long S, const Real& p, const UnitPhase& phase,
    const PrecisionContext& ctx,
    PolySource source = PolySource::kHypergeometric) {
  if (j < 0 || j > n) throw ConfigError("inner product needs 0 <= j <= n");
  auto phi = make_phi(n, p, phase, ctx, source);
  Real h = opuc::h_closed(n, p, phase, ctx);
  Complex brute = inner_product_bruteforce(phi, j, S, p, phase, ctx);
  Complex closed = opuc::inj_closed(n, j, p, phase, ctx);
  Real tail = pow_si(p, S) * coeff_abs_sum(phi);
  Real resid = dist(brute, closed) / h;
  Real tol = tail / h + ctx.tol_rel * 100L;
  return make_report(IdentityKind::kInjClosed, {n, j}, std::move(resid),
                     std::move(tol), S);
}

// ---- duality ----------------------------------------------------------------

// A_s Phi_s(q^n) = A_n Phi_n(q^s).
inline IdentityReport duality_residual(
    long n, long s, const Real& p, const UnitPhase& phase,
    const PrecisionContext& ctx,
    PolySource source = PolySource::kHypergeometric) {
  auto phi_n = make_phi(n, p, phase, ctx, source);
  auto phi_s = make_phi(s, p, phase, ctx, source);
  Complex lhs = duality_A(s, p, phase, ctx) * phi_s.eval(phase.power(n, ctx));
  Complex rhs = duality_A(n, p, phase, ctx) * phi_n.eval(phase.power(s, ctx));
  return make_report(IdentityKind::kDuality, {n, s}, rel_defect(lhs, rhs),
                     ctx.tol_rel * 100L);
}

// ---- three-term relations ---------------------------------------------------

// Phi_{n+1}(z) + g_n Phi_n(z) = z (Phi_n(z) + d_n Phi_{n-1}(z)).
// At n = 0 the d-term is absent (d_0 = 0 keeps the formula uniform).
inline IdentityReport ri_recurrence_residual(
    long n, const Complex& z, const Real& p, const UnitPhase& phase,
    const PrecisionContext& ctx,
    PolySource source = PolySource::kHypergeometric) {
  if (n < 0) throw ConfigError("recurrence index must be >= 0");
  auto phi_n = make_phi(n, p, phase, ctx, source);
  auto phi_np1 = make_phi(n + 1, p, phase, ctx, source);
  Complex lhs = phi_np1.eval(z) + ri_g(n, p, phase, ctx) * phi_n.eval(z);
  Complex inner = phi_n.eval(z);
  if (n >= 1) {
    auto phi_nm1 = make_phi(n - 1, p, phase, ctx, source);
    inner = inner + ri_d(n, p, phase, ctx) * phi_nm1.eval(z);
  }
  Complex rhs = z * inner;
  return make_report(IdentityKind::kRIRecurrence, {n}, rel_defect(lhs, rhs),
                     ctx.tol_rel * 100L);
}

// Dual relation moving in s at fixed n:
//   B_{s+1} Phi_n(q^{s+1}) + g_s Phi_n(q^s)
//     = q^n (Phi_n(q^s) + B_s^{-1} d_s Phi_n(q^{s-1})).
// The s = 0 boundary works because B_0^{-1} d_0 is exactly zero, so the
// Phi_n(q^{-1}) value is multiplied away.
inline IdentityReport qdifference_residual(
    long n, long s, const Real& p, const UnitPhase& phase,
    const PrecisionContext& ctx,
    PolySource source = PolySource::kHypergeometric) {
  if (s < 0) throw ConfigError("difference index must be >= 0");
  auto phi = make_phi(n, p, phase, ctx, source);
  Complex at_s = phi.eval(phase.power(s, ctx));
  Complex lhs = duality_B(s + 1, p, phase, ctx) *
                    phi.eval(phase.power(s + 1, ctx)) +
                ri_g(s, p, phase, ctx) * at_s;
  Complex coeff = qdiff_binv_d(s, p, phase, ctx);
  Complex inner = at_s;
  if (!coeff.is_zero())
    inner = inner + coeff * phi.eval(phase.power(s - 1, ctx));
  Complex rhs = phase.power(n, ctx) * inner;
  return make_report(IdentityKind::kQDifference, {n, s}, rel_defect(lhs, rhs),
                     ctx.tol_rel * 100L);
}

// ---- mass sums --------------------------------------------------------------

// Single term |Phi_n(q^s)|^2 / h_n of the atom-mass expansion.
inline Real mass_sum_term(long n, long s, const Real& p,
                          const UnitPhase& phase, const PrecisionContext& ctx,
                          PolySource source = PolySource::kHypergeometric) {
  auto phi = make_phi(n, p, phase, ctx, source);
  return norm(phi.eval(phase.power(s, ctx))) / opuc::h_closed(n, p, phase, ctx);
}

// The same term rewritten through A_s Phi_s(q^n) = A_n Phi_n(q^s) together
// with |A_n|^2 h_n = p^{-n}:  term(n, s) = |A_s|^2 p^n |Phi_s(q^n)|^2.
inline Real mass_sum_term_dual(long n, long s, const Real& p,
                               const UnitPhase& phase,
                               const PrecisionContext& ctx,
                               PolySource source = PolySource::kHypergeometric) {
  auto phi = make_phi(s, p, phase, ctx, source);
  return norm(duality_A(s, p, phase, ctx)) * pow_si(p, n) *
         norm(phi.eval(phase.power(n, ctx)));
}

struct MassSumResult {
  Real partial;
  Real target;
  long terms_used = 0;
  IdentityReport report;
};

// Partial sums of sum_n |Phi_n(q^s)|^2 / h_n against the reciprocal atom mass
// p^{-s}/(1-p).  Terms are squared magnitudes, so the partial sums are
// monotone by construction; the check fails hard if boundedness is violated
// and reports inconclusive (never a pass) when the budget runs out first.
inline MassSumResult mass_sum_partial(
    long s, long budget, const Real& p, const UnitPhase& phase,
    const PrecisionContext& ctx, const Real& gap_tol,
    PolySource source = PolySource::kHypergeometric) {
  if (s < 0) throw ConfigError("atom index must be >= 0");
  if (budget < 1) throw ConfigError("term budget must be >= 1");
  if (!(gap_tol > Real(0L, kMinPrecisionBits)))
    throw ConfigError("gap tolerance must be positive");
  mpfr_prec_t prec = ctx.precision_bits;

  Real target = pow_si(p, -s) / (1L - p);
  Real slack = target * ctx.tol_rel * 100L;  // roundoff allowance on the bound
  Complex zs = phase.power(s, ctx);

  // A rational phase only admits degrees up to den-1, so the expansion is
  // genuinely finite there and the infinite-atom target cannot be reached.
  long budget_eff = budget;
  if (phase.is_rational() && budget_eff > phase.den()) budget_eff = phase.den();

  std::optional<opuc::VerblunskySequence> verb;
  if (source == PolySource::kRecurrence)
    verb = opuc::VerblunskySequence::closed_form(budget_eff - 1, p, phase, ctx);

  // Coefficients of the current Phi_n, stepped in place for the recurrence
  // route so the whole scan stays quadratic.
  std::vector<Complex> cur;
  cur.push_back(Complex::one(prec));

  auto eval_vec = [&](const std::vector<Complex>& c) {
    Complex acc = c.back();
    for (long j = static_cast<long>(c.size()) - 2; j >= 0; --j)
      acc = acc * zs + c[static_cast<size_t>(j)];
    return acc;
  };

  Real partial(prec);
  long used = 0;
  bool bounded = true;
  bool reached = false;
  Real gap = Real(1L, prec);

  for (long n = 0; n < budget_eff; ++n) {
    Complex value = Complex::zero(prec);
    if (source == PolySource::kRecurrence) {
      if (n > 0) {
        // One Szego step: cur <- z*cur - conj(a_{n-1}) * cur^*.
        Complex abar = conj(verb->at(n - 1));
        std::vector<Complex> next(cur.size() + 1, Complex::zero(prec));
        for (size_t j = 0; j < cur.size(); ++j) next[j + 1] = cur[j];
        for (size_t j = 0; j < cur.size(); ++j)
          next[j] = next[j] - abar * conj(cur[cur.size() - 1 - j]);
        cur = std::move(next);
      }
      value = eval_vec(cur);
    } else {
      value = opuc::phi_via_hypergeometric(n, p, phase, ctx).eval(zs);
    }
    Real term = norm(value) / opuc::h_closed(n, p, phase, ctx);
    partial = partial + term;
    ++used;
    if (partial > target + slack) {
      bounded = false;
      break;
    }
    gap = (target - partial) / target;
    if (!(gap > gap_tol)) {
      reached = true;
      break;
    }
  }

  Real resid = max(Real(0L, prec), gap);
  IdentityReport rep = make_report(IdentityKind::kMassSum, {s}, resid, gap_tol,
                                   used);
  if (!bounded) {
    rep.passed = false;
    rep.conclusive = true;
    rep.residual = (partial - target) / target;
    rep.note = "partial sum exceeded the target mass";
  } else if (!reached) {
    rep.passed = false;
    rep.conclusive = false;
    rep.note = "term budget exhausted before the gap closed";
  }
  return {std::move(partial), std::move(target), used, std::move(rep)};
}

// ---- finite point sets ------------------------------------------------------

// Gram sums over the N atoms of the M/N phase with weights (1-p^N) p^s.
// Diagonals are calibrated against G_{0,0} * h_n, since the finite weights
// reproduce the infinite-case moments up to the overall factor G_{0,0};
// off-diagonals are measured relative to sqrt(G_{n,n} G_{m,m}).
inline IdentityReport ngon_orthogonality(
    long N, long M, const Real& p, long n, long m, const PrecisionContext& ctx,
    PolySource source = PolySource::kHypergeometric) {
  auto phase = UnitPhase::rational(M, N);
  if (n < 0 || m < 0 || n >= N || m >= N)
    throw ConfigError("point-set degrees must satisfy 0 <= n, m < N");
  mpfr_prec_t prec = ctx.precision_bits;
  Real wscale = 1L - pow_si(p, N);

  auto phi_n = make_phi(n, p, phase, ctx, source);
  auto phi_m = make_phi(m, p, phase, ctx, source);

  auto gram = [&](const opuc::MonicPolynomial& f,
                  const opuc::MonicPolynomial& g) {
    Complex acc = Complex::zero(prec);
    for (long s = 0; s < N; ++s) {
      Complex zp = phase.power(s, ctx);
      acc = acc + f.eval(zp) * conj(g.eval(zp)) * pow_si(p, s);
    }
    return acc * wscale;
  };

  Complex g_nm = gram(phi_n, phi_m);
  if (n == m) {
    Real g00 = (sqr(wscale)) / (1L - p);
    Real expected = g00 * opuc::h_closed(n, p, phase, ctx);
    Real resid = abs(g_nm - Complex(expected)) / expected;
    return make_report(IdentityKind::kNgonOrthogonality, {N, M, n, m},
                       std::move(resid), ctx.tol_rel * 10L);
  }
  Real gn = abs(gram(phi_n, phi_n));
  Real gm = abs(gram(phi_m, phi_m));
  Real resid = abs(g_nm) / sqrt(gn * gm);
  return make_report(IdentityKind::kNgonOrthogonality, {N, M, n, m},
                     std::move(resid), ctx.tol_rel * 10L);
}

// ---- summation spot checks --------------------------------------------------

inline IdentityReport saalschutz_spot(long n, const Complex& a,
                                      const Complex& b, const Complex& c,
                                      const UnitPhase& phase,
                                      const PrecisionContext& ctx) {
  Complex lhs = qseries::q_saalschutz_lhs(n, a, b, c, phase, ctx);
  Complex rhs = qseries::q_saalschutz_rhs(n, a, b, c, phase, ctx);
  return make_report(IdentityKind::kSaalschutzSpot, {n}, rel_defect(lhs, rhs),
                     ctx.tol_rel * 100L);
}

// Seeded sweep with parameters drawn off the degenerate sets: |a|, |b| in
// [0.15, 0.85] and |c| in [0.5, 0.9] keep every guarded denominator away from
// zero for the degrees used here.
inline std::vector<IdentityReport> saalschutz_sweep(
    long count, long n_max, unsigned long long seed, const UnitPhase& phase,
    const PrecisionContext& ctx) {
  if (count < 1) throw ConfigError("sweep count must be >= 1");
  if (n_max < 0) throw ConfigError("sweep degree bound must be >= 0");
  std::mt19937_64 rng(seed);
  auto u01 = [&]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  auto draw = [&](double rmin, double rmax) {
    double r = rmin + (rmax - rmin) * u01();
    double t = 6.283185307179586476925286766559 * u01();
    return Complex(r * std::cos(t), r * std::sin(t), ctx.precision_bits);
  };
  // Degrees at a rational phase stop below den: the terminating series sheds
  // a 1 - q^{s+1} denominator that vanishes exactly once s+1 reaches den.
  if (phase.is_rational() && n_max > phase.den() - 1) n_max = phase.den() - 1;
  std::vector<IdentityReport> out;
  out.reserve(static_cast<size_t>(count));
  for (long i = 0; i < count; ++i) {
    long n = static_cast<long>(rng() % static_cast<unsigned long long>(n_max + 1));
    Complex a = draw(0.15, 0.85);
    Complex b = draw(0.15, 0.85);
    Complex c = draw(0.50, 0.90);
    try {
      IdentityReport rep = saalschutz_spot(n, a, b, c, phase, ctx);
      rep.indices = {i, n};
      out.push_back(std::move(rep));
    } catch (const NumericGuardError& e) {
      IdentityReport rep{IdentityKind::kSaalschutzSpot,
                         {i, n},
                         Real::infinity(kMinPrecisionBits),
                         Real(0L, kMinPrecisionBits),
                         false,
                         true,
                         -1,
                         e.what()};
      out.push_back(std::move(rep));
    }
  }
  return out;
}

// ---- whole-suite driver -----------------------------------------------------

struct SuiteOptions {
  Real p;
  UnitPhase phase;
  PrecisionContext ctx;
  PolySource source = PolySource::kHypergeometric;
  long n_max = 10;
  long s_max = 10;
  Real truncation_tol;       // tail target for brute-force inner products
  long masssum_budget = 500;
  Real masssum_gap;
  std::vector<long> masssum_s{0, 1, 2};
  long saalschutz_count = 100;
  long saalschutz_n_max = 12;
  unsigned long long seed = 20240901ULL;
  std::vector<IdentityKind> kinds;  // empty means every applicable identity

  SuiteOptions(Real p_, UnitPhase phase_, PrecisionContext ctx_)
      : p(std::move(p_)),
        phase(std::move(phase_)),
        ctx(std::move(ctx_)),
        truncation_tol(ctx.tol_rel),
        masssum_gap(Real(0.01, kMinPrecisionBits)) {}
};

namespace detail {

inline bool wants(const SuiteOptions& opt, IdentityKind k) {
  if (opt.kinds.empty()) return true;
  for (auto kk : opt.kinds)
    if (kk == k) return true;
  return false;
}

// Degrees above den-1 do not exist for a rational phase.
inline long capped_n(const SuiteOptions& opt, long requested) {
  if (opt.phase.is_rational())
    return std::min(requested, opt.phase.den() - 1);
  return requested;
}

template <typename Fn>
inline void guarded(std::vector<IdentityReport>& out, IdentityKind kind,
                    std::vector<long> indices, Fn&& fn) {
  try {
    out.push_back(fn());
  } catch (const NumericGuardError& e) {
    IdentityReport rep{kind,
                       std::move(indices),
                       Real::infinity(kMinPrecisionBits),
                       Real(0L, kMinPrecisionBits),
                       false,
                       true,
                       -1,
                       e.what()};
    out.push_back(std::move(rep));
  }
}

}  // namespace detail

// Runs the selected identities over deterministic index grids, ordered by
// identity and then by indices.  Guard aborts inside a single check are
// recorded as failed reports instead of tearing down the whole run.
inline std::vector<IdentityReport> run_identity_suite(const SuiteOptions& opt) {
  std::vector<IdentityReport> out;
  const Real& p = opt.p;
  const UnitPhase& phase = opt.phase;
  const PrecisionContext& ctx = opt.ctx;
  long n_hi = detail::capped_n(opt, opt.n_max);

  if (detail::wants(opt, IdentityKind::kOrthogonality) ||
      detail::wants(opt, IdentityKind::kInjClosed)) {
    // One truncation length serves the whole grid; the per-report tolerance
    // still accounts for the actual tail.
    measure::WrappedGeometricMeasure mu(p, phase, 1);
    long S = mu.truncation_for(opt.truncation_tol, ctx);
    if (detail::wants(opt, IdentityKind::kOrthogonality)) {
      for (long n = 0; n <= n_hi; ++n)
        for (long j = 0; j <= n; ++j)
          detail::guarded(out, IdentityKind::kOrthogonality, {n, j}, [&] {
            return check_inj_bruteforce(n, j, S, p, phase, ctx, opt.source);
          });
    }
    if (detail::wants(opt, IdentityKind::kInjClosed)) {
      for (long n = 0; n <= n_hi; ++n)
        for (long j = 0; j <= n; ++j)
          detail::guarded(out, IdentityKind::kInjClosed, {n, j}, [&] {
            return check_inj_closed_vs_bruteforce(n, j, S, p, phase, ctx,
                                                  opt.source);
          });
    }
  }

  if (detail::wants(opt, IdentityKind::kDuality)) {
    long s_hi = detail::capped_n(opt, opt.s_max);
    for (long n = 0; n <= n_hi; ++n)
      for (long s = 0; s <= s_hi; ++s)
        detail::guarded(out, IdentityKind::kDuality, {n, s}, [&] {
          return duality_residual(n, s, p, phase, ctx, opt.source);
        });
  }

  if (detail::wants(opt, IdentityKind::kRIRecurrence)) {
    // Sample points: the first few atoms plus two off-circle probes.
    std::vector<Complex> zs;
    for (long s = 0; s <= 5; ++s) zs.push_back(phase.power(s, ctx));
    zs.push_back(Complex(2L, ctx.precision_bits));
    zs.push_back(Complex(0.5, 0.1, ctx.precision_bits));
    long top = detail::capped_n(opt, opt.n_max + 1) - 1;
    for (long n = 0; n <= top; ++n)
      for (long zi = 0; zi < static_cast<long>(zs.size()); ++zi)
        detail::guarded(out, IdentityKind::kRIRecurrence, {n, zi}, [&] {
          IdentityReport rep = ri_recurrence_residual(
              n, zs[static_cast<size_t>(zi)], p, phase, ctx, opt.source);
          rep.indices = {n, zi};
          return rep;
        });
  }

  if (detail::wants(opt, IdentityKind::kQDifference)) {
    for (long n = 0; n <= n_hi; ++n)
      for (long s = 0; s <= opt.s_max; ++s)
        detail::guarded(out, IdentityKind::kQDifference, {n, s}, [&] {
          return qdifference_residual(n, s, p, phase, ctx, opt.source);
        });
  }

  if (detail::wants(opt, IdentityKind::kMassSum)) {
    for (long s : opt.masssum_s)
      detail::guarded(out, IdentityKind::kMassSum, {s}, [&] {
        return mass_sum_partial(s, opt.masssum_budget, p, phase, ctx,
                                opt.masssum_gap, opt.source)
            .report;
      });
  }

  if (detail::wants(opt, IdentityKind::kNgonOrthogonality) &&
      phase.is_rational()) {
    long N = phase.den();
    long M = phase.num();
    long hi = std::min(n_hi, N - 1);
    for (long n = 0; n <= hi; ++n)
      for (long m = 0; m <= hi; ++m)
        detail::guarded(out, IdentityKind::kNgonOrthogonality, {N, M, n, m},
                        [&] {
                          return ngon_orthogonality(N, M, p, n, m, ctx,
                                                    opt.source);
                        });
  }

  if (detail::wants(opt, IdentityKind::kSaalschutzSpot)) {
    auto sweep = saalschutz_sweep(opt.saalschutz_count, opt.saalschutz_n_max,
                                  opt.seed, phase, ctx);
    for (auto& rep : sweep) out.push_back(std::move(rep));
  }

  return out;
}

// strict mode refuses to let inconclusive checks slide.
inline bool suite_passed(const std::vector<IdentityReport>& reports,
                         bool strict) {
  for (const auto& r : reports) {
    if (r.passed) continue;
    if (!r.conclusive && !strict) continue;
    return false;
  }
  return true;
}

}  // namespace identities
}  // namespace wgopuc
