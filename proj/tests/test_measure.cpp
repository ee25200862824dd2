#include <catch2/catch_amalgamated.hpp>

#include "wgopuc/measure.hpp"

using namespace wgopuc;
using measure::WrappedGeometricMeasure;

namespace {

const PrecisionContext ctx = PrecisionContext::make(256);
const mpfr_prec_t P = ctx.precision_bits;

Real tol(long e) { return Real::two_pow(e, P); }

}  // namespace

TEST_CASE("quarter-turn atoms land on the axes", "[measure]") {
  WrappedGeometricMeasure mu(Real(0.5, P), UnitPhase::rational(1, 4));
  auto atoms = mu.atoms(3, ctx);
  REQUIRE(atoms.size() == 3);

  // masses (1-p)p^s = 1/2, 1/4, 1/8 are exact binary values
  REQUIRE(atoms[0].mass.re == Real::two_pow(-1, P));
  REQUIRE(atoms[1].mass.re == Real::two_pow(-2, P));
  REQUIRE(atoms[2].mass.re == Real::two_pow(-3, P));
  REQUIRE(atoms[0].mass.im.is_zero());

  // atom 1 sits at i exactly, atom 2 at -1
  REQUIRE(atoms[1].z.re.is_zero());
  REQUIRE(atoms[1].z.im == Real(1L, P));
  REQUIRE(atoms[2].z.re == Real(-1L, P));
  REQUIRE(atoms[2].z.im.is_zero());

  REQUIRE(atoms[0].theta.is_zero());
  REQUIRE(abs(atoms[1].theta - Real::pi(P) / 2L) <= tol(-250));
  REQUIRE(abs(atoms[2].theta - Real::pi(P)) <= tol(-250));

  Real total(P);
  for (const auto& a : atoms) total = total + a.mass.re;
  REQUIRE(total == Real(1L, P) - Real::two_pow(-3, P));
}

TEST_CASE("rational phase wraps atoms onto repeated angles", "[measure]") {
  WrappedGeometricMeasure mu(Real(0.3, P), UnitPhase::rational(1, 5));
  auto atoms = mu.atoms(10, ctx);
  for (long s = 0; s < 5; ++s) {
    // same point on the circle, bit for bit
    REQUIRE(atoms[s].theta == atoms[s + 5].theta);
    REQUIRE(atoms[s].z.re == atoms[s + 5].z.re);
    REQUIRE(atoms[s].z.im == atoms[s + 5].z.im);
  }
}

TEST_CASE("closed moments at hand-checked points", "[measure]") {
  Real p(0.5, P);
  WrappedGeometricMeasure mu(p, UnitPhase::rational(1, 4));

  Complex s0 = mu.moment_closed(0, ctx);
  REQUIRE(dist(s0, Complex::one(P)) <= tol(-250));

  // (1-p)/(1-p i) = 0.4 + 0.2 i
  Complex s1 = mu.moment_closed(1, ctx);
  REQUIRE(abs(s1.re - Real::from_string("0.4", P)) <= tol(-250));
  REQUIRE(abs(s1.im - Real::from_string("0.2", P)) <= tol(-250));

  // order 2: sigma_0 = 1/((1-p)(1-pq))
  WrappedGeometricMeasure mu2(p, UnitPhase::rational(1, 4), 2);
  Complex t0 = mu2.moment_closed(0, ctx);
  Complex expect = recip(Complex(1L - p) * (1L - Complex(Real(P), p)));
  REQUIRE(dist(t0, expect) <= tol(-248));
}

TEST_CASE("brute-force sums confirm the closed moments", "[measure]") {
  auto gold = UnitPhase::golden(ctx);
  Real target = Real::two_pow(-110, P);
  for (double pv : {0.3, 0.5, 0.7}) {
    WrappedGeometricMeasure mu(Real(pv, P), gold);
    long S = mu.truncation_for(target, ctx);
    for (long n = -20; n <= 20; ++n) {
      Complex closed = mu.moment_closed(n, ctx);
      Complex brute = mu.moment_bruteforce(n, S, ctx);
      REQUIRE(dist(closed, brute) <= tol(-104));
    }
  }
}

TEST_CASE("moment symmetry holds for k=1 and breaks for k=2", "[measure]") {
  auto gold = UnitPhase::golden(ctx);
  WrappedGeometricMeasure mu(Real(0.3, P), gold);
  for (long n = 1; n <= 64; ++n) {
    Complex pos = mu.moment_closed(n, ctx);
    Complex neg = mu.moment_closed(-n, ctx);
    REQUIRE(dist(neg, conj(pos)) <= tol(-240));
  }

  WrappedGeometricMeasure mu2(Real(0.5, P), gold, 2);
  Complex pos = mu2.moment_closed(1, ctx);
  Complex neg = mu2.moment_closed(-1, ctx);
  REQUIRE(dist(neg, conj(pos)) > Real(0.1, P));
  REQUIRE(mu2.is_positive() == false);
  REQUIRE(mu.is_positive());
}

TEST_CASE("moment moduli stay inside the band", "[measure]") {
  Real p(0.42, P);
  WrappedGeometricMeasure mu(p, UnitPhase::golden(ctx));
  Real lo = (1L - p) / (p + 1L);
  for (long n = 1; n <= 40; ++n) {
    Real m = abs(mu.moment_closed(n, ctx));
    REQUIRE(m >= lo - tol(-240));
    REQUIRE(m < Real(1L, P));
  }
}

TEST_CASE("rational phase makes moments periodic in n", "[measure]") {
  WrappedGeometricMeasure mu(Real(0.5, P), UnitPhase::rational(2, 7));
  for (long n = -10; n <= 10; ++n) {
    Complex a = mu.moment_closed(n, ctx);
    Complex b = mu.moment_closed(n + 7, ctx);
    REQUIRE(dist(a, b) <= tol(-248));
  }
}

TEST_CASE("tail bounds and truncation lengths", "[measure]") {
  Real p(0.5, P);
  WrappedGeometricMeasure mu(p, UnitPhase::golden(ctx));
  // k=1 tail is exactly p^S
  REQUIRE(mu.tail_mass_bound(10, ctx) == Real::two_pow(-10, P));
  Real target = Real::two_pow(-90, P);
  long S = mu.truncation_for(target, ctx);
  REQUIRE(S >= 1);
  REQUIRE(mu.tail_mass_bound(S, ctx) <= target);

  WrappedGeometricMeasure mu3(Real(0.7, P), UnitPhase::golden(ctx), 3);
  long S3 = mu3.truncation_for(target, ctx);
  REQUIRE(mu3.tail_mass_bound(S3, ctx) <= target);
  // the bound really dominates the discarded mass
  Complex full = mu3.moment_closed(0, ctx);
  Complex part = mu3.moment_bruteforce(0, S3, ctx);
  REQUIRE(dist(full, part) <= mu3.tail_mass_bound(S3, ctx) * 2L);
}

TEST_CASE("rigid rotation twists moments by a unit factor", "[measure]") {
  Real p(0.5, P);
  Real phi(0.7, P);
  auto gold = UnitPhase::golden(ctx);
  WrappedGeometricMeasure flat(p, gold);
  WrappedGeometricMeasure spun(p, gold, 1, phi);
  for (long n = -6; n <= 6; ++n) {
    Complex expect =
        flat.moment_closed(n, ctx) * unit_from_angle(phi * Real(n, P), P);
    REQUIRE(dist(spun.moment_closed(n, ctx), expect) <= tol(-245));
  }
  // angles shift by phi
  Real dt = spun.theta(3, ctx) - flat.theta(3, ctx);
  if (dt < 0L) dt = dt + Real::pi(P) * 2L;
  REQUIRE(abs(dt - phi) <= tol(-245));
}

TEST_CASE("order-k weights start at one", "[measure]") {
  WrappedGeometricMeasure mu(Real(0.6, P), UnitPhase::golden(ctx), 2);
  REQUIRE(dist(mu.weight(0, ctx), Complex::one(P)) <= tol(-250));
}

TEST_CASE("measure parameter validation", "[measure]") {
  auto q = UnitPhase::rational(1, 3);
  REQUIRE_THROWS_AS(WrappedGeometricMeasure(Real(0.0, P), q), ConfigError);
  REQUIRE_THROWS_AS(WrappedGeometricMeasure(Real(1.0, P), q), ConfigError);
  REQUIRE_THROWS_AS(WrappedGeometricMeasure(Real(-0.5, P), q), ConfigError);
  REQUIRE_THROWS_AS(WrappedGeometricMeasure(Real(0.5, P), q, 0), ConfigError);
  REQUIRE_THROWS_AS(WrappedGeometricMeasure(Real(0.5, P), q, -2), ConfigError);
  REQUIRE_THROWS(WrappedGeometricMeasure(Real(0.5, P), q).atoms(0, ctx));
}
