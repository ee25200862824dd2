#include <catch2/catch_amalgamated.hpp>

#include "wgopuc/qseries.hpp"

using namespace wgopuc;
using namespace wgopuc::qseries;

namespace {

const PrecisionContext ctx = PrecisionContext::make(256);
const mpfr_prec_t P = ctx.precision_bits;

Real tol(long e) { return Real::two_pow(e, P); }

// Definitional sum for the terminating 2phi1, assembled from Pochhammer
// products; slow but independent of the incremental term-ratio code path.
Complex phi21_by_definition(long n, const Complex& b, const Complex& c,
                            const Complex& z, const UnitPhase& phase) {
  Complex sum = Complex::zero(P);
  for (long s = 0; s <= n; ++s) {
    Complex num = q_pochhammer_shifted(Complex::one(P), -n, s, phase, ctx) *
                  q_pochhammer(b, s, phase, ctx);
    Complex den = q_pochhammer_shifted(Complex::one(P), 1, s, phase, ctx) *
                  q_pochhammer(c, s, phase, ctx);
    sum += num * pow_si(z, s, P) / den;
  }
  return sum;
}

Complex phi32_by_definition(long n, const Complex& a2, const Complex& a3,
                            const Complex& b1, const Complex& b2,
                            const Complex& z, const UnitPhase& phase) {
  Complex sum = Complex::zero(P);
  for (long s = 0; s <= n; ++s) {
    Complex num = q_pochhammer_shifted(Complex::one(P), -n, s, phase, ctx) *
                  q_pochhammer(a2, s, phase, ctx) * q_pochhammer(a3, s, phase, ctx);
    Complex den = q_pochhammer_shifted(Complex::one(P), 1, s, phase, ctx) *
                  q_pochhammer(b1, s, phase, ctx) * q_pochhammer(b2, s, phase, ctx);
    sum += num * pow_si(z, s, P) / den;
  }
  return sum;
}

}  // namespace

TEST_CASE("rational phase reduces and validates", "[qseries]") {
  UnitPhase h = UnitPhase::rational(2, 4);
  REQUIRE(h.is_rational());
  REQUIRE(h.num() == 1);
  REQUIRE(h.den() == 2);
  UnitPhase t = UnitPhase::rational(5, 3);
  REQUIRE(t.num() == 2);
  UnitPhase m = UnitPhase::rational(-1, 4);
  REQUIRE(m.num() == 3);
  REQUIRE(m.den() == 4);

  REQUIRE_THROWS_AS(UnitPhase::rational(0, 5), ConfigError);
  REQUIRE_THROWS_AS(UnitPhase::rational(3, 3), ConfigError);
  REQUIRE_THROWS_AS(UnitPhase::rational(1, 0), ConfigError);
  REQUIRE_THROWS_AS(UnitPhase::irrational(Real(1.5, P)), ConfigError);
  REQUIRE_THROWS_AS(UnitPhase::irrational(Real(P)), ConfigError);

  REQUIRE(UnitPhase::rational(1, 4).chi_value(P) == Real(0.25, P));
}

TEST_CASE("powers at quarter turns are exact", "[qseries]") {
  UnitPhase quarter = UnitPhase::rational(1, 4);
  Complex q1 = quarter.power(1, ctx);
  REQUIRE(q1.re.is_zero());
  REQUIRE(q1.im == 1L);
  Complex q2 = quarter.power(2, ctx);
  REQUIRE(q2.re == -1L);
  REQUIRE(q2.im.is_zero());
  Complex q3 = quarter.power(3, ctx);
  REQUIRE(q3.im == -1L);
  Complex q4 = quarter.power(4, ctx);
  REQUIRE(q4.re == 1L);
  REQUIRE(q4.im.is_zero());
  Complex qm1 = quarter.power(-1, ctx);
  REQUIRE(qm1.im == -1L);

  UnitPhase third = UnitPhase::rational(1, 3);
  Complex c = third.power(3000000000L % 3 == 0 ? 3 : 3, ctx);
  REQUIRE(c.re == 1L);
  REQUIRE(c.im.is_zero());
  Complex w = third.power(1, ctx);
  REQUIRE(abs(w.re + Real(0.5, P)) < tol(-250));
  REQUIRE(abs(w.im - sqrt(Real(3L, P)) / 2L) < tol(-250));
}

TEST_CASE("golden phase powers stay on the circle", "[qseries]") {
  UnitPhase g = UnitPhase::golden(ctx);
  REQUIRE_FALSE(g.is_rational());
  Real chi = g.chi_value(P);
  REQUIRE(chi > Real(0.6180, P));
  REQUIRE(chi < Real(0.6181, P));

  for (long n : {1L, 37L, 10000L, 1000000L}) {
    Complex u = g.power(n, ctx) * g.power(-n, ctx);
    REQUIRE(dist(u, Complex::one(P)) < tol(-248));
    REQUIRE(abs(norm(g.power(n, ctx)) - Real(1L, P)) < tol(-248));
  }
  // argument reduction keeps large exponents as sharp as small ones
  Complex direct = g.power(1000001L, ctx);
  Complex stepped = g.power(1000000L, ctx) * g.power(1L, ctx);
  REQUIRE(dist(direct, stepped) < tol(-248));

  REQUIRE(g.power(123456L, ctx).re.to_sci(60) == g.power(123456L, ctx).re.to_sci(60));
}

TEST_CASE("pochhammer value at a fourth root of unity", "[qseries]") {
  UnitPhase quarter = UnitPhase::rational(1, 4);
  // (q;q)_3 = (1-i)(1+1)(1+i) = 4, exactly
  Complex v = q_pochhammer(quarter.power(1, ctx), 3, quarter, ctx);
  REQUIRE(v.re == 4L);
  REQUIRE(v.im.is_zero());

  Complex a(0.3, -0.4, P);
  REQUIRE(dist(q_pochhammer(a, 0, quarter, ctx), Complex::one(P)).is_zero());
}

TEST_CASE("pochhammer composition across sign changes", "[qseries]") {
  UnitPhase g = UnitPhase::golden(ctx);
  Complex a(0.3, 0.2, P);

  // (a;q)_{m+n} = (a;q)_m (a q^m;q)_n with m=5, n=-2
  Complex lhs = q_pochhammer(a, 3, g, ctx);
  Complex rhs = q_pochhammer(a, 5, g, ctx) * q_pochhammer_shifted(a, 5, -2, g, ctx);
  REQUIRE(dist(lhs, rhs) < tol(-240));

  // (a;q)_{-n} (a q^{-n};q)_n = 1
  Complex prod = q_pochhammer(a, -3, g, ctx) * q_pochhammer_shifted(a, -3, 3, g, ctx);
  REQUIRE(dist(prod, Complex::one(P)) < tol(-240));
}

TEST_CASE("integer-exponent factors cancel to exact zero", "[qseries]") {
  for (const UnitPhase& phase : {UnitPhase::rational(3, 7), UnitPhase::golden(ctx)}) {
    // (q^-2;q)_3 contains the factor 1 - q^0
    Complex v = q_pochhammer_shifted(Complex::one(P), -2, 3, phase, ctx);
    REQUIRE(v.is_zero());
    // one step short of the zero factor stays nonzero
    REQUIRE_FALSE(q_pochhammer_shifted(Complex::one(P), -2, 2, phase, ctx).is_zero());
  }
}

TEST_CASE("negative index through a vanishing factor trips the guard", "[qseries]") {
  UnitPhase g = UnitPhase::golden(ctx);
  REQUIRE_THROWS_AS(q_pochhammer_shifted(Complex::one(P), 1, -1, g, ctx),
                    SmallDivisorError);
  REQUIRE_THROWS_AS(div_guarded(Complex::one(P), Complex::zero(P), ctx, "test"),
                    SmallDivisorError);
}

TEST_CASE("terminating 2phi1 matches its defining sum", "[qseries]") {
  UnitPhase g = UnitPhase::golden(ctx);
  Complex b(0.3, 0.1, P), c(0.7, -0.2, P), z(0.4, 0.5, P);
  for (long n : {0L, 1L, 4L, 9L}) {
    Complex fast = phi_2_1_terminating(n, b, c, z, g, ctx);
    Complex slow = phi21_by_definition(n, b, c, z, g);
    REQUIRE(dist(fast, slow) < tol(-230));
  }
  REQUIRE_THROWS_AS(phi_2_1_terminating(-1, b, c, z, g, ctx), ConfigError);
}

TEST_CASE("2phi1 at argument q collapses to a Pochhammer quotient", "[qseries]") {
  // Chu-Vandermonde: 2phi1(q^-n, b; c; q, q) = (c/b;q)_n b^n / (c;q)_n
  UnitPhase g = UnitPhase::golden(ctx);
  Complex b(0.3, 0.1, P), c(0.7, -0.2, P);
  for (long n : {1L, 2L, 6L}) {
    Complex lhs = phi_2_1_terminating(n, b, c, g.power(1, ctx), g, ctx);
    Complex rhs = q_pochhammer(c / b, n, g, ctx) * pow_si(b, n, P) /
                  q_pochhammer(c, n, g, ctx);
    REQUIRE(dist(lhs, rhs) < tol(-230));
  }
}

TEST_CASE("terminating 3phi2 matches its defining sum", "[qseries]") {
  UnitPhase g = UnitPhase::golden(ctx);
  Complex a2(0.25, -0.15, P), a3(0.5, 0.3, P), b1(0.8, 0.1, P), z(0.6, -0.2, P);
  Complex b2 = Complex::zero(P);  // (0;q)_s = 1
  for (long n : {0L, 3L, 7L}) {
    Complex fast = phi_3_2_terminating(n, a2, a3, b1, b2, z, g, ctx);
    Complex slow = phi32_by_definition(n, a2, a3, b1, b2, z, g);
    REQUIRE(dist(fast, slow) < tol(-230));
  }
  Complex b2nz(0.45, 0.2, P);
  Complex fast = phi_3_2_terminating(5, a2, a3, b1, b2nz, z, g, ctx);
  Complex slow = phi32_by_definition(5, a2, a3, b1, b2nz, z, g);
  REQUIRE(dist(fast, slow) < tol(-230));
}

TEST_CASE("balanced 3phi2 sums to the closed product", "[qseries]") {
  UnitPhase g = UnitPhase::golden(ctx);
  Complex a(0.4, 0.3, P), b(0.25, -0.15, P), c(0.8, 0.1, P);
  for (long n : {0L, 1L, 3L, 8L}) {
    Complex lhs = q_saalschutz_lhs(n, a, b, c, g, ctx);
    Complex rhs = q_saalschutz_rhs(n, a, b, c, g, ctx);
    REQUIRE(dist(lhs, rhs) < tol(-220));
  }
}
