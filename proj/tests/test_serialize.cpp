#include <catch2/catch_amalgamated.hpp>

#include "wgopuc/serialize.hpp"

using namespace wgopuc;
using namespace wgopuc::cli;

namespace {

const PrecisionContext ctx = PrecisionContext::make(256);
const mpfr_prec_t P = ctx.precision_bits;

Real tol(long e) { return Real::two_pow(e, P); }

}  // namespace

TEST_CASE("digit budget covers the precision", "[serialize]") {
  REQUIRE(digits_for_bits(256) == 80);
  REQUIRE(digits_for_bits(64) == 22);
  REQUIRE(digits_for_bits(512) == 157);
}

TEST_CASE("decimal renderings round-trip", "[serialize]") {
  Real x = Real::pi(P) / 3L;
  std::string s = decimal(x);
  Real back = Real::from_string(s, P);
  REQUIRE(abs(x - back) <= tol(-250));

  // exact binary values survive unchanged
  Real e = Real::two_pow(-7, P);
  REQUIRE(Real::from_string(decimal(e), P) == e);

  Real neg = -Real::two_pow(3, P);
  REQUIRE(Real::from_string(decimal(neg), P) == neg);
}

TEST_CASE("non-finite values render as text", "[serialize]") {
  REQUIRE(decimal(Real::infinity(P)) == "inf");
  REQUIRE(decimal(-Real::infinity(P)) == "-inf");
}

TEST_CASE("csv helpers join and sanitize", "[serialize]") {
  REQUIRE(csv_join({"a", "b", "c"}) == "a,b,c");
  REQUIRE(csv_join({}) == "");
  REQUIRE(csv_safe("plain") == "plain");
  REQUIRE(csv_safe("x, y\nz") == "x; y;z");
  REQUIRE(indices_field({3, -1, 7}) == "3;-1;7");
  REQUIRE(indices_field({}) == "");
}

TEST_CASE("report serialization carries every field", "[serialize]") {
  identities::IdentityReport rep{identities::IdentityKind::kDuality,
                                 {4, 2},
                                 Real::two_pow(-100, P),
                                 Real::two_pow(-60, P),
                                 true,
                                 true,
                                 -1,
                                 ""};
  auto j = report_json(rep, 40);
  REQUIRE(j["identity"] == "duality");
  REQUIRE(j["indices"].size() == 2);
  REQUIRE(j["passed"] == true);
  REQUIRE(j.contains("terms") == false);
  REQUIRE(j.contains("note") == false);

  rep.truncation_terms = 55;
  rep.note = "guard, tripped";
  rep.passed = false;
  j = report_json(rep, 40);
  REQUIRE(j["terms"] == 55);
  REQUIRE(j["note"] == "guard, tripped");

  std::string row = report_csv_row(rep, 40);
  long commas = 0;
  for (char c : row)
    if (c == ',') ++commas;
  REQUIRE(commas == 7);  // 8 columns, note comma sanitized away
  REQUIRE(row.find("guard; tripped") != std::string::npos);
  REQUIRE(row.substr(0, 8) == "duality,");
  REQUIRE(report_csv_header().find("residual") != std::string::npos);
}

TEST_CASE("polynomial serialization preserves the coefficients",
          "[serialize]") {
  auto phi = opuc::phi_via_hypergeometric(3, Real(0.5, P),
                                          UnitPhase::golden(ctx), ctx);
  auto j = poly_json(phi, digits_for_bits(P));
  REQUIRE(j["degree"] == 3);
  REQUIRE(j["coeffs"].size() == 4);
  for (long k = 0; k <= 3; ++k) {
    Real re = Real::from_string(j["coeffs"][k][0].get<std::string>(), P);
    Real im = Real::from_string(j["coeffs"][k][1].get<std::string>(), P);
    REQUIRE(dist(Complex(re, im), phi.coeff(k)) <= tol(-250));
  }
}

TEST_CASE("complex values serialize as string pairs", "[serialize]") {
  auto j = json_complex(Complex(1.5, -2.5, P), 10);
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 2);
  REQUIRE(j[0].get<std::string>().substr(0, 3) == "1.5");
  REQUIRE(j[1].get<std::string>().substr(0, 4) == "-2.5");
}
