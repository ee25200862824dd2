#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"
#include "wgopuc/complex.hpp"
#include "wgopuc/identities.hpp"
#include "wgopuc/opuc.hpp"
#include "wgopuc/real.hpp"

namespace wgopuc {
namespace cli {

using ordered_json = nlohmann::ordered_json;

// Enough decimal digits to reproduce a binary value of this width exactly on
// re-parse (round trip through from_string).
inline long digits_for_bits(mpfr_prec_t bits) {
  return static_cast<long>(
             std::ceil(static_cast<double>(bits) * 0.30102999566398119521)) +
         2;
}

inline std::string decimal(const Real& x, long digits) {
  if (!x.is_finite()) return x.sign() < 0 ? "-inf" : "inf";
  return x.to_sci(static_cast<int>(digits));
}

inline std::string decimal(const Real& x) {
  return decimal(x, digits_for_bits(x.prec()));
}

// Numbers travel as decimal strings: JSON doubles would silently truncate.
inline ordered_json json_complex(const Complex& z, long digits) {
  return ordered_json::array({decimal(z.re, digits), decimal(z.im, digits)});
}

inline std::string csv_join(const std::vector<std::string>& fields) {
  std::string line;
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += fields[i];
  }
  return line;
}

// Commas inside free-text fields would break the row format.
inline std::string csv_safe(std::string s) {
  for (auto& c : s)
    if (c == ',' || c == '\n') c = ';';
  return s;
}

inline std::string indices_field(const std::vector<long>& idx) {
  std::string out;
  for (size_t i = 0; i < idx.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(idx[i]);
  }
  return out;
}

inline ordered_json report_json(const identities::IdentityReport& r,
                                long digits) {
  ordered_json j;
  j["identity"] = identities::identity_name(r.identity);
  j["indices"] = r.indices;
  j["residual"] = decimal(r.residual, digits);
  j["tolerance"] = decimal(r.tolerance, digits);
  j["passed"] = r.passed;
  j["conclusive"] = r.conclusive;
  if (r.truncation_terms >= 0) j["terms"] = r.truncation_terms;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline std::string report_csv_header() {
  return "identity,indices,residual,tolerance,passed,conclusive,terms,note";
}

inline std::string report_csv_row(const identities::IdentityReport& r,
                                  long digits) {
  std::vector<std::string> f;
  f.push_back(identities::identity_name(r.identity));
  f.push_back(indices_field(r.indices));
  f.push_back(decimal(r.residual, digits));
  f.push_back(decimal(r.tolerance, digits));
  f.push_back(r.passed ? "1" : "0");
  f.push_back(r.conclusive ? "1" : "0");
  f.push_back(r.truncation_terms >= 0 ? std::to_string(r.truncation_terms)
                                      : "");
  f.push_back(csv_safe(r.note));
  return csv_join(f);
}

inline ordered_json poly_json(const opuc::MonicPolynomial& phi, long digits) {
  ordered_json j;
  j["degree"] = phi.degree();
  ordered_json coeffs = ordered_json::array();
  for (long k = 0; k <= phi.degree(); ++k)
    coeffs.push_back(json_complex(phi.coeff(k), digits));
  j["coeffs"] = coeffs;
  return j;
}

}  // namespace cli
}  // namespace wgopuc
