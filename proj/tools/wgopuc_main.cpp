#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wgopuc/identities.hpp"
#include "wgopuc/measure.hpp"
#include "wgopuc/opuc.hpp"
#include "wgopuc/serialize.hpp"

using namespace wgopuc;
using cli::decimal;
using cli::ordered_json;

namespace {

struct RunConfig {
  std::string p = "0.5";
  std::string chi = "golden";
  long k = 1;
  std::string phi = "0";
  long precision_bits = 256;
  std::string tol_rel;  // empty: derived from precision_bits
  std::string tol_div;
  long max_degree = 64;
  std::string truncation_tol;  // empty: tol_rel
  std::string format = "csv";
  std::string out;
  unsigned long long seed = 20240901ULL;
};

struct Runtime {
  PrecisionContext ctx;
  Real p;
  UnitPhase phase;
  Real rotation_phi;
  Real truncation_tol;
  long digits;
};

UnitPhase parse_chi(const std::string& text, const PrecisionContext& ctx) {
  if (text == "golden") return UnitPhase::golden(ctx);
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    long num, den;
    try {
      num = std::stol(text.substr(0, slash));
      den = std::stol(text.substr(slash + 1));
    } catch (const std::exception&) {
      throw ConfigError("cannot parse rational chi '" + text + "'");
    }
    return UnitPhase::rational(num, den);
  }
  // Decimal input is parsed at working precision, never through a double.
  Real chi = Real::from_string(text, ctx.precision_bits + 64);
  return UnitPhase::irrational(chi);
}

Runtime build_runtime(const RunConfig& rc) {
  PrecisionContext ctx =
      (rc.tol_rel.empty() && rc.tol_div.empty())
          ? PrecisionContext::make(rc.precision_bits)
          : PrecisionContext::make(
                rc.precision_bits,
                rc.tol_rel.empty()
                    ? PrecisionContext::make(rc.precision_bits).tol_rel
                    : Real::from_string(rc.tol_rel, rc.precision_bits),
                rc.tol_div.empty()
                    ? PrecisionContext::make(rc.precision_bits).tol_div
                    : Real::from_string(rc.tol_div, rc.precision_bits));
  Real p = Real::from_string(rc.p, ctx.precision_bits + 64);
  UnitPhase phase = parse_chi(rc.chi, ctx);
  Real phi = Real::from_string(rc.phi, ctx.precision_bits + 64);
  Real trunc = rc.truncation_tol.empty()
                   ? ctx.tol_rel
                   : Real::from_string(rc.truncation_tol, ctx.precision_bits);
  long digits = cli::digits_for_bits(ctx.precision_bits);
  return {std::move(ctx), std::move(p),    std::move(phase),
          std::move(phi), std::move(trunc), digits};
}

void write_output(const RunConfig& rc, const std::string& content) {
  if (rc.out.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream f(rc.out, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file '" + rc.out + "'");
  f << content;
}

ordered_json config_json(const RunConfig& rc) {
  ordered_json j;
  j["p"] = rc.p;
  j["chi"] = rc.chi;
  j["k"] = rc.k;
  j["phi"] = rc.phi;
  j["precision_bits"] = rc.precision_bits;
  j["seed"] = rc.seed;
  return j;
}

// ---- moments ----------------------------------------------------------------

int cmd_moments(const RunConfig& rc, long n_min, long n_max, bool bruteforce) {
  if (n_min > n_max) throw ConfigError("--n-min must not exceed --n-max");
  Runtime rt = build_runtime(rc);
  measure::WrappedGeometricMeasure mu(rt.p, rt.phase, rc.k, rt.rotation_phi);
  long S = bruteforce ? mu.truncation_for(rt.truncation_tol, rt.ctx) : 0;

  std::string out;
  ordered_json jrows = ordered_json::array();
  if (rc.format == "csv") {
    out = "n,sigma_re,sigma_im,sigma_abs";
    if (bruteforce) out += ",brute_re,brute_im,terms";
    out += '\n';
  }
  for (long n = n_min; n <= n_max; ++n) {
    Complex sigma = mu.moment_closed(n, rt.ctx);
    Real mag = abs(sigma);
    if (rc.format == "csv") {
      std::vector<std::string> f{std::to_string(n), decimal(sigma.re, rt.digits),
                                 decimal(sigma.im, rt.digits),
                                 decimal(mag, rt.digits)};
      if (bruteforce) {
        Complex b = mu.moment_bruteforce(n, S, rt.ctx);
        f.push_back(decimal(b.re, rt.digits));
        f.push_back(decimal(b.im, rt.digits));
        f.push_back(std::to_string(S));
      }
      out += cli::csv_join(f) + '\n';
    } else {
      ordered_json r;
      r["n"] = n;
      r["sigma"] = cli::json_complex(sigma, rt.digits);
      r["abs"] = decimal(mag, rt.digits);
      if (bruteforce) {
        r["brute"] = cli::json_complex(mu.moment_bruteforce(n, S, rt.ctx),
                                       rt.digits);
        r["terms"] = S;
      }
      jrows.push_back(std::move(r));
    }
  }
  if (rc.format == "json") {
    ordered_json j;
    j["config"] = config_json(rc);
    j["rows"] = std::move(jrows);
    out = j.dump(2) + '\n';
  }
  write_output(rc, out);
  return 0;
}

// ---- verblunsky -------------------------------------------------------------

int cmd_verblunsky(const RunConfig& rc, long n_max) {
  Runtime rt = build_runtime(rc);
  if (rc.k != 1)
    throw ConfigError("verblunsky coefficients are defined for k=1 only");
  auto v = opuc::VerblunskySequence::closed_form(n_max, rt.p, rt.phase, rt.ctx);
  mpfr_prec_t prec = rt.ctx.precision_bits;
  Real band_lo = (1L - rt.p) / (rt.p + 1L);
  Real beta = Real(4L, prec) * rt.p / sqr(1L - rt.p);
  Real chi = rt.phase.chi_value(prec);
  bool rotated = !rt.rotation_phi.is_zero();

  std::string out;
  ordered_json jrows = ordered_json::array();
  if (rc.format == "csv")
    out = "n,a_re,a_im,a_abs,band_lo,abs2_formula\n";
  for (long n = -1; n <= n_max; ++n) {
    Complex a = v.at(n);
    if (rotated)
      a = a * unit_from_angle(-(rt.rotation_phi * Real(n + 1, prec)), prec);
    Real mag = abs(a);
    Real ang = chi * Real::pi(prec) * Real(n + 1, prec);
    Real formula = 1L / (beta * sqr(sin(ang)) + 1L);
    if (rc.format == "csv") {
      out += cli::csv_join({std::to_string(n), decimal(a.re, rt.digits),
                            decimal(a.im, rt.digits), decimal(mag, rt.digits),
                            decimal(band_lo, rt.digits),
                            decimal(formula, rt.digits)}) +
             '\n';
    } else {
      ordered_json r;
      r["n"] = n;
      r["a"] = cli::json_complex(a, rt.digits);
      r["abs"] = decimal(mag, rt.digits);
      r["band_lo"] = decimal(band_lo, rt.digits);
      r["abs2_formula"] = decimal(formula, rt.digits);
      jrows.push_back(std::move(r));
    }
  }
  if (rc.format == "json") {
    ordered_json j;
    j["config"] = config_json(rc);
    j["rows"] = std::move(jrows);
    out = j.dump(2) + '\n';
  }
  write_output(rc, out);
  return 0;
}

// ---- poly -------------------------------------------------------------------

opuc::MonicPolynomial build_path(const std::string& path, long n,
                                 const RunConfig& rc, const Runtime& rt,
                                 Complex* delta_out) {
  bool rotated = !rt.rotation_phi.is_zero();
  if (path == "recurrence") {
    if (rc.k != 1)
      throw ConfigError("recurrence path is only defined for k=1");
    auto v =
        opuc::VerblunskySequence::closed_form(n - 1, rt.p, rt.phase, rt.ctx);
    auto phi = opuc::phi_via_recurrence(n, v, rt.ctx);
    return rotated ? opuc::rotate(phi, rt.rotation_phi, rt.ctx) : phi;
  }
  if (path == "hyper") {
    auto par = opuc::PastroParams::order_k(rt.p, rc.k, rt.phase, rt.ctx);
    auto phi = opuc::pastro_polynomial(n, par, rt.phase, rt.ctx);
    return rotated ? opuc::rotate(phi, rt.rotation_phi, rt.ctx) : phi;
  }
  if (path == "toeplitz") {
    measure::WrappedGeometricMeasure mu(rt.p, rt.phase, rc.k, rt.rotation_phi);
    auto mt = opuc::MomentTable::closed(mu, n, rt.ctx);
    auto res = opuc::phi_via_toeplitz(n, mt, rt.ctx);
    if (delta_out) *delta_out = res.delta;
    return res.phi;
  }
  throw ConfigError("unknown path '" + path + "'");
}

int cmd_poly(const RunConfig& rc, long n, const std::string& path,
             bool all_paths, bool pastro) {
  Runtime rt = build_runtime(rc);
  if (n < 0) throw ConfigError("degree must be >= 0");
  if (n > rc.max_degree)
    throw ConfigError("degree exceeds --max-degree " +
                      std::to_string(rc.max_degree));
  opuc::check_degree_cap(n, rt.phase);
  if (rc.k > 1 && !pastro)
    throw ConfigError(
        "k>1 gives the biorthogonal family, not orthogonal polynomials; "
        "pass --pastro to confirm");

  ordered_json j;
  j["config"] = config_json(rc);
  j["n"] = n;
  j["family"] = rc.k > 1 ? "biorthogonal" : "opuc";

  if (all_paths) {
    std::vector<std::string> paths =
        rc.k == 1 ? std::vector<std::string>{"recurrence", "hyper", "toeplitz"}
                  : std::vector<std::string>{"hyper", "toeplitz"};
    std::vector<opuc::MonicPolynomial> polys;
    ordered_json jp;
    for (const auto& name : paths) {
      Complex delta = Complex::zero(rt.ctx.precision_bits);
      auto phi = build_path(name, n, rc, rt, &delta);
      jp[name] = cli::poly_json(phi, rt.digits);
      if (name == "toeplitz")
        jp[name]["delta"] = cli::json_complex(delta, rt.digits);
      polys.push_back(std::move(phi));
    }
    Real worst(rt.ctx.precision_bits);
    for (size_t i = 0; i < polys.size(); ++i)
      for (size_t l = i + 1; l < polys.size(); ++l)
        for (long c = 0; c <= n; ++c)
          worst = max(worst, dist(polys[i].coeff(c), polys[l].coeff(c)));
    j["paths"] = std::move(jp);
    j["max_disagreement"] = decimal(worst, rt.digits);
  } else {
    Complex delta = Complex::zero(rt.ctx.precision_bits);
    auto phi = build_path(path, n, rc, rt, &delta);
    j["path"] = path;
    j["poly"] = cli::poly_json(phi, rt.digits);
    if (path == "toeplitz") j["delta"] = cli::json_complex(delta, rt.digits);
  }
  write_output(rc, j.dump(2) + '\n');
  return 0;
}

// ---- verify -----------------------------------------------------------------

std::vector<identities::IdentityKind> suite_kinds(const std::string& suite,
                                                  const UnitPhase& phase) {
  using identities::IdentityKind;
  if (suite == "all") return {};
  if (suite == "orthogonality")
    return {IdentityKind::kOrthogonality, IdentityKind::kInjClosed};
  if (suite == "duality") return {IdentityKind::kDuality};
  if (suite == "recurrence") return {IdentityKind::kRIRecurrence};
  if (suite == "qdiff") return {IdentityKind::kQDifference};
  if (suite == "masssum") return {IdentityKind::kMassSum};
  if (suite == "ngon") {
    if (!phase.is_rational())
      throw ConfigError("the ngon suite needs a rational chi (M/N)");
    return {IdentityKind::kNgonOrthogonality};
  }
  if (suite == "saalschutz") return {IdentityKind::kSaalschutzSpot};
  throw ConfigError("unknown suite '" + suite + "'");
}

int cmd_verify(const RunConfig& rc, const std::string& suite, long n_max,
               long s_max, long budget, const std::string& gap_tol, long count,
               const std::vector<long>& masssum_s, bool strict,
               bool use_recurrence) {
  Runtime rt = build_runtime(rc);
  if (rc.k != 1) throw ConfigError("the identity suite is defined for k=1");
  if (!rt.rotation_phi.is_zero())
    throw ConfigError("the identity suite requires phi=0");

  identities::SuiteOptions opt(rt.p, rt.phase, rt.ctx);
  opt.kinds = suite_kinds(suite, rt.phase);
  opt.n_max = n_max;
  opt.s_max = s_max;
  opt.masssum_budget = budget;
  if (!masssum_s.empty()) {
    for (long s : masssum_s)
      if (s < 0) throw ConfigError("--s must be nonnegative");
    opt.masssum_s = masssum_s;
  }
  opt.masssum_gap = Real::from_string(gap_tol, rt.ctx.precision_bits);
  opt.saalschutz_count = count;
  opt.truncation_tol = rt.truncation_tol;
  opt.seed = rc.seed;
  opt.source = use_recurrence ? identities::PolySource::kRecurrence
                              : identities::PolySource::kHypergeometric;

  auto reports = identities::run_identity_suite(opt);
  long failed = 0, inconclusive = 0;
  for (const auto& r : reports) {
    if (r.passed) continue;
    if (r.conclusive) ++failed;
    else ++inconclusive;
  }
  bool ok = identities::suite_passed(reports, strict);

  std::string out;
  if (rc.format == "csv") {
    out = cli::report_csv_header() + '\n';
    for (const auto& r : reports)
      out += cli::report_csv_row(r, rt.digits) + '\n';
  } else {
    ordered_json j;
    j["config"] = config_json(rc);
    j["suite"] = suite;
    ordered_json jr = ordered_json::array();
    for (const auto& r : reports) jr.push_back(cli::report_json(r, rt.digits));
    j["reports"] = std::move(jr);
    ordered_json summary;
    summary["checks"] = static_cast<long>(reports.size());
    summary["failed"] = failed;
    summary["inconclusive"] = inconclusive;
    summary["passed"] = ok;
    j["summary"] = std::move(summary);
    out = j.dump(2) + '\n';
  }
  write_output(rc, out);
  std::cerr << "verify: " << reports.size() << " checks, " << failed
            << " failed, " << inconclusive << " inconclusive\n";
  return ok ? 0 : 1;
}

// ---- spectrum ---------------------------------------------------------------

int cmd_spectrum(const RunConfig& rc, long S) {
  if (S < 1) throw ConfigError("--count must be >= 1");
  if (rc.out.empty())
    throw ConfigError("spectrum writes files; pass --out FILE");
  Runtime rt = build_runtime(rc);
  measure::WrappedGeometricMeasure mu(rt.p, rt.phase, rc.k, rt.rotation_phi);
  auto atoms = mu.atoms(S, rt.ctx);

  std::string out;
  ordered_json jrows = ordered_json::array();
  if (rc.format == "csv")
    out = "s,theta,z_re,z_im,mass_re,mass_im,tail_after\n";
  for (const auto& a : atoms) {
    Real tail = mu.tail_mass_bound(a.s + 1, rt.ctx);
    if (rc.format == "csv") {
      out += cli::csv_join({std::to_string(a.s), decimal(a.theta, rt.digits),
                            decimal(a.z.re, rt.digits),
                            decimal(a.z.im, rt.digits),
                            decimal(a.mass.re, rt.digits),
                            decimal(a.mass.im, rt.digits),
                            decimal(tail, rt.digits)}) +
             '\n';
    } else {
      ordered_json r;
      r["s"] = a.s;
      r["theta"] = decimal(a.theta, rt.digits);
      r["z"] = cli::json_complex(a.z, rt.digits);
      r["mass"] = cli::json_complex(a.mass, rt.digits);
      r["tail_after"] = decimal(tail, rt.digits);
      jrows.push_back(std::move(r));
    }
  }
  if (rc.format == "json") {
    ordered_json j;
    j["config"] = config_json(rc);
    j["rows"] = std::move(jrows);
    out = j.dump(2) + '\n';
  }
  write_output(rc, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Orthogonal polynomials for the wrapped geometric distribution on the "
      "unit circle"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig rc;
  app.add_option("--p", rc.p, "mass ratio in (0,1)")->capture_default_str();
  app.add_option("--chi", rc.chi,
                 "rotation number: decimal, M/N, or 'golden'")
      ->capture_default_str();
  app.add_option("--k", rc.k, "moment order (k>1 drops positivity)")
      ->capture_default_str();
  app.add_option("--phi", rc.phi, "rigid rotation of the measure")
      ->capture_default_str();
  app.add_option("--precision-bits", rc.precision_bits, "working precision")
      ->capture_default_str();
  app.add_option("--tol-rel", rc.tol_rel, "relative residual tolerance");
  app.add_option("--tol-div", rc.tol_div, "small-divisor guard threshold");
  app.add_option("--max-degree", rc.max_degree, "degree cap for poly")
      ->capture_default_str();
  app.add_option("--truncation-tol", rc.truncation_tol,
                 "target tail mass for truncated sums");
  app.add_option("--format", rc.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--out", rc.out, "output file (default stdout)");
  app.add_option("--seed", rc.seed, "seed for randomized sweeps")
      ->capture_default_str();

  long n_min = -8, n_max = 8;
  bool bruteforce = false;
  auto* mom = app.add_subcommand("moments", "trigonometric moments");
  mom->add_option("--n-min", n_min, "")->capture_default_str();
  mom->add_option("--n-max", n_max, "")->capture_default_str();
  mom->add_flag("--bruteforce", bruteforce,
                "add truncated-sum comparison columns");

  long vn_max = 16;
  auto* verb = app.add_subcommand("verblunsky", "recursion coefficients");
  verb->add_option("--n-max", vn_max, "")->capture_default_str();

  long pn = 4;
  std::string path = "hyper";
  bool all_paths = false, pastro = false;
  auto* pol = app.add_subcommand("poly", "monic polynomial coefficients");
  pol->add_option("--n", pn, "degree")->capture_default_str();
  pol->add_option("--path", path, "construction route")
      ->check(CLI::IsMember({"recurrence", "hyper", "toeplitz"}))
      ->capture_default_str();
  pol->add_flag("--all-paths", all_paths, "emit every route plus spread");
  pol->add_flag("--pastro", pastro, "two-parameter biorthogonal family");

  std::string suite = "all", gap_tol = "0.01";
  long sn_max = 10, ss_max = 10, budget = 500, count = 100;
  bool strict = false, use_recurrence = false;
  auto* ver = app.add_subcommand("verify", "run the identity suite");
  ver->add_option("--suite", suite, "which identities")
      ->check(CLI::IsMember({"all", "orthogonality", "duality", "recurrence",
                             "qdiff", "masssum", "ngon", "saalschutz"}))
      ->capture_default_str();
  ver->add_option("--n-max", sn_max, "")->capture_default_str();
  ver->add_option("--s-max", ss_max, "")->capture_default_str();
  ver->add_option("--budget", budget, "mass-sum term budget")
      ->capture_default_str();
  ver->add_option("--gap-tol", gap_tol, "mass-sum convergence gap")
      ->capture_default_str();
  ver->add_option("--count", count, "randomized spot-check count")
      ->capture_default_str();
  std::vector<long> masssum_s;
  ver->add_option("--s", masssum_s, "mass-sum atom indices (default 0 1 2)");
  ver->add_flag("--strict", strict, "inconclusive checks fail the run");
  ver->add_flag("--use-recurrence", use_recurrence,
                "build polynomials by recurrence instead of the series");

  long S = 32;
  auto* spec = app.add_subcommand("spectrum", "atom table for plotting");
  spec->add_option("--count", S, "number of atoms")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int r = app.exit(e);
    return r == 0 ? 0 : 2;
  }

  try {
    if (mom->parsed()) return cmd_moments(rc, n_min, n_max, bruteforce);
    if (verb->parsed()) return cmd_verblunsky(rc, vn_max);
    if (pol->parsed()) return cmd_poly(rc, pn, path, all_paths, pastro);
    if (ver->parsed())
      return cmd_verify(rc, suite, sn_max, ss_max, budget, gap_tol, count,
                        masssum_s,
                        strict, use_recurrence);
    if (spec->parsed()) return cmd_spectrum(rc, S);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const NumericGuardError& e) {
    std::cerr << "numeric guard: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
