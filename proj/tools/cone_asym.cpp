#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "coneasym/acceptance.hpp"
#include "coneasym/besselkit.hpp"
#include "coneasym/conesolve.hpp"
#include "coneasym/fitrecover.hpp"
#include "coneasym/indicial.hpp"
#include "coneasym/jsonio.hpp"
#include "coneasym/scenario.hpp"
#include "coneasym/templates.hpp"
#include "coneasym/weights.hpp"

using namespace coneasym;

namespace {

enum Exit : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kWindowViolation = 3,
  kKTooSmall = 4,
  kContinuity = 5,
  kSpectrum = 6,
  kQuadrature = 7,
  kDegenerate = 8,
  kNoiseFloor = 9,
  kNotSpectral = 10,
  kSpectrumRay = 11,
  kConfig = 12,
  kBesselDomain = 13,
  kSelftestFailed = 14,
  kResolventCheckFailed = 15,
};

const char* kExitCodes =
    "Exit codes:\n"
    "  0   success\n"
    "  1   unexpected internal error\n"
    "  2   usage error (bad or missing flags)\n"
    "  3   WindowViolation: gamma outside the admissible window\n"
    "  4   KTooSmall: k < 2\n"
    "  5   ContinuityHypothesisFailed: s + 2k <= (n+1)/p\n"
    "  6   invalid cross-section spectrum\n"
    "  7   QuadratureFailure: tolerance not met at maximal refinement\n"
    "  8   DegenerateSamples: too few or sign-inconsistent samples\n"
    "  9   NoiseFloor: residual below the reliable fitting level\n"
    "  10  NotASpectralExponent: negative exponent passed to recovery\n"
    "  11  SpectrumRay: resolvent parameter on (-inf, 0]\n"
    "  12  configuration or I/O error (scenario, profile, CSV, JSONL)\n"
    "  13  Bessel argument or order outside the supported range\n"
    "  14  selftest: at least one acceptance criterion failed\n"
    "  15  check-resolvent: sectorial bound not met\n"
    "Environment:\n"
    "  CONE_ASYM_THREADS   maximum worker threads (default: hardware concurrency)\n";

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw ConfigError("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
  bool to_stdout() const { return !file_.is_open(); }

 private:
  std::ofstream file_;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  return in;
}

struct TemplateArgs {
  std::string scenario;
  std::string cross_section;
  std::string gamma = "midpoint";
  int k = 2;
  double s = 0.0;
  double p = 2.0;
  int j_max = 12;
  bool inductive = false;
  std::string out;
};

int cmd_template(const TemplateArgs& a) {
  std::optional<Scenario> sc;
  if (!a.scenario.empty()) sc = load_scenario(a.scenario);
  if (!sc && a.cross_section.empty()) throw CLI::RequiredError("--cross-section or --scenario");
  const CrossSection cs = sc ? sc->cross_section : named_cross_section(a.cross_section, a.j_max);
  const double gamma = sc ? sc->gamma : resolve_gamma(a.gamma, cs);
  const int k = sc ? sc->k : a.k;
  const double s = sc ? sc->s : a.s;
  const double p = sc ? sc->p : a.p;
  const auto tmpl = a.inductive ? template_inductive(cs, gamma, k) : template_closed_form(cs, gamma, k);
  const auto report = render_uexp(tmpl, s, p);
  Output out(a.out.empty() && sc ? sc->outputs.tmpl : a.out);
  out.stream() << dump_json(report.to_json(), 2) << "\n";
  (out.to_stdout() ? std::cerr : std::cout) << report.to_text();
  return kOk;
}

int cmd_solve(const std::string& scenario, const std::string& out_path) {
  const auto sc = load_scenario(scenario);
  const auto sols = solve_scenario(sc);
  Output out(out_path.empty() ? sc.outputs.samples : out_path);
  write_mode_csv(out.stream(), sols);
  return kOk;
}

struct FitArgs {
  std::string samples;
  std::string scenario;
  std::vector<double> window;
  int max_terms = 3;
  double noise_level = 1e-9;
  int n = 1;
  std::string out;
};

int cmd_fit(const FitArgs& a) {
  FitSettings fit;
  std::optional<ExpansionTemplate> tmpl;
  int n = a.n;
  std::string out_path = a.out;
  if (!a.scenario.empty()) {
    const auto sc = load_scenario(a.scenario);
    fit = sc.fit;
    n = sc.cross_section.n();
    tmpl = template_closed_form(sc.cross_section, sc.gamma, sc.k);
    if (out_path.empty()) out_path = sc.outputs.fits;
  } else {
    fit.max_terms = a.max_terms;
    fit.noise_level = a.noise_level;
  }
  if (!a.window.empty()) {
    if (a.window.size() != 2 || !(a.window[0] > 0.0 && a.window[0] < a.window[1])) {
      throw CLI::ValidationError("--window", "expects LO HI with 0 < LO < HI");
    }
    fit.window = {a.window[0], a.window[1]};
  }
  auto in = open_input(a.samples);
  const auto sols = read_mode_csv(in, n);
  const auto reports = fit_solutions(sols, fit, tmpl ? &*tmpl : nullptr);
  Output out(out_path);
  write_fit_jsonl(out.stream(), reports);
  return kOk;
}

int cmd_recover(const std::string& fits, int n, double gamma, int k, const std::string& out_path) {
  auto in = open_input(fits);
  std::vector<FitReport> reports;
  try {
    reports = read_fit_jsonl(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("fits file: ") + e.what());
  }
  const auto summary = recover_spectrum(reports, n, gamma, k);
  Output out(out_path);
  out.stream() << dump_json(summary.to_json(), 2) << "\n";
  return kOk;
}

struct ResolventArgs {
  int n = 1;
  double lambda_j = -4.0;
  std::string profile_json;
  std::vector<double> moduli = {1.0, 10.0, 100.0};
  double factor = 2.0;
  double x_max = 12.0;
  int points = 240;
  std::string out;
};

int cmd_check_resolvent(const ResolventArgs& a) {
  InitialProfile f = plateau_profile(1.0, 6.0, 1.0);
  if (!a.profile_json.empty()) {
    try {
      f = nlohmann::json::parse(a.profile_json).get<InitialProfile>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("--profile: ") + e.what());
    }
  }
  f.validate();
  if (a.points < 2 || !(a.x_max > 0.0)) throw CLI::ValidationError("--points/--x-max", "need at least 2 points and x-max > 0");
  std::vector<double> grid;
  for (int i = 1; i <= a.points; ++i) grid.push_back(a.x_max * i / a.points);
  const double ray = 0.75 * std::numbers::pi;
  const auto check = sectorial_check(a.n, a.lambda_j, f, {0.0, ray, -ray}, a.moduli, grid, a.factor);
  const std::vector<double> support_grid = [&] {
    std::vector<double> g;
    for (int i = 1; i < 20; ++i) g.push_back(f.x_lo + (f.x_hi - f.x_lo) * i / 20.0);
    return g;
  }();
  const double residual = resolvent_residual(a.n, a.lambda_j, {1.0, 1.0}, f, support_grid);

  nlohmann::json doc;
  doc["n"] = a.n;
  doc["lambda_j"] = a.lambda_j;
  doc["profile"] = f;
  auto entries = nlohmann::json::array();
  for (const auto& e : check.entries) {
    entries.push_back({{"arg", e.arg}, {"modulus", e.modulus}, {"sup_norm", e.sup_norm}, {"scaled", e.scaled}});
  }
  doc["entries"] = entries;
  doc["max_ratio"] = check.max_ratio;
  doc["factor"] = a.factor;
  doc["passed"] = check.passed;
  doc["residual_lambda_1_plus_i"] = residual;
  Output out(a.out);
  out.stream() << dump_json(doc, 2) << "\n";
  return check.passed ? kOk : kResolventCheckFailed;
}

int cmd_selftest() {
  const auto results = run_acceptance([](const CriterionResult& r) {
    std::cout << format_result(r) << "\n" << std::flush;
  });
  for (const auto& r : results) {
    if (!r.passed) return kSelftestFailed;
  }
  return kOk;
}

int report(const char* kind, const std::exception& e, int code) {
  std::cerr << "error (" << kind << "): " << e.what() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Small-x asymptotics of heat solutions on conic manifolds: templates, model-cone solver, fits, recovery"};
  app.footer(kExitCodes);
  app.require_subcommand(1);

  TemplateArgs ta;
  auto* tpl = app.add_subcommand("template", "Expansion template for D(Delta^k) and the induced solution expansion");
  tpl->add_option("--scenario", ta.scenario, "Scenario JSON (overrides the flags below)")->check(CLI::ExistingFile);
  tpl->add_option("--cross-section", ta.cross_section, "sN (round sphere), circle:<r>, circle:<p>/<q> or circle:sqrt(<p>/<q>)");
  tpl->add_option("--gamma", ta.gamma, "Weight, a number or 'midpoint'")->capture_default_str();
  tpl->add_option("--k", ta.k, "Power of the Laplacian (k >= 2)")->capture_default_str();
  tpl->add_option("--s", ta.s, "Smoothness index s")->capture_default_str();
  tpl->add_option("--p", ta.p, "Integrability index p")->capture_default_str();
  tpl->add_option("--j-max", ta.j_max, "Number of eigenvalues beyond lambda_0")->capture_default_str()->check(CLI::Range(1, 10000));
  tpl->add_flag("--inductive", ta.inductive, "Build the template step by step from the pole sets");
  tpl->add_option("--out", ta.out, "Write the JSON here (the table then goes to stdout)");

  std::string solve_scenario_path, solve_out;
  auto* solve = app.add_subcommand("solve", "Sample the model-cone heat modes of a scenario as CSV");
  solve->add_option("--scenario", solve_scenario_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
  solve->add_option("--out", solve_out, "CSV path (default: scenario outputs.samples, else stdout)");

  FitArgs fa;
  auto* fit = app.add_subcommand("fit", "Peel small-x exponents from a samples CSV into JSON lines");
  fit->add_option("--samples", fa.samples, "CSV written by solve")->required()->check(CLI::ExistingFile);
  fit->add_option("--scenario", fa.scenario, "Take fit settings and template matching from a scenario")->check(CLI::ExistingFile);
  fit->add_option("--window", fa.window, "Fit window LO HI")->expected(2);
  fit->add_option("--max-terms", fa.max_terms, "Exponents peeled per mode")->capture_default_str()->check(CLI::PositiveNumber);
  fit->add_option("--noise-level", fa.noise_level, "Relative noise of the samples")->capture_default_str();
  fit->add_option("--n", fa.n, "Cross-section dimension")->capture_default_str();
  fit->add_option("--out", fa.out, "JSONL path (default: stdout)");

  std::string fits_path, recover_out;
  int rn = 1, rk = 2;
  double rgamma = 0.0;
  auto* rec = app.add_subcommand("recover", "Recover cross-section eigenvalues from fitted exponents");
  rec->add_option("--fits", fits_path, "JSONL written by fit")->required()->check(CLI::ExistingFile);
  rec->add_option("--n", rn, "Cross-section dimension")->required();
  rec->add_option("--gamma", rgamma, "Weight")->required();
  rec->add_option("--k", rk, "Power of the Laplacian")->required();
  rec->add_option("--out", recover_out, "Summary JSON path (default: stdout)");

  ResolventArgs ra;
  auto* res = app.add_subcommand("check-resolvent", "Sectorial bound of one resolvent mode on the model cone");
  res->add_option("--n", ra.n, "Cross-section dimension")->capture_default_str();
  res->add_option("--lambda-j", ra.lambda_j, "Cross-section eigenvalue of the mode")->capture_default_str();
  res->add_option("--profile", ra.profile_json, "Profile JSON, e.g. {\"shape\":\"plateau\",\"support\":[1,6],\"ramp\":1}");
  res->add_option("--moduli", ra.moduli, "|lambda| values")->capture_default_str();
  res->add_option("--factor", ra.factor, "Allowed max/min ratio per ray")->capture_default_str();
  res->add_option("--x-max", ra.x_max, "Right end of the sup-norm grid")->capture_default_str();
  res->add_option("--points", ra.points, "Sup-norm grid size")->capture_default_str();
  res->add_option("--out", ra.out, "JSON path (default: stdout)");

  auto* self = app.add_subcommand("selftest", "Run the acceptance suite; one PASS/FAIL line per criterion");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (tpl->parsed()) return cmd_template(ta);
    if (solve->parsed()) return cmd_solve(solve_scenario_path, solve_out);
    if (fit->parsed()) return cmd_fit(fa);
    if (rec->parsed()) return cmd_recover(fits_path, rn, rgamma, rk, recover_out);
    if (res->parsed()) return cmd_check_resolvent(ra);
    if (self->parsed()) return cmd_selftest();
  } catch (const CLI::Error& e) {
    return report("usage", e, kUsage);
  } catch (const WindowViolation& e) {
    return report("WindowViolation", e, kWindowViolation);
  } catch (const KTooSmall& e) {
    return report("KTooSmall", e, kKTooSmall);
  } catch (const ContinuityHypothesisFailed& e) {
    return report("ContinuityHypothesisFailed", e, kContinuity);
  } catch (const SpectrumError& e) {
    return report("spectrum", e, kSpectrum);
  } catch (const PositiveEigenvalue& e) {
    return report("spectrum", e, kSpectrum);
  } catch (const QuadratureFailure& e) {
    return report("QuadratureFailure", e, kQuadrature);
  } catch (const DegenerateSamples& e) {
    return report("DegenerateSamples", e, kDegenerate);
  } catch (const NoiseFloor& e) {
    return report("NoiseFloor", e, kNoiseFloor);
  } catch (const NotASpectralExponent& e) {
    return report("NotASpectralExponent", e, kNotSpectral);
  } catch (const SpectrumRay& e) {
    return report("SpectrumRay", e, kSpectrumRay);
  } catch (const ConfigError& e) {
    return report("config", e, kConfig);
  } catch (const BadProfile& e) {
    return report("config", e, kConfig);
  } catch (const bessel::DomainError& e) {
    return report("bessel domain", e, kBesselDomain);
  } catch (const std::invalid_argument& e) {
    return report("usage", e, kUsage);
  } catch (const std::exception& e) {
    return report("internal", e, kInternal);
  }
  return kUsage;
}
