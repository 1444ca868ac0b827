#include <doctest.h>

#include <cmath>
#include <sstream>

#include "coneasym/fitrecover.hpp"

using namespace coneasym;

namespace {

template <class F>
std::vector<ModeSample> synth(F f, double lo = 1e-4, double hi = 1e-1) {
  std::vector<ModeSample> out;
  for (double x : log_spaced_grid(lo, hi, 16)) out.push_back({x, f(x)});
  return out;
}

FitOptions heat_options() {
  FitOptions opt;
  opt.noise_level = 1e-9;
  return opt;
}

}  // namespace

TEST_CASE("leading exponent of synthetic data") {
  const auto r = fit_leading_exponent(synth([](double x) { return 3.0 * std::pow(x, 1.5) * (1.0 + 0.2 * x * x); }), {1e-3, 1e-2});
  CHECK(std::abs(r.fitted_exponent - 1.5) < 1e-4);
  CHECK(r.coefficient == doctest::Approx(3.0).epsilon(1e-6));
  CHECK_FALSE(r.log_detected);
  CHECK(r.standard_error >= 0.0);

  const auto c = fit_leading_exponent(synth([](double) { return 5.0; }), {1e-4, 1e-1});
  CHECK(std::abs(c.fitted_exponent) < 1e-10);
}

TEST_CASE("log factor is detected") {
  const auto r = fit_leading_exponent(synth([](double x) { return x * x * std::log(x); }), {1e-3, 1e-2});
  CHECK(std::abs(r.log_coefficient_ratio) > 0.1);
  CHECK(r.log_detected);
  CHECK(r.coefficient < 0.0);
}

TEST_CASE("degenerate samples") {
  CHECK_THROWS_AS(fit_leading_exponent(synth([](double x) { return std::sin(2000.0 * x); }), {1e-3, 1e-1}), DegenerateSamples);
  CHECK_THROWS_AS(fit_leading_exponent(synth([](double x) { return x; }), {1e-2, 1.5e-2}), DegenerateSamples);
}

TEST_CASE("peeling a two-term signal") {
  const auto s = synth([](double x) { return std::pow(x, 1.5) + 0.1 * std::pow(x, 3.5); });
  const auto lead = fit_leading_exponent(s, {1e-4, 1e-1});
  const auto second = subtract_and_refit(s, std::vector<std::pair<double, double>>{{lead.fitted_exponent, lead.coefficient}}, {1e-4, 1e-1});
  CHECK(std::abs(second.fitted_exponent - 3.5) < 1e-2);
  CHECK(second.coefficient == doctest::Approx(0.1).epsilon(1e-2));
}

TEST_CASE("single term hits the noise floor") {
  const auto s = synth([](double x) { return 2.0 * std::pow(x, 1.5); });
  const auto lead = fit_leading_exponent(s, {1e-4, 1e-1});
  CHECK_THROWS_AS(subtract_and_refit(s, std::vector<FitReport>{lead}, {1e-4, 1e-1}), NoiseFloor);
  CHECK(peel_exponents(s, {1e-4, 1e-1}, 4).size() == 1);
}

TEST_CASE("heat data peel into the spectral exponents") {
  const auto mp = make_mode_problem(1, -2.25, bump_profile(1.0, 2.0), 1.0, 1);
  const auto sol = heat_mode(mp, log_spaced_grid());
  const auto chain = peel_exponents(sol.samples, {1e-4, 1e-1}, 3, heat_options(), 1);
  REQUIRE(chain.size() >= 2);
  CHECK(std::abs(chain[0].fitted_exponent - 1.5) < 1.5e-3);
  CHECK(std::abs(chain[1].fitted_exponent - 3.5) < 1e-2);
  CHECK(std::abs(chain[0].log_coefficient_ratio) < 1e-4);
  const auto tmpl = template_closed_form(circle_spectrum_exact(Rational(4, 9), 8), 0.0, 3);
  for (auto r : chain) CHECK(match_template(r, tmpl));
}

TEST_CASE("lambda from exponents") {
  CHECK(recover_lambda(1, 2.0) == -4.0);
  CHECK(recover_lambda(3, 0.0) == 0.0);
  CHECK_FALSE(std::signbit(recover_lambda(3, 0.0)));
  CHECK(recover_lambda(2, 1.0) == -2.0);
  CHECK_THROWS_AS(recover_lambda(1, -0.5), NotASpectralExponent);
}

TEST_CASE("visibility window") {
  const auto v = visibility_window(1, 0.0, 3);
  CHECK(v.mu_lo == doctest::Approx(-5.0));
  CHECK(v.mu_hi == doctest::Approx(-1.0));
}

TEST_CASE("recovery on the circle of radius 1/2") {
  const auto opt = heat_options();
  std::vector<FitReport> reports;
  for (auto [j, lam] : {std::pair<std::size_t, double>{0, 0.0}, {1, -4.0}}) {
    const auto sol = heat_mode(make_mode_problem(1, lam, bump_profile(1.0, 2.0), 1.0, j), log_spaced_grid());
    const auto chain = peel_exponents(sol.samples, {1e-4, 1e-1}, 3, opt, j);
    reports.insert(reports.end(), chain.begin(), chain.end());
  }
  const auto s = recover_spectrum(reports, 1, 0.0, 3);
  REQUIRE(s.recovered.size() == 2);
  std::vector<double> got = {s.recovered[0].lambda, s.recovered[1].lambda};
  std::sort(got.begin(), got.end());
  CHECK(got[0] == doctest::Approx(-4.0).epsilon(1e-2));
  CHECK(std::abs(got[1]) < 1e-2);
  // mu_1 = -2 coincides with the first even shift of the j = 0 mode.
  CHECK_FALSE(s.flagged.empty());
}

TEST_CASE("sphere exponents are flagged as ambiguous") {
  const auto opt = heat_options();
  std::vector<FitReport> reports;
  for (auto [j, lam] : {std::pair<std::size_t, double>{1, -2.0}, {2, -6.0}}) {
    const auto sol = heat_mode(make_mode_problem(2, lam, bump_profile(1.0, 2.0), 1.0, j), log_spaced_grid());
    auto lead = fit_leading_exponent(sol.samples, {1e-4, 1e-1}, opt);
    lead.mode.reset();
    reports.push_back(lead);
  }
  const auto s = recover_spectrum(reports, 2, 0.0, 3);
  CHECK(s.flagged.size() == 2);
  for (const auto& f : s.flagged) CHECK(f.reason.find("AmbiguousAttribution") != std::string::npos);
}

TEST_CASE("empty input recovers nothing") {
  const auto s = recover_spectrum({}, 1, 0.0, 3);
  CHECK(s.recovered.empty());
  CHECK(s.flagged.empty());
}

TEST_CASE("fit reports survive JSON lines") {
  auto r = fit_leading_exponent(synth([](double x) { return std::pow(x, 0.75); }), {1e-4, 1e-1});
  r.mode = 3;
  r.peel_index = 1;
  std::stringstream ss;
  write_fit_jsonl(ss, {r, r});
  const auto back = read_fit_jsonl(ss);
  REQUIRE(back.size() == 2);
  CHECK(back[0].fitted_exponent == r.fitted_exponent);
  CHECK(back[1].mode == r.mode);
  CHECK(back[1].peel_index == 1);
}
