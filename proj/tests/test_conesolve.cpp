#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "coneasym/besselkit.hpp"
#include "coneasym/conesolve.hpp"

using namespace coneasym;

namespace {

// Composite Simpson on [a, b] with 2m intervals.
template <class F>
double simpson(F f, double a, double b, int m) {
  const double h = (b - a) / (2 * m);
  double s = f(a) + f(b);
  for (int i = 1; i < 2 * m; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// a(t, x) from the ascending series of I_nu inside the kernel integral, terms up to x^{2K}.
double small_x_series(int n, double nu, double t, const InitialProfile& f, double x, int terms) {
  double sum = 0.0;
  for (int k = 0; k < terms; ++k) {
    auto moment = [&](double xi) {
      return std::pow(xi, 0.5 * (1 - n) + n) * std::exp(-xi * xi / (4 * t)) * std::pow(xi / (4 * t), nu + 2 * k) * f(xi);
    };
    const double c = simpson(moment, f.x_lo, f.x_hi, 4000) / (2 * t) /
                     (std::tgamma(k + 1.0) * std::tgamma(nu + k + 1.0));
    sum += c * std::pow(x, nu + 2 * k);
  }
  return std::pow(x, 0.5 * (1 - n)) * std::exp(-x * x / (4 * t)) * sum;
}

}  // namespace

TEST_CASE("kernel scaling example") {
  const double rho = 2.0;
  const double lhs = heat_kernel(1, 0.5, rho * rho * 0.3, rho * 0.7, rho * 1.1);
  CHECK(lhs == doctest::Approx(std::pow(rho, -2.0) * heat_kernel(1, 0.5, 0.3, 0.7, 1.1)).epsilon(1e-12));
}

TEST_CASE("heat mode with lambda = 0 is positive") {
  const auto mp = make_mode_problem(1, 0.0, bump_profile(1.0, 2.0), 0.5);
  const auto sol = heat_mode(mp, {1e-3, 0.1, 0.9, 1.5, 3.0});
  for (const auto& s : sol.samples) CHECK(s.value > 0.0);
  CHECK(sol.kernel_terms > 0);
}

TEST_CASE("small-x expansion matches the series substitution") {
  const auto f = bump_profile(1.0, 2.0);
  for (auto [n, lam] : {std::pair{1, -2.25}, std::pair{1, -2.0}, std::pair{3, -3.0}}) {
    const auto mp = make_mode_problem(n, lam, f, 1.0, 1);
    for (double x : {1e-3, 1e-2, 0.05}) {
      const double want = small_x_series(n, mp.nu, 1.0, f, x, 4);
      CHECK(heat_mode_value(mp, 1.0, x) == doctest::Approx(want).epsilon(1e-8));
    }
  }
}

TEST_CASE("small-x slope for nu = 3/2") {
  const auto mp = make_mode_problem(1, -2.25, bump_profile(1.0, 2.0), 1.0, 1);
  const double a = heat_mode_value(mp, 1.0, 1e-3);
  const double b = heat_mode_value(mp, 1.0, 1e-2);
  CHECK(std::abs(std::log(b / a) / std::log(10.0) - 1.5) < 1e-3);
}

TEST_CASE("PDE residuals") {
  ResidualPatch patch;
  patch.n = 1;
  patch.t_lo = 0.5;
  patch.t_hi = 2.0;
  patch.x_lo = 0.5;
  patch.x_hi = 2.0;
  // The radial heat kernel from the tip for n = 1 is t^{-1} exp(-x^2/4t).
  CHECK(heat_pde_residual([](double t, double x) { return std::exp(-x * x / (4 * t)) / t; }, patch) < 1e-6);
  CHECK(heat_pde_residual([](double t, double x) { return std::exp(-x * x / (4 * t)) / std::sqrt(t); }, patch) > 0.1);
  patch.lambda_j = -2.25;
  CHECK(heat_pde_residual([](double, double x) { return std::pow(x, 1.5) + x * x; }, patch) > 0.1);

  const auto mp = make_mode_problem(1, -2.25, bump_profile(1.0, 2.0), 1.0, 1);
  ResidualPatch sp{1, -2.25, 0.8, 1.2, 0.5, 2.0, 0.02, 7};
  CHECK(heat_pde_residual([&](double t, double x) { return heat_mode_value(mp, t, x, 1e-12); }, sp) < 1e-5);
}

TEST_CASE("results do not depend on the thread count") {
  const auto mp = make_mode_problem(2, -1.25, plateau_profile(0.5, 3.0, 0.5), 0.7, 1);
  const auto grid = log_spaced_grid(1e-3, 1.0, 8);
  setenv("CONE_ASYM_THREADS", "1", 1);
  const auto one = heat_mode(mp, grid);
  setenv("CONE_ASYM_THREADS", "4", 1);
  const auto four = heat_mode(mp, grid);
  unsetenv("CONE_ASYM_THREADS");
  std::ostringstream a, b;
  write_mode_csv(a, {one});
  write_mode_csv(b, {four});
  CHECK(a.str() == b.str());
}

TEST_CASE("log-spaced grid") {
  const auto g = log_spaced_grid();
  CHECK(g.size() == 49);
  CHECK(g.front() == doctest::Approx(1e-4));
  CHECK(g.back() == doctest::Approx(1e-1));
}

TEST_CASE("profiles") {
  CHECK_THROWS_AS(bump_profile(0.0, 1.0).validate(), BadProfile);
  CHECK_THROWS_AS(plateau_profile(1.0, 2.0, 0.6).validate(), BadProfile);
  const auto p = plateau_profile(1.0, 6.0, 1.0);
  CHECK(p(3.0) == 1.0);
  CHECK(p(1.0) == 0.0);
  CHECK(p(1.5) > 0.0);
  CHECK(bump_profile(1.0, 2.0)(1.5) == doctest::Approx(1.0));
  nlohmann::json j = p;
  CHECK(j.get<InitialProfile>()(1.7) == p(1.7));
}

TEST_CASE("resolvent solves the mode equation") {
  const auto f = bump_profile(1.0, 2.0);
  std::vector<double> xs;
  for (int i = 1; i < 20; ++i) xs.push_back(1.0 + i / 20.0);
  CHECK(resolvent_residual(1, -4.0, {1.0, 1.0}, f, xs) < 1e-7);
  CHECK(resolvent_residual(3, -8.0, {-2.0, 0.5}, f, xs) < 1e-7);
  CHECK_THROWS_AS(resolvent_mode(1, -4.0, {-1.0, 0.0}, f, xs), SpectrumRay);
  CHECK_THROWS_AS(resolvent_mode(1, -4.0, {0.0, 0.0}, f, xs), SpectrumRay);
}

TEST_CASE("resolvent decays beyond the support") {
  const auto f = bump_profile(1.0, 2.0);
  const auto sol = resolvent_mode(1, -4.0, {4.0, 0.0}, f, {10.0, 20.0});
  const double ratio = std::abs(sol.samples[1].value) / std::abs(sol.samples[0].value);
  CHECK(ratio < std::exp(-10.0));
  CHECK(std::abs(sol.samples[0].regular_coefficient) < 1e-300);
}

TEST_CASE("resolvent is regular at the tip") {
  const auto f = bump_profile(1.0, 2.0);
  const auto sol = resolvent_mode(1, -2.25, {1.0, 1.0}, f, {1e-3, 1e-2});
  const double slope = std::log(std::abs(sol.samples[1].value) / std::abs(sol.samples[0].value)) / std::log(10.0);
  CHECK(slope == doctest::Approx(1.5).epsilon(1e-3));
}

TEST_CASE("sectorial check on one ray") {
  std::vector<double> grid;
  for (int i = 1; i <= 120; ++i) grid.push_back(0.1 * i);
  const auto c = sectorial_check(1, -4.0, plateau_profile(1.0, 6.0, 1.0), {0.75 * std::numbers::pi}, {1.0, 10.0, 100.0}, grid);
  CHECK(c.passed);
  CHECK(c.entries.size() == 3);
}

TEST_CASE("CSV dump") {
  ModeSolution s;
  s.j = 2;
  s.nu = 1.0 / 3.0;
  s.samples = {{0.1, 2.0 / 3.0}};
  std::ostringstream os;
  write_mode_csv(os, {s});
  CHECK(os.str() == "mode_j,nu,t,x,value\n2,0.33333333333333331,1,0.10000000000000001,0.66666666666666663\n");
}
