#include "coneasym/conesolve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "coneasym/besselkit.hpp"
#include "coneasym/indicial.hpp"
#include "coneasym/parallel.hpp"

namespace coneasym {

namespace {

using cplx = std::complex<double>;

/// C-infinity step: 0 for u <= 0, 1 for u >= 1.
double smooth_step(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / u);
  const double b = std::exp(-1.0 / (1.0 - u));
  return a / (a + b);
}

constexpr std::array<double, 7> kFirst = {-1.0 / 60, 3.0 / 20, -3.0 / 4, 0.0, 3.0 / 4, -3.0 / 20, 1.0 / 60};
constexpr std::array<double, 7> kSecond = {1.0 / 90, -3.0 / 20, 3.0 / 2, -49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90};

/// Intervals of [lo, hi] between consecutive cut points.
std::vector<std::pair<double, double>> pieces(std::vector<double> cuts, double lo, double hi) {
  cuts.push_back(lo);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = std::max(cuts[i], lo);
    const double b = std::min(cuts[i + 1], hi);
    if (b > a) out.emplace_back(a, b);
  }
  return out;
}

/// Sum of one-panel magnitudes over the pieces; sets the absolute tolerance so that
/// pieces where the integrand is negligible are not resolved to relative accuracy.
template <class T, class F>
double coarse_scale(F& f, const std::vector<std::pair<double, double>>& parts, std::size_t& evals) {
  double scale = 0.0;
  for (const auto& [a, b] : parts) scale += detail::magnitude(detail::gl_panel<T>(f, a, b, evals));
  return scale;
}

double nu_for(int n, double lambda_j) {
  const double half = 0.5 * (n - 1);
  const double disc = half * half - lambda_j;
  if (disc < 0.0) throw PositiveEigenvalue("mode eigenvalue gives complex order");
  return std::sqrt(disc);
}

}  // namespace

double InitialProfile::operator()(double x) const {
  if (x <= x_lo || x >= x_hi) return shape == ProfileShape::Box && (x == x_lo || x == x_hi) ? amplitude : 0.0;
  switch (shape) {
    case ProfileShape::Bump: {
      // 1 - s^2 = (1 - s)(1 + s) written to avoid cancellation at the ends.
      const double w = x_hi - x_lo;
      const double d = 4.0 * (x - x_lo) * (x_hi - x) / (w * w);
      if (d <= 0.0) return 0.0;
      return amplitude * std::exp(1.0 - 1.0 / d);
    }
    case ProfileShape::Plateau:
      return amplitude * smooth_step((x - x_lo) / ramp) * smooth_step((x_hi - x) / ramp);
    case ProfileShape::Box:
      return amplitude;
  }
  return 0.0;
}

std::vector<double> InitialProfile::breakpoints() const {
  std::vector<double> out = {x_lo, x_hi};
  if (shape == ProfileShape::Bump) out.push_back(0.5 * (x_lo + x_hi));
  if (shape == ProfileShape::Plateau) {
    out.push_back(x_lo + ramp);
    out.push_back(x_hi - ramp);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void InitialProfile::validate() const {
  if (!(x_lo > 0.0) || !(x_hi > x_lo) || !std::isfinite(x_hi)) {
    throw BadProfile("profile support must satisfy 0 < x_lo < x_hi < inf");
  }
  if (!std::isfinite(amplitude)) throw BadProfile("profile amplitude must be finite");
  if (shape == ProfileShape::Plateau && !(ramp > 0.0 && 2.0 * ramp <= x_hi - x_lo)) {
    throw BadProfile("plateau ramp must be positive and at most half the support");
  }
}

InitialProfile bump_profile(double x_lo, double x_hi, double amplitude) {
  InitialProfile f{ProfileShape::Bump, x_lo, x_hi, 0.0, amplitude};
  f.validate();
  return f;
}

InitialProfile plateau_profile(double x_lo, double x_hi, double ramp, double amplitude) {
  InitialProfile f{ProfileShape::Plateau, x_lo, x_hi, ramp, amplitude};
  f.validate();
  return f;
}

InitialProfile box_profile(double x_lo, double x_hi, double amplitude) {
  InitialProfile f{ProfileShape::Box, x_lo, x_hi, 0.0, amplitude};
  f.validate();
  return f;
}

void to_json(nlohmann::json& j, const InitialProfile& f) {
  static const char* names[] = {"bump", "plateau", "box"};
  j = nlohmann::json{{"shape", names[static_cast<int>(f.shape)]},
                     {"support", {f.x_lo, f.x_hi}},
                     {"amplitude", f.amplitude}};
  if (f.shape == ProfileShape::Plateau) j["ramp"] = f.ramp;
}

void from_json(const nlohmann::json& j, InitialProfile& f) {
  const std::string shape = j.at("shape").get<std::string>();
  if (shape == "bump") {
    f.shape = ProfileShape::Bump;
  } else if (shape == "plateau") {
    f.shape = ProfileShape::Plateau;
  } else if (shape == "box") {
    f.shape = ProfileShape::Box;
  } else {
    throw BadProfile("unknown profile shape '" + shape + "'");
  }
  const auto& support = j.at("support");
  if (!support.is_array() || support.size() != 2) throw BadProfile("support must be [x_lo, x_hi]");
  f.x_lo = support[0].get<double>();
  f.x_hi = support[1].get<double>();
  f.amplitude = j.value("amplitude", 1.0);
  f.ramp = j.value("ramp", 0.0);
  f.validate();
}

ModeProblem make_mode_problem(int n, double lambda_j, const InitialProfile& f, double t, std::size_t j) {
  if (n < 1) throw std::invalid_argument("cross-section dimension must be >= 1");
  if (!(t > 0.0)) throw std::invalid_argument("time must be positive");
  f.validate();
  return ModeProblem{n, j, lambda_j, nu_for(n, lambda_j), f, t};
}

double heat_kernel(int n, double nu, double t, double x, double xi) {
  const double z = x * xi / (2.0 * t);
  const double d = x - xi;
  return std::pow(x * xi, 0.5 * (1 - n)) / (2.0 * t) * std::exp(-d * d / (4.0 * t)) * bessel::bessel_i(nu, z, true);
}

double heat_mode_value(const ModeProblem& mp, double t, double x, double rel_tol, QuadResult<double>* diagnostics) {
  if (!(t > 0.0) || !(x > 0.0)) throw std::invalid_argument("heat_mode: need t > 0 and x > 0");
  auto integrand = [&](double xi) { return heat_kernel(mp.n, mp.nu, t, x, xi) * mp.f(xi) * std::pow(xi, mp.n); };
  std::vector<double> cuts = mp.f.breakpoints();
  // The kernel concentrates near xi = x for small t.
  const double width = std::sqrt(t);
  for (double c : {x - 4.0 * width, x, x + 4.0 * width}) cuts.push_back(c);
  const auto parts = pieces(cuts, mp.f.x_lo, mp.f.x_hi);
  QuadResult<double> total;
  QuadOptions opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = rel_tol * coarse_scale<double>(integrand, parts, total.evaluations) / parts.size();
  for (const auto& [a, b] : parts) {
    const auto r = integrate<double>(integrand, a, b, opt, 4);
    total.value += r.value;
    total.error_estimate += r.error_estimate;
    total.evaluations += r.evaluations;
    total.converged = total.converged && r.converged;
  }
  if (diagnostics) *diagnostics = total;
  if (!total.converged) throw QuadratureFailure("heat_mode: tolerance not met at maximum refinement depth");
  return total.value;
}

ModeSolution heat_mode(const ModeProblem& mp, const std::vector<double>& x_eval, double rel_tol) {
  std::vector<QuadResult<double>> results(x_eval.size());
  parallel_for(x_eval.size(), [&](std::size_t i) { heat_mode_value(mp, mp.t, x_eval[i], rel_tol, &results[i]); });
  ModeSolution out{mp.n, mp.j, mp.nu, mp.t, {}, 0, 0.0};
  out.samples.reserve(x_eval.size());
  for (std::size_t i = 0; i < x_eval.size(); ++i) {
    const auto& r = results[i];
    if (!std::isfinite(r.value)) throw QuadratureFailure("heat_mode: non-finite value");
    out.samples.push_back({x_eval[i], r.value});
    out.kernel_terms += r.evaluations;
    if (r.value != 0.0) out.quadrature_error_estimate = std::max(out.quadrature_error_estimate, r.error_estimate / std::abs(r.value));
  }
  return out;
}

std::vector<double> log_spaced_grid(double lo, double hi, int per_decade) {
  if (!(lo > 0.0) || !(hi > lo) || per_decade < 1) throw std::invalid_argument("log_spaced_grid: need 0 < lo < hi");
  const double span = std::log10(hi / lo);
  const int steps = std::max(1, static_cast<int>(std::lround(span * per_decade)));
  std::vector<double> out;
  out.reserve(steps + 1);
  for (int i = 0; i <= steps; ++i) out.push_back(lo * std::pow(10.0, span * i / steps));
  out.back() = hi;
  return out;
}

double heat_pde_residual(const ModeEvaluator& a, const ResidualPatch& patch) {
  const double h = patch.h;
  const int m = std::max(patch.points, 2);
  if (patch.x_lo - 3.0 * h <= 0.0) throw std::invalid_argument("heat_pde_residual: patch too close to x = 0");
  if (patch.t_lo - 3.0 * h <= 0.0) throw std::invalid_argument("heat_pde_residual: patch too close to t = 0");
  std::vector<double> residuals(static_cast<std::size_t>(m) * m);
  parallel_for(residuals.size(), [&](std::size_t idx) {
    const double t = patch.t_lo + (patch.t_hi - patch.t_lo) * static_cast<double>(idx / m) / (m - 1);
    const double x = patch.x_lo + (patch.x_hi - patch.x_lo) * static_cast<double>(idx % m) / (m - 1);
    double dt = 0.0, dx = 0.0, dxx = 0.0, centre = 0.0;
    for (int s = -3; s <= 3; ++s) {
      const double ax = a(t, x + s * h);
      if (s == 0) centre = ax;
      dx += kFirst[s + 3] * ax;
      dxx += kSecond[s + 3] * ax;
      if (s != 0) dt += kFirst[s + 3] * a(t + s * h, x);
    }
    dt /= h;
    dx /= h;
    dxx /= h * h;
    residuals[idx] = std::abs(dt - (dxx + patch.n / x * dx + patch.lambda_j / (x * x) * centre));
  });
  return *std::max_element(residuals.begin(), residuals.end());
}

namespace {

struct ResolventPoint {
  cplx value;
  cplx regular_coefficient;
  cplx decaying_coefficient;
  double error = 0.0;
};

ResolventPoint resolvent_point(int n, double nu, cplx s, const InitialProfile& f, double x, double rel_tol) {
  const double a = 0.5 * (1 - n);
  QuadOptions opt;
  opt.rel_tol = rel_tol;
  const auto cuts = f.breakpoints();
  ResolventPoint out;
  // Scaled Bessel factors: I(s xi) K(s x) = I~(s xi) K~(s x) e^{s (xi - x)}.
  auto left = [&](double xi) -> cplx {
    return std::pow(xi, a + n) * bessel::bessel_i(nu, s * xi, true) * std::exp(s * (xi - x)) * f(xi);
  };
  auto right = [&](double xi) -> cplx {
    return std::pow(xi, a + n) * bessel::bessel_k(nu, s * xi, true) * std::exp(s * (x - xi)) * f(xi);
  };
  const auto left_parts = pieces(cuts, f.x_lo, std::min(x, f.x_hi));
  const auto right_parts = pieces(cuts, std::max(x, f.x_lo), f.x_hi);
  std::size_t evals = 0;
  opt.abs_tol = rel_tol * (coarse_scale<cplx>(left, left_parts, evals) + coarse_scale<cplx>(right, right_parts, evals)) /
                static_cast<double>(left_parts.size() + right_parts.size() + 1);
  cplx s1 = 0.0, s2 = 0.0;
  for (const auto& [lo, hi] : left_parts) {
    const auto r = integrate<cplx>(left, lo, hi, opt, 4);
    if (!r.converged) throw QuadratureFailure("resolvent_mode: tolerance not met");
    s1 += r.value;
    out.error += r.error_estimate;
  }
  for (const auto& [lo, hi] : right_parts) {
    const auto r = integrate<cplx>(right, lo, hi, opt, 4);
    if (!r.converged) throw QuadratureFailure("resolvent_mode: tolerance not met");
    s2 += r.value;
    out.error += r.error_estimate;
  }
  const cplx kx = bessel::bessel_k(nu, s * x, true);
  const cplx ix = bessel::bessel_i(nu, s * x, true);
  out.value = std::pow(x, a) * (kx * s1 + ix * s2);
  out.decaying_coefficient = s1 * std::exp(s * x);
  out.regular_coefficient = s2 * std::exp(-s * x);
  return out;
}

void check_off_cut(cplx lambda) {
  if (lambda.imag() == 0.0 && lambda.real() <= 0.0) throw SpectrumRay("resolvent: lambda lies on (-inf, 0]");
  if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag())) throw SpectrumRay("resolvent: lambda not finite");
}

}  // namespace

ResolventModeSolution resolvent_mode(int n, double lambda_j, cplx lambda, const InitialProfile& f,
                                     const std::vector<double>& x_eval, double rel_tol) {
  check_off_cut(lambda);
  f.validate();
  ResolventModeSolution out;
  out.n = n;
  out.lambda_j = lambda_j;
  out.nu = nu_for(n, lambda_j);
  out.lambda = lambda;
  out.sqrt_lambda = std::sqrt(lambda);
  std::vector<ResolventPoint> points(x_eval.size());
  parallel_for(x_eval.size(), [&](std::size_t i) {
    if (!(x_eval[i] > 0.0)) throw std::invalid_argument("resolvent_mode: evaluation points must be positive");
    points[i] = resolvent_point(n, out.nu, out.sqrt_lambda, f, x_eval[i], rel_tol);
  });
  for (std::size_t i = 0; i < x_eval.size(); ++i) {
    const auto& p = points[i];
    out.samples.push_back({x_eval[i], p.value, p.regular_coefficient, p.decaying_coefficient});
    out.quadrature_error_estimate = std::max(out.quadrature_error_estimate, p.error);
  }
  return out;
}

double resolvent_residual(int n, double lambda_j, cplx lambda, const InitialProfile& f,
                          const std::vector<double>& x_eval, double h) {
  std::vector<double> stencil;
  for (double x : x_eval) {
    for (int s = -3; s <= 3; ++s) stencil.push_back(x + s * h);
  }
  const auto sol = resolvent_mode(n, lambda_j, lambda, f, stencil);
  double worst = 0.0;
  for (std::size_t i = 0; i < x_eval.size(); ++i) {
    const double x = x_eval[i];
    cplx dx = 0.0, dxx = 0.0;
    for (int s = 0; s < 7; ++s) {
      dx += kFirst[s] * sol.samples[7 * i + s].value;
      dxx += kSecond[s] * sol.samples[7 * i + s].value;
    }
    dx /= h;
    dxx /= h * h;
    const cplx u = sol.samples[7 * i + 3].value;
    const cplx lu = dxx + static_cast<double>(n) / x * dx + lambda_j / (x * x) * u;
    worst = std::max(worst, std::abs(lambda * u - lu - f(x)));
  }
  return worst;
}

SectorialCheck sectorial_check(int n, double lambda_j, const InitialProfile& f, const std::vector<double>& args,
                               const std::vector<double>& moduli, const std::vector<double>& x_grid, double factor) {
  SectorialCheck out;
  for (double arg : args) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (double m : moduli) {
      const cplx lambda = std::polar(m, arg);
      const auto sol = resolvent_mode(n, lambda_j, lambda, f, x_grid);
      double sup = 0.0;
      for (const auto& s : sol.samples) sup = std::max(sup, std::abs(s.value));
      out.entries.push_back({arg, m, sup, m * sup});
      lo = std::min(lo, m * sup);
      hi = std::max(hi, m * sup);
    }
    if (lo > 0.0) out.max_ratio = std::max(out.max_ratio, hi / lo);
    else out.max_ratio = std::numeric_limits<double>::infinity();
  }
  out.passed = out.max_ratio < factor;
  return out;
}

void write_mode_csv(std::ostream& os, const std::vector<ModeSolution>& solutions) {
  os << "mode_j,nu,t,x,value\n";
  char buf[160];
  for (const auto& sol : solutions) {
    for (const auto& s : sol.samples) {
      std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g\n", sol.j, sol.nu, sol.t, s.x, s.value);
      os << buf;
    }
  }
}

}  // namespace coneasym
