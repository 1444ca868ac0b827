#include "coneasym/weights.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "coneasym/quadrature.hpp"

namespace coneasym {

nlohmann::json WeightConfig::to_json() const {
  return {{"n", n},
          {"gamma", gamma},
          {"s", s},
          {"p", p},
          {"satisfies_basic", satisfies_basic},
          {"satisfies_extra", satisfies_extra}};
}

WeightConfig make_weight_config(int n, double lambda1, double gamma, double s, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("WeightConfig: p must lie in (1, inf)");
  WeightConfig cfg;
  cfg.n = n;
  cfg.gamma = gamma;
  cfg.s = s;
  cfg.p = p;
  const double half = 0.5 * (n - 1);
  const double root = std::sqrt(half * half - lambda1);
  cfg.satisfies_basic = 0.5 * (n - 3) < gamma && gamma < std::min(0.5 * (n + 1), -1.0 + root);
  const auto window = admissible_window(n, lambda1);
  cfg.satisfies_extra = window && window->contains(gamma);
  return cfg;
}

std::optional<WeightWindow> admissible_window(int n, double lambda1) {
  if (n < 1) throw std::invalid_argument("admissible_window: n must be >= 1");
  if (!(lambda1 < 0.0)) throw std::invalid_argument("admissible_window: lambda_1 must be < 0");
  const double half = 0.5 * (n - 1);
  // The hypothesis lambda_1 < ((n-1)/2)^2 - 1 holds automatically for n >= 3.
  if (n < 3 && !(lambda1 < half * half - 1.0)) return std::nullopt;
  const double root = std::sqrt(half * half - lambda1);
  const WeightWindow w{std::max(0.5 * (n - 3), 1.0 - root), std::min(0.5 * (n + 1), -1.0 + root)};
  if (!(w.lo < w.hi)) return std::nullopt;
  return w;
}

WeightInterval j_interval(int n, double gamma, int m) {
  if (m < 1) throw std::invalid_argument("j_interval: m must be >= 1");
  const double lo = 0.5 * (n + 1) - gamma - 2.0 * m;
  return WeightInterval{m, lo, lo + 2.0};
}

std::optional<IntervalLocation> locate_interval(int n, double gamma, double x) {
  const double top = 0.5 * (n + 1) - gamma;
  if (x >= top) return std::nullopt;
  int m = static_cast<int>(std::ceil((top - x) / 2.0));
  // Guard the half-open convention against rounding in the division.
  m = std::max(m, 1);
  while (!j_interval(n, gamma, m).contains(x)) {
    if (x < j_interval(n, gamma, m).lo) {
      ++m;
    } else {
      --m;
    }
  }
  const auto J = j_interval(n, gamma, m);
  const bool near = std::abs(x - J.lo) <= kBoundaryFlagTolerance || std::abs(J.hi - x) <= kBoundaryFlagTolerance;
  return IntervalLocation{m, near};
}

bool membership(int n, double gamma, double a, int logpow) {
  if (logpow < 0) throw std::invalid_argument("membership: log power must be >= 0");
  return a > gamma - 0.5 * (n + 1);
}

double weighted_norm_integral(int n, double gamma, double a, int logpow, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("weighted_norm_integral: eps in (0,1)");
  // x = e^{-s}: the integrand becomes e^{-c s} s^{2 logpow} ds with c = 2((n+1)/2 - gamma + a).
  const double c = 2.0 * (0.5 * (n + 1) - gamma + a);
  auto integrand = [c, logpow](double s) { return std::exp(-c * s) * std::pow(s, 2 * logpow); };
  QuadOptions opt;
  opt.rel_tol = 1e-12;
  const auto res = integrate<double>(integrand, 0.0, -std::log(eps), opt, 16);
  if (!res.converged) throw QuadratureFailure("weighted_norm_integral: tolerance not met");
  return res.value;
}

bool quadrature_says_member(int n, double gamma, double a, int logpow) {
  // Compare the contributions of two adjacent windows [L, 2L] and [2L, 3L] in s = -log x,
  // placed past the peak of s^{2m} e^{-cs} so that the sign of c decides. Both are scaled
  // by e^{2cL}, which keeps the integrands within e^{+-20(2m+1)}.
  const double c = 2.0 * (0.5 * (n + 1) - gamma + a);
  const double len = c == 0.0 ? 1.0 : 20.0 * (2 * logpow + 1) / std::abs(c);
  auto scaled = [c, logpow, len](double s) { return std::exp(-c * (s - 2.0 * len)) * std::pow(s, 2 * logpow); };
  QuadOptions opt;
  opt.rel_tol = 1e-12;
  const auto near = integrate<double>(scaled, len, 2.0 * len, opt, 16);
  const auto far = integrate<double>(scaled, 2.0 * len, 3.0 * len, opt, 16);
  if (!near.converged || !far.converged) throw QuadratureFailure("quadrature_says_member: tolerance not met");
  // Equal contributions (c = 0, no log) is the divergent borderline.
  return far.value < (1.0 - 1e-9) * near.value;
}

}  // namespace coneasym
