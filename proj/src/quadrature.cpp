#include "coneasym/quadrature.hpp"

#include <numbers>

namespace coneasym {

namespace {

GaussLegendre16 build_rule() {
  GaussLegendre16 rule{};
  constexpr int n = 16;
  for (int i = 0; i < n / 2; ++i) {
    // Newton iteration on P_16 from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const GaussLegendre16& gauss_legendre_16() {
  static const GaussLegendre16 rule = build_rule();
  return rule;
}

}  // namespace coneasym
