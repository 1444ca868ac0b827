#pragma once

#include <optional>

#include <json.hpp>

namespace coneasym {

/// Distance below which an interval endpoint hit is reported as resonant.
inline constexpr double kBoundaryFlagTolerance = 1e-9;

/// Open interval (lo, hi) of admissible weights.
struct WeightWindow {
  double lo;
  double hi;

  bool contains(double gamma) const { return lo < gamma && gamma < hi; }
  double midpoint() const { return 0.5 * (lo + hi); }
};

/// Weight gamma for a cone of cross-section dimension n, with the hypothesis flags.
struct WeightConfig {
  int n = 1;
  double gamma = 0.0;
  double s = 0.0;
  double p = 2.0;
  bool satisfies_basic = false;  ///< (n-3)/2 < gamma < min((n+1)/2, -1 + sqrt(((n-1)/2)^2 - lambda_1))
  bool satisfies_extra = false;  ///< gamma inside admissible_window(n, lambda_1)

  nlohmann::json to_json() const;
};

WeightConfig make_weight_config(int n, double lambda1, double gamma, double s = 0.0, double p = 2.0);

/// Window for gamma under the lower bound max((n-3)/2, 1 - sqrt(((n-1)/2)^2 - lambda_1)).
/// Empty when lo >= hi or, for n <= 2, when lambda_1 >= ((n-1)/2)^2 - 1.
std::optional<WeightWindow> admissible_window(int n, double lambda1);

/// J_m = [(n+1)/2 - gamma - 2m, (n+1)/2 - gamma - 2(m-1)).
struct WeightInterval {
  int m;
  double lo;
  double hi;

  bool contains(double x) const { return lo <= x && x < hi; }
};

WeightInterval j_interval(int n, double gamma, int m);

struct IntervalLocation {
  int m;
  /// Within kBoundaryFlagTolerance of an endpoint of J_m.
  bool near_boundary;
};

/// The unique m >= 1 with x in J_m, or nullopt if x >= (n+1)/2 - gamma.
std::optional<IntervalLocation> locate_interval(int n, double gamma, double x);

/// omega(x) x^a log^m(x) lies in the weighted space of weight gamma iff a > gamma - (n+1)/2.
bool membership(int n, double gamma, double a, int logpow);

/// Truncated weighted integral \int_eps^1 (x^{(n+1)/2-gamma} x^a |log x|^logpow)^2 dx/x,
/// evaluated by quadrature in s = -log x.
double weighted_norm_integral(int n, double gamma, double a, int logpow, double eps);

/// Classifies convergence of the weighted norm integral by quadrature: convergent iff the
/// contribution of a far window of s = -log x is smaller than that of the window before it.
bool quadrature_says_member(int n, double gamma, double a, int logpow);

}  // namespace coneasym
